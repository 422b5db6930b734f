// Copyright 2026 the aggplay project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <vector>

#include "aggplay/rng.hpp"
#include "doctest.h"

using namespace aggplay;

TEST_CASE("same seed gives the same sequence") {
  SplitMix64 a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("outputs are a pure function of the counter") {
  // the k-th output equals mix64(seed + (k+1)*gamma)
  const std::uint64_t seed = 0xDEADBEEFULL;
  SplitMix64 rng(seed);
  for (std::uint64_t k = 1; k <= 10; ++k)
    CHECK(rng.next() == mix64(seed + k * 0x9E3779B97F4A7C15ULL));
}

TEST_CASE("derived streams differ by label and match by label") {
  SplitMix64 explore1 = derive_stream(7, "explore");
  SplitMix64 explore2 = derive_stream(7, "explore");
  SplitMix64 perturb = derive_stream(7, "perturb");
  CHECK(explore1.next() == explore2.next());
  CHECK(explore1.next() != perturb.next());
}

TEST_CASE("u01 stays in the unit interval") {
  SplitMix64 rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.u01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform_int covers its range") {
  SplitMix64 rng(11);
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 20000; ++i) {
    const int v = rng.uniform_int(5);
    REQUIRE(v >= 0);
    REQUIRE(v < 5);
    ++hits[v];
  }
  for (int h : hits) CHECK(h > 3000);  // near 4000 each
  CHECK_THROWS_AS(rng.uniform_int(0), std::invalid_argument);
}

TEST_CASE("discrete follows the probabilities") {
  SplitMix64 rng(13);
  const std::vector<double> probs = {0.1, 0.2, 0.4, 0.2, 0.1};
  std::vector<int> hits(5, 0);
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) ++hits[rng.discrete(probs)];
  for (int k = 0; k < 5; ++k)
    CHECK(static_cast<double>(hits[k]) / draws ==
          doctest::Approx(probs[k]).epsilon(0.05));
  CHECK_THROWS_AS(rng.discrete(std::span<const double>{}),
                  std::invalid_argument);
}
