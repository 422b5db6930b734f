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

#ifndef AGGPLAY_RNG_HPP_
#define AGGPLAY_RNG_HPP_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>

namespace aggplay {

// SplitMix64 finalizer (Steele, Lea & Flood). Bijective mix of a 64-bit word.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// FNV-1a over a label; used to derive independent per-purpose streams.
constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

// Counter-based SplitMix64 generator. Output i is mix64(seed + (i+1)*gamma),
// so the sequence is a pure function of (seed, counter) and is documented
// here so runs can be matched by independent implementations:
//
//   gamma      = 0x9E3779B97F4A7C15 (2^64 / golden ratio)
//   next()     = mix64(state += gamma)
//   u01()      = (next() >> 11) * 2^-53, in [0, 1)
//   uniform_int(n) = min(n-1, floor(u01() * n))
//   discrete(p)    = inverse-CDF scan of one u01() draw over p in index order
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  int uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
    int v = static_cast<int>(u01() * n);
    return v < n ? v : n - 1;
  }

  // Exposes the counter so callers can check how much was consumed.
  std::uint64_t state() const { return state_; }

  // Samples an index from a probability vector by inverse CDF.
  int discrete(std::span<const double> probs) {
    if (probs.empty()) throw std::invalid_argument("discrete: empty support");
    double u = u01();
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      cum += probs[i];
      if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
  }

 private:
  std::uint64_t state_;
};

// Derives the stream for one purpose from a root seed. Distinct labels give
// independent streams; the same (root_seed, label) pair always gives the
// same stream, which is what couples runs that must share randomness.
inline SplitMix64 derive_stream(std::uint64_t root_seed, std::string_view label) {
  return SplitMix64(mix64(root_seed ^ fnv1a64(label)));
}

}  // namespace aggplay

#endif  // AGGPLAY_RNG_HPP_
