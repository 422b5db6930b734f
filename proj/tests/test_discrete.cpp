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
#include <cmath>
#include <vector>

#include "aggplay/discrete.hpp"
#include "aggplay/experiment.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace aggplay;

namespace {

AnonymousPolymatrixGame matching_pennies() {
  return AnonymousPolymatrixGame(
      {2, 2}, {{1, -1, -1, 1}, {-1, 1, 1, -1}});
}

double simplex_defect(std::span<const double> v) {
  double total = 0.0, neg = 0.0;
  for (double p : v) {
    total += p;
    neg = std::min(neg, p);
  }
  return std::max(std::fabs(total - 1.0), -neg);
}

}  // namespace

TEST_CASE("step-size schedule") {
  CHECK(StepSizeSchedule{1.0}.alpha(1) == doctest::Approx(0.5));
  CHECK(StepSizeSchedule{0.7}.alpha(1) == doctest::Approx(std::pow(2.0, -0.7)));
  CHECK_THROWS_AS(StepSizeSchedule{0.5}.validate(), std::invalid_argument);
  CHECK_THROWS_AS(StepSizeSchedule{1.2}.validate(), std::invalid_argument);
  CHECK_THROWS_AS((ExplorationConfig{1.0, true}).validate(),
                  std::invalid_argument);
}

TEST_CASE("belief update recurrence") {
  std::vector<double> pi = {0.3, 0.7};
  fp_belief_update(pi, 0, 1.0);
  CHECK(pi == std::vector<double>{1.0, 0.0});

  pi = {1.0, 0.0};
  fp_belief_update(pi, 1, 0.5);
  CHECK(pi[0] == doctest::Approx(0.5));
  CHECK(pi[1] == doctest::Approx(0.5));

  CHECK_THROWS_AS(fp_belief_update(pi, 0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(fp_belief_update(pi, 0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(fp_belief_update(pi, 7, 0.5), std::invalid_argument);
}

TEST_CASE("running average emerges from the 1/(k+1) schedule") {
  SplitMix64 rng(2);
  const int n = 4;
  std::vector<double> belief(n, 0.0);
  std::vector<int> counts(n, 0);
  const int first = rng.uniform_int(n);
  belief[first] = 1.0;
  ++counts[first];
  const StepSizeSchedule schedule{1.0};
  for (long k = 1; k <= 500; ++k) {
    const int a = rng.uniform_int(n);
    fp_belief_update(belief, a, schedule.alpha(k));
    ++counts[a];
    for (int b = 0; b < n; ++b)
      CHECK(belief[b] ==
            doctest::Approx(static_cast<double>(counts[b]) / (k + 1))
                .epsilon(1e-12));
  }
}

TEST_CASE("iterated updates equal the closed-form weights") {
  // weights: w_l = alpha_l * prod_{m=l+1..k} (1 - alpha_m), with w_0 the
  // leftover mass of the point-mass initialization
  SplitMix64 rng(5);
  const GameDims dims{4, 3};
  const int space = dims.aggregate_space_size();
  const StepSizeSchedule schedule{0.7};
  const long k_max = 60;

  std::vector<int> observed(k_max + 1);
  for (long l = 0; l <= k_max; ++l) observed[l] = rng.uniform_int(space);

  std::vector<double> iterated(space, 0.0);
  iterated[observed[0]] = 1.0;
  for (long k = 1; k <= k_max; ++k)
    aggfp_belief_update(iterated, observed[k], schedule.alpha(k));

  std::vector<double> weights(k_max + 1, 1.0);
  for (long l = 1; l <= k_max; ++l) weights[l] = schedule.alpha(l);
  for (long l = 0; l <= k_max; ++l)
    for (long m = l + 1; m <= k_max; ++m) weights[l] *= 1.0 - schedule.alpha(m);

  std::vector<double> closed(space, 0.0);
  for (long l = 0; l <= k_max; ++l) closed[observed[l]] += weights[l];

  for (int x = 0; x < space; ++x)
    CHECK(iterated[x] == doctest::Approx(closed[x]).epsilon(1e-12));
}

TEST_CASE("empirical frequencies") {
  std::vector<double> gamma = {1.0, 0.0};
  const StepSizeSchedule schedule{1.0};
  for (long k = 1; k <= 100; ++k) empirical_update(gamma, 0, schedule.alpha(k));
  CHECK(gamma[0] == doctest::Approx(1.0));  // constant action is a fixed point

  gamma = {1.0, 0.0};
  for (long k = 1; k <= 1001; ++k)
    empirical_update(gamma, static_cast<int>(k % 2), schedule.alpha(k));
  CHECK(gamma[0] == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(gamma[1] == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("initial beliefs are point masses on the first observation") {
  const GameDims dims{4, 3};
  const ActionProfile a0 = {2, 0, 2, 1};
  const BeliefState state(dims, a0);
  for (int i = 0; i < 4; ++i) {
    CHECK(state.action_belief(i)[a0[i]] == 1.0);
    CHECK(state.empirical(i)[a0[i]] == 1.0);
    const auto mu = state.aggregate_belief(i);
    for (int r = 0; r < dims.aggregate_space_size(); ++r)
      CHECK(mu[r] == (r == sigma(a0, i, dims).rank ? 1.0 : 0.0));
  }
}

TEST_CASE("aggregate and individual beliefs can disagree as predictors") {
  // two steps, three agents, two actions: after observing (0,0,0) and
  // (0,1,1), agent 0's aggregate belief puts no mass on the mixed count
  // vector although independent sampling from the action beliefs does
  const GameDims dims{3, 2};
  BeliefState state(dims, {0, 0, 0});
  state.observe({0, 1, 1}, StepSizeSchedule{1.0}.alpha(1));

  const auto mu = state.aggregate_belief(0);
  const auto predicted =
      aggregate_distribution(state.action_beliefs(), 0, dims);
  const int mixed = rank_count({1, 1});
  CHECK(mu[mixed] == doctest::Approx(0.0));
  CHECK(predicted[mixed] == doctest::Approx(0.5));
  CHECK(std::fabs(mu[mixed] - predicted[mixed]) > 0.4);
}

TEST_CASE("greedy steps consume no randomness when delta is zero") {
  SplitMix64 rng(9);
  const auto game = matching_pennies();
  BeliefState state(game.dims(), {0, 1});
  const std::uint64_t before = rng.state();
  fp_step(state, game, StepSizeSchedule{1.0}, ExplorationConfig{0.0, true}, rng,
          0);
  CHECK(rng.state() == before);
}

TEST_CASE("exploration-only play pushes beliefs toward the count law") {
  SplitMix64 rng(11);
  const GameDims dims{3, 2};
  const auto game = oracle::random_game(rng, 3, 2);
  SplitMix64 explore = derive_stream(77, "explore");
  BeliefState state(dims, {0, 0, 0});
  const StepSizeSchedule schedule{1.0};
  for (long k = 0; k < 4000; ++k)
    fp_step(state, game, schedule, ExplorationConfig{1.0 - 1e-12, true},
            explore, k);
  const auto mu = state.aggregate_belief(0);
  CHECK(mu[rank_count({2, 0})] == doctest::Approx(0.25).epsilon(0.15));
  CHECK(mu[rank_count({1, 1})] == doctest::Approx(0.5).epsilon(0.15));
  CHECK(mu[rank_count({0, 2})] == doctest::Approx(0.25).epsilon(0.15));
}

TEST_CASE("fictitious play balances matching pennies") {
  const TrajectoryRecord rec =
      run_repeated_play(Algorithm::classical_fp, matching_pennies(), 10000, 4,
                        StepSizeSchedule{1.0}, ExplorationConfig{0.0, true});
  for (const auto& freqs : rec.final_empirical)
    for (double f : freqs) CHECK(f == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("run_repeated_play is reproducible and snapshots on stride") {
  const auto game = matching_pennies();
  const StepSizeSchedule schedule{1.0};
  const ExplorationConfig exploration{0.1, true};

  const auto a = run_repeated_play(Algorithm::classical_fp, game, 1000, 3,
                                   schedule, exploration, 100);
  const auto b = run_repeated_play(Algorithm::classical_fp, game, 1000, 3,
                                   schedule, exploration, 100);
  CHECK(a.actions == b.actions);
  CHECK(a.empirical_snapshots == b.empirical_snapshots);
  CHECK(a.snapshot_steps.size() == 10);

  const auto c = run_repeated_play(Algorithm::classical_fp, game, 1003, 3,
                                   schedule, exploration, 100);
  CHECK(c.snapshot_steps.size() == 11);  // ceil(1003/100)
  CHECK(c.snapshot_steps.back() == 1003);

  CHECK_THROWS_AS(run_repeated_play(Algorithm::two_timescale_fp, game, 10, 1,
                                    schedule, exploration),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_repeated_play(Algorithm::classical_fp, game, 0, 1,
                                    schedule, exploration),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_repeated_play(Algorithm::classical_fp, game, 10, 1,
                                    schedule, exploration, 0),
                  std::invalid_argument);
}

TEST_CASE("fp and aggfp produce identical trajectories on polymatrix games") {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const int num_agents = 2 + rng.uniform_int(4);
    const int num_actions = 2 + rng.uniform_int(2);
    const auto game = oracle::random_game(rng, num_agents, num_actions);
    for (double delta : {0.0, 0.1}) {
      const auto cmp =
          compare_coupled_runs(game, 300, rng.next(), StepSizeSchedule{1.0},
                               ExplorationConfig{delta, true});
      CHECK(cmp.identical);
      CHECK(cmp.reward_gap <= 1e-9);
    }
  }
}

TEST_CASE("with one opponent the aggregate view is the individual view") {
  SplitMix64 rng(15);
  const auto game = oracle::random_game(rng, 2, 3);
  const auto fp = run_repeated_play(Algorithm::classical_fp, game, 500, 21,
                                    StepSizeSchedule{1.0},
                                    ExplorationConfig{0.2, true});
  const auto agg = run_repeated_play(Algorithm::aggregate_fp, game, 500, 21,
                                     StepSizeSchedule{1.0},
                                     ExplorationConfig{0.2, true});
  CHECK(fp.actions == agg.actions);
}

TEST_CASE("belief vectors stay on their simplices") {
  SplitMix64 rng(17);
  const GameDims dims{4, 3};
  ActionProfile profile = {0, 1, 2, 0};
  BeliefState state(dims, profile);
  const StepSizeSchedule schedule{0.7};
  for (long k = 1; k <= 100000; ++k) {
    for (int& a : profile) a = rng.uniform_int(3);
    state.observe(profile, schedule.alpha(k));
  }
  for (int i = 0; i < 4; ++i) {
    CHECK(simplex_defect(state.action_belief(i)) <= 1e-9);
    CHECK(simplex_defect(state.aggregate_belief(i)) <= 1e-9);
    CHECK(simplex_defect(state.empirical(i)) <= 1e-9);
  }
}
