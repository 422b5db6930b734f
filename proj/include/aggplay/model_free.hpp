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

#ifndef AGGPLAY_MODEL_FREE_HPP_
#define AGGPLAY_MODEL_FREE_HPP_

#include <cstdint>
#include <vector>

#include "aggplay/discrete.hpp"
#include "aggplay/game.hpp"
#include "aggplay/record.hpp"
#include "aggplay/rng.hpp"

// Model-free learning in games with random payoffs: agents observe actions
// and their own realized rewards only. Reward estimates live in Q-tables
// updated on a fast timescale while beliefs move on a slow one. The
// aggregate learner's table has one column per opponent count vector; the
// classical baseline's table has one column per opponent action profile and
// grows exponentially with the number of agents.
namespace aggplay {

// Discrete additive payoff noise with finite support.
struct PayoffPerturbation {
  std::vector<double> support;
  std::vector<double> probs;

  void validate() const;
  double mean() const;
  double max_abs() const;
  double sample(SplitMix64& rng) const;

  static PayoffPerturbation none() { return {{0.0}, {1.0}}; }
};

// Polymatrix base game plus per-agent additive perturbations; every
// realization keeps the polymatrix/anonymous structure.
struct RandomPayoffGame {
  AnonymousPolymatrixGame base;
  std::vector<PayoffPerturbation> perturbations;

  void validate() const;
};

// Realized reward of one agent: base pairwise sum plus one perturbation
// draw from `rng`.
double sample_reward(const RandomPayoffGame& game, const ActionProfile& profile,
                     int agent, SplitMix64& rng);

// Reward estimates with per-cell visit counters. `cols` is the aggregate
// space size for the aggregate learner and n^(N-1) for the profile-indexed
// baseline.
struct QTable {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;
  std::vector<std::int32_t> visits;

  QTable() = default;
  QTable(int rows_, int cols_)
      : rows(rows_),
        cols(cols_),
        values(static_cast<std::size_t>(rows_) * cols_, 0.0),
        visits(static_cast<std::size_t>(rows_) * cols_, 0) {}

  std::size_t cell(int row, int col) const {
    return static_cast<std::size_t>(row) * cols + col;
  }
  const double* row_ptr(int row) const {
    return values.data() + static_cast<std::size_t>(row) * cols;
  }
};

// alpha_k = (k+1)^(-alpha_exponent) drives beliefs, beta_c =
// (c+1)^(-beta_exponent) drives the Q-update after the c-th visit of a
// cell. alpha decays faster than beta, so estimation runs on the faster
// timescale.
struct TwoTimescaleSchedule {
  double alpha_exponent = 0.7;
  double beta_exponent = 0.6;

  void validate() const;
  double alpha(long k) const;
  double beta(long visit_count) const;
};

// One Q-update: increments the visit counter of (action, col) and moves the
// cell toward `reward` with beta of the new count. No other cell changes.
void q_update(QTable& table, int action, int col, double reward,
              const TwoTimescaleSchedule& schedule);

// Column index of an opponent action profile (opponents of `agent` in
// ascending order, first opponent most significant).
std::size_t opponent_profile_index(const ActionProfile& profile, int agent,
                                   int num_actions);

// Expected reward tables under the perturbation mean: the succinct table of
// one agent, and the (action x opponent profile) table for the baseline.
SuccinctReward expected_succinct(const RandomPayoffGame& game, int agent);
std::vector<double> expected_profile_table(const RandomPayoffGame& game,
                                           int agent);

// Total l1 error between the Q-tables and the expected reward tables,
// summed over agents, actions and columns.
double q_error_aggregate(const std::vector<QTable>& tables,
                         const RandomPayoffGame& game);
double q_error_profile(const std::vector<QTable>& tables,
                       const RandomPayoffGame& game);

// Total l1 distance between per-agent empirical frequencies and a target
// mixed profile.
double ne_distance(const std::vector<std::vector<double>>& empirical,
                   const MixedProfile& target);
double ne_distance(std::span<const double> flat_empirical,
                   const MixedProfile& target);

struct ModelFreeResult {
  TrajectoryRecord record;
  std::vector<QTable> q_tables;
};

struct ModelFreeOptions {
  long snapshot_stride = 100;
  // Pre-filled tables (copied) instead of zero initialization.
  const std::vector<QTable>* initial_q = nullptr;
  // Skip all Q-updates (visits still count); for reduction tests.
  bool freeze_q = false;
};

// Two-timescale aggregate fictitious play: Q over (own action, opponent
// count rank), greedy action argmax_a sum_x mu(x) Q(a, x), collective
// delta-greedy exploration. All randomness is derived from `seed` via the
// documented streams; the perturbation stream does not depend on the
// algorithm, so runs of different algorithms under one seed face the same
// payoff noise.
ModelFreeResult run_two_timescale_aggfp(const RandomPayoffGame& game,
                                        long steps, std::uint64_t seed,
                                        const TwoTimescaleSchedule& schedule,
                                        double delta,
                                        const ModelFreeOptions& options = {});

// Baseline with the profile-indexed Q-table and per-opponent action
// beliefs; the greedy score enumerates all opponent profiles weighted by
// the product of beliefs. Refuses games with more than 6 agents.
ModelFreeResult run_two_timescale_fp(const RandomPayoffGame& game, long steps,
                                     std::uint64_t seed,
                                     const TwoTimescaleSchedule& schedule,
                                     double delta,
                                     const ModelFreeOptions& options = {});

// Individual Q-learning baseline: Q over own actions only, Boltzmann play
// with the given temperature, same beta schedule for the Q-update; the
// empirical frequencies use the alpha schedule so the reported series are
// comparable across algorithms.
ModelFreeResult run_individual_q(const RandomPayoffGame& game, long steps,
                                 std::uint64_t seed,
                                 const TwoTimescaleSchedule& schedule,
                                 double temperature,
                                 const ModelFreeOptions& options = {});

}  // namespace aggplay

#endif  // AGGPLAY_MODEL_FREE_HPP_
