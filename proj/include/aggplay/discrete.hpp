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

#ifndef AGGPLAY_DISCRETE_HPP_
#define AGGPLAY_DISCRETE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "aggplay/game.hpp"
#include "aggplay/record.hpp"
#include "aggplay/rng.hpp"

// Repeated play of a known game under fictitious play and its aggregate
// variant. Both dynamics share the same observation bookkeeping: after the
// joint action of step k is observed, every tracked vector v moves as
// v += alpha_k * (one_hot(observation) - v). They differ only in which
// belief feeds the best response: per-opponent action beliefs (FP) or the
// distribution over opponent count vectors (agg-FP).
namespace aggplay {

// alpha_k = (k+1)^(-exponent) for k >= 1. Exponents in (0.5, 1] satisfy
// sum alpha = inf, sum alpha^2 < inf; 1 gives the plain running average.
struct StepSizeSchedule {
  double exponent = 1.0;

  void validate() const;
  double alpha(long k) const;
};

// With probability delta the greedy step is replaced by uniform play. Under
// a shared coin all agents explore together (one draw decides for everyone);
// otherwise each agent flips its own coin. delta = 0 consumes no randomness.
struct ExplorationConfig {
  double delta = 0.0;
  bool shared_coin = true;

  void validate() const;
};

// Beliefs held at the current step. Action beliefs are stored once, not per
// observer, because every agent sees the same actions and applies the same
// schedule; aggregate beliefs genuinely differ per agent and are stored per
// agent, as are the empirical frequencies of own play.
class BeliefState {
 public:
  BeliefState(const GameDims& dims, const ActionProfile& initial_actions);

  const GameDims& dims() const { return dims_; }

  // pi_hat^j: belief about agent j's strategy.
  std::span<const double> action_belief(int agent) const;
  // mu_hat^i: agent i's belief over opponent count vectors, by rank.
  std::span<const double> aggregate_belief(int agent) const;
  // gamma_hat^i: weighted frequency of agent i's own past actions.
  std::span<const double> empirical(int agent) const;

  const MixedProfile& action_beliefs() const { return action_beliefs_; }
  const std::vector<std::vector<double>>& empirical_all() const {
    return empirical_;
  }

  // Folds the observed joint action into every tracked vector with weight
  // alpha (the step-k update).
  void observe(const ActionProfile& profile, double alpha);

 private:
  GameDims dims_;
  MixedProfile action_beliefs_;                     // N x n
  std::vector<std::vector<double>> aggregate_beliefs_;  // N x |X|
  std::vector<std::vector<double>> empirical_;          // N x n
};

// The shared one-observation recurrence, v += alpha * (e_observed - v).
// alpha must lie in (0, 1]; the vector stays on its simplex.
void fp_belief_update(std::span<double> belief, int observed_action,
                      double alpha);
void aggfp_belief_update(std::span<double> aggregate_belief, int observed_rank,
                         double alpha);
void empirical_update(std::span<double> empirical, int own_action,
                      double alpha);

// Fills `out` with the next joint action. Draw order is fixed: one coin
// (shared) or N coins (independent), then uniform actions in agent order
// for every exploring agent; greedy agents take the best response of their
// reward vector. delta = 0 consumes no randomness.
void select_joint_action(const ExplorationConfig& exploration, SplitMix64& rng,
                         const GameDims& dims,
                         const std::vector<std::vector<double>>& reward_vectors,
                         ActionProfile& out);

// One step of each dynamic, starting from the beliefs of step k: selects the
// joint action of step k+1 (greedy or exploring), folds it into the state
// with alpha_{k+1}, and returns it.
ActionProfile fp_step(BeliefState& state, const AnonymousPolymatrixGame& game,
                      const StepSizeSchedule& schedule,
                      const ExplorationConfig& exploration, SplitMix64& rng,
                      long k);
ActionProfile aggfp_step(BeliefState& state,
                         const std::vector<SuccinctReward>& succinct,
                         const StepSizeSchedule& schedule,
                         const ExplorationConfig& exploration, SplitMix64& rng,
                         long k);

// Runs `algorithm` (fp or aggfp) for `steps` steps from uniformly drawn
// initial actions. All randomness derives from `seed` through the documented
// streams, so a seed pins the trajectory bit-for-bit, and fp/aggfp runs with
// equal seeds consume exploration randomness identically.
TrajectoryRecord run_repeated_play(Algorithm algorithm,
                                   const AnonymousPolymatrixGame& game,
                                   long steps, std::uint64_t seed,
                                   const StepSizeSchedule& schedule,
                                   const ExplorationConfig& exploration,
                                   long snapshot_stride = 100);

}  // namespace aggplay

#endif  // AGGPLAY_DISCRETE_HPP_
