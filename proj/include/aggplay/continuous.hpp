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

#ifndef AGGPLAY_CONTINUOUS_HPP_
#define AGGPLAY_CONTINUOUS_HPP_

#include <functional>
#include <vector>

#include "aggplay/game.hpp"

// Continuous-time best-response dynamics and their aggregate counterpart,
// integrated with forward Euler. The fields are piecewise constant between
// argmax switches, so a higher-order integrator buys nothing; with step
// h <= 1 each Euler update is a convex combination and the simplices are
// forward-invariant exactly.
namespace aggplay {

// State of both dynamics at time t. The BR dynamics evolve `strategy`
// (pi^i); the agg-BR dynamics evolve `aggregate` (mu^i, over count ranks)
// and `empirical` (gamma^i).
struct ContinuousState {
  GameDims dims;
  double time = 0.0;
  MixedProfile strategy;                        // N x n
  std::vector<std::vector<double>> aggregate;   // N x |X|
  std::vector<std::vector<double>> empirical;   // N x n
};

// delta-greedy BR field: for each agent, the target mixes the best-response
// vertex with the uniform distribution, and the field relaxes the strategy
// toward it. Entries of each derivative vector sum to zero.
std::vector<std::vector<double>> br_field(const ContinuousState& state,
                                          const AnonymousPolymatrixGame& game,
                                          double delta);
// BR field for a game given only through succinct tables: each agent's
// expected reward is evaluated through the exact count distribution of the
// current opponent strategies.
std::vector<std::vector<double>> br_field(
    const ContinuousState& state, const std::vector<SuccinctReward>& succinct,
    double delta);

// agg-BR field: every agent's greedy action comes from its aggregate belief;
// mu relaxes toward the count vector of the others' greedy actions (mixed
// with uniform over the count space), gamma toward the own greedy action
// (mixed with uniform over actions).
struct AggBrDerivative {
  std::vector<std::vector<double>> aggregate;  // N x |X|
  std::vector<std::vector<double>> empirical;  // N x n
};
AggBrDerivative aggbr_field(const ContinuousState& state,
                            const std::vector<SuccinctReward>& succinct,
                            const GameDims& dims, double delta);

// Initial state matched across the two dynamics: empirical = strategy, and
// each agent's aggregate belief is the exact count distribution induced by
// the opponents' initial strategies.
ContinuousState consistent_init(const MixedProfile& strategy0,
                                const GameDims& dims);

// Forward Euler for a generic flat system. The field writes d/dt into its
// second argument; non-finite derivatives raise a numerical error carrying
// the time stamp. Samples (including the initial state) are recorded every
// `sample_stride` steps and at the horizon.
struct FlatTrajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
};
FlatTrajectory euler_integrate(
    const std::function<void(const std::vector<double>&, std::vector<double>&)>&
        field,
    std::vector<double> state0, double step, double horizon,
    long sample_stride = 100);

// Integrates the BR and agg-BR flows side by side from a consistent
// initialization with the shared tie-break and reports the largest
// deviations seen: max over time, agents and actions of |individual minus
// aggregate expected reward|, and max over time and agents of the sup-norm
// gap between the BR strategy and the agg-BR empirical vector. For
// anonymous polymatrix games both stay at rounding level; for general
// succinct tables they may grow.
struct PathDeviation {
  double reward_gap = 0.0;
  double strategy_gap = 0.0;
};
PathDeviation compare_coupled_flows(const AnonymousPolymatrixGame& game,
                           const MixedProfile& strategy0, double delta,
                           double step, double horizon);
// Same comparison for a game given only through succinct tables (the BR side
// then re-derives the count distribution from its strategies at every step).
// For non-polymatrix tables the gap generally grows; the return value is the
// diagnostic, not an assertion.
PathDeviation compare_coupled_flows(const std::vector<SuccinctReward>& succinct,
                           const GameDims& dims, const MixedProfile& strategy0,
                           double delta, double step, double horizon);

// Sum over agents of the best-response advantage max_a R^i(a, pi^{-i}); for
// zero-sum polymatrix games this vanishes exactly at Nash equilibria, and
// sampling it along a BR trajectory gives an empirical descent diagnostic.
// Reported only; nothing here asserts monotonicity.
std::vector<double> best_response_advantage_series(
    const AnonymousPolymatrixGame& game, const MixedProfile& strategy0,
    double delta, double step, double horizon, long sample_stride = 100);

}  // namespace aggplay

#endif  // AGGPLAY_CONTINUOUS_HPP_
