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

#include "aggplay/continuous.hpp"

#include <cmath>
#include <sstream>

#include "aggplay/kernels.hpp"

namespace aggplay {

namespace {

void check_step_args(double step, double horizon, double delta) {
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  if (!(horizon >= step))
    throw std::invalid_argument("horizon must be at least one step");
  if (!(delta >= 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must lie in [0, 1)");
}

long step_count(double step, double horizon) {
  long n = std::lround(horizon / step);
  return n < 1 ? 1 : n;
}

std::vector<double> vertex_mix_field(std::span<const double> v, int vertex,
                                     double delta) {
  const double uniform = delta / static_cast<double>(v.size());
  std::vector<double> d(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) d[i] = uniform - v[i];
  d[vertex] += 1.0 - delta;
  return d;
}

// In-place Euler step toward (1-delta) * e_vertex + (delta/dim) * ones.
void relax_step(std::span<double> v, int vertex, double delta, double h) {
  kernels::decay_shift(v.data(), v.size(), 1.0 - h,
                       h * delta / static_cast<double>(v.size()));
  v[vertex] += h * (1.0 - delta);
}

ActionProfile greedy_profile_from_aggregate(
    const ContinuousState& state, const std::vector<SuccinctReward>& succinct) {
  ActionProfile greedy(state.dims.num_agents);
  for (int j = 0; j < state.dims.num_agents; ++j)
    greedy[j] = best_response(
        expected_reward_aggregate(succinct[j], state.aggregate[j]));
  return greedy;
}

}  // namespace

std::vector<std::vector<double>> br_field(const ContinuousState& state,
                                          const AnonymousPolymatrixGame& game,
                                          double delta) {
  std::vector<std::vector<double>> deriv(state.dims.num_agents);
  for (int i = 0; i < state.dims.num_agents; ++i) {
    const int b = best_response(expected_reward_individual(game, i, state.strategy));
    deriv[i] = vertex_mix_field(state.strategy[i], b, delta);
  }
  return deriv;
}

std::vector<std::vector<double>> br_field(
    const ContinuousState& state, const std::vector<SuccinctReward>& succinct,
    double delta) {
  std::vector<std::vector<double>> deriv(state.dims.num_agents);
  for (int i = 0; i < state.dims.num_agents; ++i) {
    const std::vector<double> mu =
        aggregate_distribution(state.strategy, i, state.dims);
    const int b = best_response(expected_reward_aggregate(succinct[i], mu));
    deriv[i] = vertex_mix_field(state.strategy[i], b, delta);
  }
  return deriv;
}

AggBrDerivative aggbr_field(const ContinuousState& state,
                            const std::vector<SuccinctReward>& succinct,
                            const GameDims& dims, double delta) {
  const ActionProfile greedy = greedy_profile_from_aggregate(state, succinct);
  AggBrDerivative deriv;
  deriv.aggregate.resize(dims.num_agents);
  deriv.empirical.resize(dims.num_agents);
  for (int i = 0; i < dims.num_agents; ++i) {
    const int rank = sigma(greedy, i, dims).rank;
    deriv.aggregate[i] = vertex_mix_field(state.aggregate[i], rank, delta);
    deriv.empirical[i] = vertex_mix_field(state.empirical[i], greedy[i], delta);
  }
  return deriv;
}

ContinuousState consistent_init(const MixedProfile& strategy0,
                                const GameDims& dims) {
  dims.validate();
  if (static_cast<int>(strategy0.size()) != dims.num_agents)
    throw std::invalid_argument("need one strategy per agent");
  for (const auto& pi : strategy0) {
    if (static_cast<int>(pi.size()) != dims.num_actions)
      throw std::invalid_argument("strategy vector has wrong length");
    validate_simplex(pi, 1e-9, "initial strategy");
  }
  ContinuousState state;
  state.dims = dims;
  state.strategy = strategy0;
  state.empirical = strategy0;
  state.aggregate.resize(dims.num_agents);
  for (int i = 0; i < dims.num_agents; ++i)
    state.aggregate[i] = aggregate_distribution(strategy0, i, dims);
  return state;
}

FlatTrajectory euler_integrate(
    const std::function<void(const std::vector<double>&, std::vector<double>&)>&
        field,
    std::vector<double> state0, double step, double horizon,
    long sample_stride) {
  if (sample_stride < 1) throw std::invalid_argument("stride must be >= 1");
  check_step_args(step, horizon, 0.0);
  const long steps = step_count(step, horizon);

  FlatTrajectory out;
  out.times.push_back(0.0);
  out.states.push_back(state0);

  std::vector<double> deriv(state0.size());
  for (long k = 0; k < steps; ++k) {
    field(state0, deriv);
    for (double d : deriv)
      if (!std::isfinite(d)) {
        std::ostringstream os;
        os << "non-finite derivative at t=" << k * step;
        throw std::runtime_error(os.str());
      }
    kernels::axpy(state0.data(), deriv.data(), state0.size(), step);
    if ((k + 1) % sample_stride == 0 || k + 1 == steps) {
      out.times.push_back((k + 1) * step);
      out.states.push_back(state0);
    }
  }
  return out;
}

namespace {

// Shared lockstep comparison: the BR side supplies per-agent reward vectors
// through `individual_rewards`, the agg-BR side evaluates its succinct
// tables on its own aggregate beliefs. Both make their own greedy choices.
template <typename IndividualRewards>
PathDeviation run_coupled(const std::vector<SuccinctReward>& succinct,
                          const GameDims& dims, const MixedProfile& strategy0,
                          double delta, double step, double horizon,
                          IndividualRewards individual_rewards) {
  check_step_args(step, horizon, delta);
  ContinuousState br_state = consistent_init(strategy0, dims);
  ContinuousState agg_state = br_state;
  const long steps = step_count(step, horizon);

  PathDeviation dev;
  auto measure = [&] {
    for (int i = 0; i < dims.num_agents; ++i) {
      const std::vector<double> r_ind = individual_rewards(br_state, i);
      const std::vector<double> r_agg =
          expected_reward_aggregate(succinct[i], agg_state.aggregate[i]);
      for (int a = 0; a < dims.num_actions; ++a)
        dev.reward_gap =
            std::max(dev.reward_gap, std::fabs(r_ind[a] - r_agg[a]));
      for (int a = 0; a < dims.num_actions; ++a)
        dev.strategy_gap = std::max(
            dev.strategy_gap,
            std::fabs(br_state.strategy[i][a] - agg_state.empirical[i][a]));
    }
  };

  for (long k = 0; k < steps; ++k) {
    measure();
    // greedy selections, each side from its own reward route
    ActionProfile br_greedy(dims.num_agents);
    for (int i = 0; i < dims.num_agents; ++i)
      br_greedy[i] = best_response(individual_rewards(br_state, i));
    const ActionProfile agg_greedy =
        greedy_profile_from_aggregate(agg_state, succinct);

    for (int i = 0; i < dims.num_agents; ++i) {
      relax_step(br_state.strategy[i], br_greedy[i], delta, step);
      relax_step(agg_state.aggregate[i], sigma(agg_greedy, i, dims).rank, delta,
                 step);
      relax_step(agg_state.empirical[i], agg_greedy[i], delta, step);
    }
    br_state.time = agg_state.time = (k + 1) * step;
  }
  measure();
  return dev;
}

}  // namespace

PathDeviation compare_coupled_flows(const AnonymousPolymatrixGame& game,
                           const MixedProfile& strategy0, double delta,
                           double step, double horizon) {
  const GameDims& dims = game.dims();
  std::vector<SuccinctReward> succinct;
  succinct.reserve(dims.num_agents);
  for (int i = 0; i < dims.num_agents; ++i)
    succinct.push_back(expand_polymatrix(game, i));
  return run_coupled(succinct, dims, strategy0, delta, step, horizon,
                     [&](const ContinuousState& s, int i) {
                       return expected_reward_individual(game, i, s.strategy);
                     });
}

PathDeviation compare_coupled_flows(const std::vector<SuccinctReward>& succinct,
                           const GameDims& dims, const MixedProfile& strategy0,
                           double delta, double step, double horizon) {
  if (static_cast<int>(succinct.size()) != dims.num_agents)
    throw std::invalid_argument("need one succinct table per agent");
  return run_coupled(succinct, dims, strategy0, delta, step, horizon,
                     [&](const ContinuousState& s, int i) {
                       return expected_reward_aggregate(
                           succinct[i],
                           aggregate_distribution(s.strategy, i, dims));
                     });
}

std::vector<double> best_response_advantage_series(
    const AnonymousPolymatrixGame& game, const MixedProfile& strategy0,
    double delta, double step, double horizon, long sample_stride) {
  check_step_args(step, horizon, delta);
  if (sample_stride < 1) throw std::invalid_argument("stride must be >= 1");
  const GameDims& dims = game.dims();
  ContinuousState state = consistent_init(strategy0, dims);
  const long steps = step_count(step, horizon);

  auto advantage = [&] {
    double v = 0.0;
    for (int i = 0; i < dims.num_agents; ++i) {
      const std::vector<double> r =
          expected_reward_individual(game, i, state.strategy);
      v += r[best_response(r)];
    }
    return v;
  };

  std::vector<double> series;
  series.push_back(advantage());
  for (long k = 0; k < steps; ++k) {
    for (int i = 0; i < dims.num_agents; ++i) {
      const int b =
          best_response(expected_reward_individual(game, i, state.strategy));
      relax_step(state.strategy[i], b, delta, step);
    }
    state.time = (k + 1) * step;
    if ((k + 1) % sample_stride == 0 || k + 1 == steps)
      series.push_back(advantage());
  }
  return series;
}

}  // namespace aggplay
