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

#include "aggplay/discrete.hpp"

#include <cmath>

#include "aggplay/kernels.hpp"

namespace aggplay {

void StepSizeSchedule::validate() const {
  if (!(exponent > 0.5 && exponent <= 1.0))
    throw std::invalid_argument("step-size exponent must lie in (0.5, 1]");
}

double StepSizeSchedule::alpha(long k) const {
  return std::pow(static_cast<double>(k + 1), -exponent);
}

void ExplorationConfig::validate() const {
  if (!(delta >= 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must lie in [0, 1)");
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1]");
}

void simplex_shift(std::span<double> v, std::size_t index, double alpha) {
  check_alpha(alpha);
  if (index >= v.size())
    throw std::invalid_argument("observed index out of range");
  kernels::decay_bump(v.data(), v.size(), 1.0 - alpha, index, alpha);
}

}  // namespace

void fp_belief_update(std::span<double> belief, int observed_action,
                      double alpha) {
  simplex_shift(belief, static_cast<std::size_t>(observed_action), alpha);
}

void aggfp_belief_update(std::span<double> aggregate_belief, int observed_rank,
                         double alpha) {
  simplex_shift(aggregate_belief, static_cast<std::size_t>(observed_rank),
                alpha);
}

void empirical_update(std::span<double> empirical, int own_action,
                      double alpha) {
  simplex_shift(empirical, static_cast<std::size_t>(own_action), alpha);
}

BeliefState::BeliefState(const GameDims& dims,
                         const ActionProfile& initial_actions)
    : dims_(dims) {
  dims_.validate();
  const int n = dims_.num_actions;
  const int space = dims_.aggregate_space_size();

  action_beliefs_.assign(dims_.num_agents, std::vector<double>(n, 0.0));
  aggregate_beliefs_.assign(dims_.num_agents, std::vector<double>(space, 0.0));
  empirical_.assign(dims_.num_agents, std::vector<double>(n, 0.0));

  for (int i = 0; i < dims_.num_agents; ++i) {
    action_beliefs_[i][initial_actions[i]] = 1.0;
    empirical_[i][initial_actions[i]] = 1.0;
    aggregate_beliefs_[i][sigma(initial_actions, i, dims_).rank] = 1.0;
  }
}

std::span<const double> BeliefState::action_belief(int agent) const {
  return action_beliefs_[agent];
}
std::span<const double> BeliefState::aggregate_belief(int agent) const {
  return aggregate_beliefs_[agent];
}
std::span<const double> BeliefState::empirical(int agent) const {
  return empirical_[agent];
}

void BeliefState::observe(const ActionProfile& profile, double alpha) {
  check_alpha(alpha);
  const int n = dims_.num_actions;

  // total counts once, then drop the own action to get each x^{-i}
  std::vector<int> counts(n, 0);
  for (int a : profile) ++counts[a];

  for (int j = 0; j < dims_.num_agents; ++j)
    fp_belief_update(action_beliefs_[j], profile[j], alpha);

  for (int i = 0; i < dims_.num_agents; ++i) {
    --counts[profile[i]];
    aggfp_belief_update(aggregate_beliefs_[i], rank_count(counts), alpha);
    ++counts[profile[i]];
    empirical_update(empirical_[i], profile[i], alpha);
  }
}

void select_joint_action(const ExplorationConfig& exploration, SplitMix64& rng,
                         const GameDims& dims,
                         const std::vector<std::vector<double>>& reward_vectors,
                         ActionProfile& out) {
  const int num_agents = dims.num_agents;
  const int num_actions = dims.num_actions;
  if (exploration.delta > 0.0 && exploration.shared_coin) {
    if (rng.u01() < exploration.delta) {
      for (int i = 0; i < num_agents; ++i) out[i] = rng.uniform_int(num_actions);
      return;
    }
    for (int i = 0; i < num_agents; ++i)
      out[i] = best_response(reward_vectors[i]);
    return;
  }
  if (exploration.delta > 0.0) {
    std::vector<char> explores(num_agents);
    for (int i = 0; i < num_agents; ++i)
      explores[i] = rng.u01() < exploration.delta;
    for (int i = 0; i < num_agents; ++i)
      out[i] = explores[i] ? rng.uniform_int(num_actions)
                           : best_response(reward_vectors[i]);
    return;
  }
  for (int i = 0; i < num_agents; ++i) out[i] = best_response(reward_vectors[i]);
}

ActionProfile fp_step(BeliefState& state, const AnonymousPolymatrixGame& game,
                      const StepSizeSchedule& schedule,
                      const ExplorationConfig& exploration, SplitMix64& rng,
                      long k) {
  schedule.validate();
  exploration.validate();
  const GameDims& dims = state.dims();

  std::vector<std::vector<double>> rewards(dims.num_agents);
  for (int i = 0; i < dims.num_agents; ++i)
    rewards[i] = expected_reward_individual(game, i, state.action_beliefs());

  ActionProfile next(dims.num_agents);
  select_joint_action(exploration, rng, dims, rewards, next);
  state.observe(next, schedule.alpha(k + 1));
  return next;
}

ActionProfile aggfp_step(BeliefState& state,
                         const std::vector<SuccinctReward>& succinct,
                         const StepSizeSchedule& schedule,
                         const ExplorationConfig& exploration, SplitMix64& rng,
                         long k) {
  schedule.validate();
  exploration.validate();
  const GameDims& dims = state.dims();
  if (static_cast<int>(succinct.size()) != dims.num_agents)
    throw std::invalid_argument("need one succinct table per agent");

  std::vector<std::vector<double>> rewards(dims.num_agents);
  for (int i = 0; i < dims.num_agents; ++i)
    rewards[i] =
        expected_reward_aggregate(succinct[i], state.aggregate_belief(i));

  ActionProfile next(dims.num_agents);
  select_joint_action(exploration, rng, dims, rewards, next);
  state.observe(next, schedule.alpha(k + 1));
  return next;
}

TrajectoryRecord run_repeated_play(Algorithm algorithm,
                                   const AnonymousPolymatrixGame& game,
                                   long steps, std::uint64_t seed,
                                   const StepSizeSchedule& schedule,
                                   const ExplorationConfig& exploration,
                                   long snapshot_stride) {
  if (algorithm != Algorithm::classical_fp &&
      algorithm != Algorithm::aggregate_fp)
    throw std::invalid_argument("run_repeated_play handles fp and aggfp only");
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (snapshot_stride < 1) throw std::invalid_argument("stride must be >= 1");
  schedule.validate();
  exploration.validate();

  const GameDims& dims = game.dims();
  const int num_agents = dims.num_agents;
  const int n = dims.num_actions;

  SplitMix64 init_rng = derive_stream(seed, "init-actions");
  SplitMix64 explore_rng = derive_stream(seed, "explore");

  ActionProfile current(num_agents);
  for (int i = 0; i < num_agents; ++i) current[i] = init_rng.uniform_int(n);

  BeliefState state(dims, current);

  std::vector<SuccinctReward> succinct;
  if (algorithm == Algorithm::aggregate_fp) {
    succinct.reserve(num_agents);
    for (int i = 0; i < num_agents; ++i)
      succinct.push_back(expand_polymatrix(game, i));
  }

  TrajectoryRecord rec;
  rec.algorithm = algorithm;
  rec.dims = dims;
  rec.seed = seed;
  rec.steps = steps;
  rec.actions.reserve(static_cast<std::size_t>(steps + 1) * num_agents);
  rec.actions.insert(rec.actions.end(), current.begin(), current.end());

  for (long k = 0; k < steps; ++k) {
    current =
        algorithm == Algorithm::classical_fp
            ? fp_step(state, game, schedule, exploration, explore_rng, k)
            : aggfp_step(state, succinct, schedule, exploration, explore_rng, k);
    rec.actions.insert(rec.actions.end(), current.begin(), current.end());

    const long step = k + 1;
    if (is_snapshot_step(step, steps, snapshot_stride)) {
      rec.snapshot_steps.push_back(step);
      for (int i = 0; i < num_agents; ++i) {
        auto e = state.empirical(i);
        rec.empirical_snapshots.insert(rec.empirical_snapshots.end(), e.begin(),
                                       e.end());
      }
    }
  }

  rec.final_empirical = state.empirical_all();
  return rec;
}

}  // namespace aggplay
