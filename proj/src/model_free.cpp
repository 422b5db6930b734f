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

#include "aggplay/model_free.hpp"

#include <cmath>

#include "aggplay/kernels.hpp"

namespace aggplay {

void PayoffPerturbation::validate() const {
  if (support.empty() || support.size() != probs.size())
    throw std::invalid_argument(
        "perturbation support and probabilities must match and be nonempty");
  for (double v : support)
    if (!std::isfinite(v))
      throw std::invalid_argument("perturbation support must be finite");
  validate_simplex(probs, 1e-9, "perturbation probabilities");
}

double PayoffPerturbation::mean() const {
  return kernels::dot(support.data(), probs.data(), support.size());
}

double PayoffPerturbation::max_abs() const {
  double m = 0.0;
  for (double v : support) m = std::max(m, std::fabs(v));
  return m;
}

double PayoffPerturbation::sample(SplitMix64& rng) const {
  return support[rng.discrete(probs)];
}

void RandomPayoffGame::validate() const {
  if (static_cast<int>(perturbations.size()) != base.dims().num_agents)
    throw std::invalid_argument("need one perturbation per agent");
  for (const auto& p : perturbations) p.validate();
}

double sample_reward(const RandomPayoffGame& game, const ActionProfile& profile,
                     int agent, SplitMix64& rng) {
  return game.base.reward(agent, profile) +
         game.perturbations[agent].sample(rng);
}

void TwoTimescaleSchedule::validate() const {
  if (!(beta_exponent > 0.5 && beta_exponent <= 1.0))
    throw std::invalid_argument("beta exponent must lie in (0.5, 1]");
  if (!(alpha_exponent > beta_exponent && alpha_exponent <= 1.0))
    throw std::invalid_argument(
        "alpha exponent must lie in (beta exponent, 1] so that alpha decays "
        "on the slower timescale");
}

double TwoTimescaleSchedule::alpha(long k) const {
  return std::pow(static_cast<double>(k + 1), -alpha_exponent);
}

double TwoTimescaleSchedule::beta(long visit_count) const {
  return std::pow(static_cast<double>(visit_count + 1), -beta_exponent);
}

void q_update(QTable& table, int action, int col, double reward,
              const TwoTimescaleSchedule& schedule) {
  if (action < 0 || action >= table.rows || col < 0 || col >= table.cols)
    throw std::invalid_argument("q_update: cell out of range");
  const std::size_t cell = table.cell(action, col);
  const std::int32_t count = ++table.visits[cell];
  table.values[cell] += schedule.beta(count) * (reward - table.values[cell]);
}

std::size_t opponent_profile_index(const ActionProfile& profile, int agent,
                                   int num_actions) {
  std::size_t idx = 0;
  for (std::size_t j = 0; j < profile.size(); ++j)
    if (static_cast<int>(j) != agent)
      idx = idx * num_actions + static_cast<std::size_t>(profile[j]);
  return idx;
}

namespace {

constexpr int kMaxProfileIndexedAgents = 6;

std::size_t opponent_profile_count(const GameDims& dims) {
  if (dims.num_agents > kMaxProfileIndexedAgents)
    throw std::length_error(
        "profile-indexed Q-table is exponential in the number of agents; "
        "more than 6 agents is refused");
  std::size_t count = 1;
  for (int j = 1; j < dims.num_agents; ++j)
    count *= static_cast<std::size_t>(dims.num_actions);
  return count;
}

}  // namespace

SuccinctReward expected_succinct(const RandomPayoffGame& game, int agent) {
  SuccinctReward table = expand_polymatrix(game.base, agent);
  const double shift = game.perturbations[agent].mean();
  for (double& v : table.table) v += shift;
  return table;
}

std::vector<double> expected_profile_table(const RandomPayoffGame& game,
                                           int agent) {
  const GameDims& dims = game.base.dims();
  const int n = dims.num_actions;
  const std::size_t cols = opponent_profile_count(dims);
  const double shift = game.perturbations[agent].mean();

  std::vector<double> table(static_cast<std::size_t>(n) * cols);
  std::vector<int> opp(dims.num_agents - 1, 0);
  for (std::size_t col = 0; col < cols; ++col) {
    for (int a = 0; a < n; ++a) {
      double v = shift;
      for (int b : opp) v += game.base.pairwise_entry(agent, a, b);
      table[static_cast<std::size_t>(a) * cols + col] = v;
    }
    int pos = static_cast<int>(opp.size()) - 1;
    while (pos >= 0 && ++opp[pos] == n) opp[pos--] = 0;
  }
  return table;
}

double q_error_aggregate(const std::vector<QTable>& tables,
                         const RandomPayoffGame& game) {
  double err = 0.0;
  for (int i = 0; i < game.base.dims().num_agents; ++i) {
    const SuccinctReward expected = expected_succinct(game, i);
    if (tables[i].values.size() != expected.table.size())
      throw std::invalid_argument("q_error_aggregate: table shape mismatch");
    err += kernels::l1_diff(tables[i].values.data(), expected.table.data(),
                            expected.table.size());
  }
  return err;
}

double q_error_profile(const std::vector<QTable>& tables,
                       const RandomPayoffGame& game) {
  double err = 0.0;
  for (int i = 0; i < game.base.dims().num_agents; ++i) {
    const std::vector<double> expected = expected_profile_table(game, i);
    if (tables[i].values.size() != expected.size())
      throw std::invalid_argument("q_error_profile: table shape mismatch");
    err += kernels::l1_diff(tables[i].values.data(), expected.data(),
                            expected.size());
  }
  return err;
}

double ne_distance(const std::vector<std::vector<double>>& empirical,
                   const MixedProfile& target) {
  if (empirical.size() != target.size())
    throw std::invalid_argument("ne_distance: agent count mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < empirical.size(); ++i) {
    if (empirical[i].size() != target[i].size())
      throw std::invalid_argument("ne_distance: action count mismatch");
    d += kernels::l1_diff(empirical[i].data(), target[i].data(),
                          target[i].size());
  }
  return d;
}

double ne_distance(std::span<const double> flat_empirical,
                   const MixedProfile& target) {
  std::size_t offset = 0;
  double d = 0.0;
  for (const auto& t : target) {
    if (offset + t.size() > flat_empirical.size())
      throw std::invalid_argument("ne_distance: row too short");
    d += kernels::l1_diff(flat_empirical.data() + offset, t.data(), t.size());
    offset += t.size();
  }
  if (offset != flat_empirical.size())
    throw std::invalid_argument("ne_distance: row length mismatch");
  return d;
}

namespace {

struct RunScaffold {
  GameDims dims;
  SplitMix64 init_rng;
  SplitMix64 explore_rng;
  SplitMix64 perturb_rng;
  ActionProfile current;
  TrajectoryRecord rec;

  RunScaffold(const RandomPayoffGame& game, Algorithm algorithm, long steps,
              std::uint64_t seed, const ModelFreeOptions& options)
      : dims(game.base.dims()),
        init_rng(derive_stream(seed, "init-actions")),
        explore_rng(derive_stream(seed, "explore")),
        perturb_rng(derive_stream(seed, "perturb")) {
    game.validate();
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    if (options.snapshot_stride < 1)
      throw std::invalid_argument("stride must be >= 1");
    current.resize(dims.num_agents);
    for (int i = 0; i < dims.num_agents; ++i)
      current[i] = init_rng.uniform_int(dims.num_actions);
    rec.algorithm = algorithm;
    rec.dims = dims;
    rec.seed = seed;
    rec.steps = steps;
    rec.actions.reserve(static_cast<std::size_t>(steps + 1) * dims.num_agents);
    rec.actions.insert(rec.actions.end(), current.begin(), current.end());
  }

  void record_step(const BeliefState& state, long step, long total_steps,
                   long stride, double q_err, bool has_q) {
    rec.actions.insert(rec.actions.end(), current.begin(), current.end());
    if (!is_snapshot_step(step, total_steps, stride)) return;
    rec.snapshot_steps.push_back(step);
    for (int i = 0; i < dims.num_agents; ++i) {
      auto e = state.empirical(i);
      rec.empirical_snapshots.insert(rec.empirical_snapshots.end(), e.begin(),
                                     e.end());
    }
    if (has_q) rec.q_error_series.push_back(q_err);
  }
};

std::vector<QTable> make_q_tables(int num_agents, int rows, int cols,
                                  const ModelFreeOptions& options) {
  if (options.initial_q != nullptr) {
    if (static_cast<int>(options.initial_q->size()) != num_agents)
      throw std::invalid_argument("initial Q: need one table per agent");
    for (const QTable& t : *options.initial_q)
      if (t.rows != rows || t.cols != cols)
        throw std::invalid_argument("initial Q: table shape mismatch");
    return *options.initial_q;
  }
  return std::vector<QTable>(num_agents, QTable(rows, cols));
}

}  // namespace

ModelFreeResult run_two_timescale_aggfp(const RandomPayoffGame& game,
                                        long steps, std::uint64_t seed,
                                        const TwoTimescaleSchedule& schedule,
                                        double delta,
                                        const ModelFreeOptions& options) {
  schedule.validate();
  const ExplorationConfig exploration{delta, true};
  exploration.validate();

  RunScaffold run(game, Algorithm::two_timescale_aggfp, steps, seed, options);
  const GameDims& dims = run.dims;
  const int n = dims.num_actions;
  const int space = dims.aggregate_space_size();

  std::vector<QTable> q = make_q_tables(dims.num_agents, n, space, options);
  std::vector<SuccinctReward> expected;
  expected.reserve(dims.num_agents);
  for (int i = 0; i < dims.num_agents; ++i)
    expected.push_back(expected_succinct(game, i));

  BeliefState state(dims, run.current);

  auto learn = [&](const ActionProfile& profile) {
    std::vector<int> counts(n, 0);
    for (int a : profile) ++counts[a];
    for (int i = 0; i < dims.num_agents; ++i) {
      const double reward = sample_reward(game, profile, i, run.perturb_rng);
      --counts[profile[i]];
      const int col = rank_count(counts);
      ++counts[profile[i]];
      if (options.freeze_q) {
        ++q[i].visits[q[i].cell(profile[i], col)];
      } else {
        q_update(q[i], profile[i], col, reward, schedule);
      }
    }
  };
  auto total_q_error = [&] {
    double err = 0.0;
    for (int i = 0; i < dims.num_agents; ++i)
      err += kernels::l1_diff(q[i].values.data(), expected[i].table.data(),
                              expected[i].table.size());
    return err;
  };

  learn(run.current);

  std::vector<std::vector<double>> scores(dims.num_agents,
                                          std::vector<double>(n));
  for (long k = 1; k <= steps; ++k) {
    for (int i = 0; i < dims.num_agents; ++i)
      kernels::matvec(q[i].values.data(), n, space,
                      state.aggregate_belief(i).data(), scores[i].data());
    select_joint_action(exploration, run.explore_rng, dims, scores,
                        run.current);
    learn(run.current);
    state.observe(run.current, schedule.alpha(k));
    run.record_step(state, k, steps, options.snapshot_stride,
                    is_snapshot_step(k, steps, options.snapshot_stride)
                        ? total_q_error()
                        : 0.0,
                    true);
  }

  run.rec.final_empirical = state.empirical_all();
  return {std::move(run.rec), std::move(q)};
}

ModelFreeResult run_two_timescale_fp(const RandomPayoffGame& game, long steps,
                                     std::uint64_t seed,
                                     const TwoTimescaleSchedule& schedule,
                                     double delta,
                                     const ModelFreeOptions& options) {
  schedule.validate();
  const ExplorationConfig exploration{delta, true};
  exploration.validate();

  RunScaffold run(game, Algorithm::two_timescale_fp, steps, seed, options);
  const GameDims& dims = run.dims;
  const int n = dims.num_actions;
  const std::size_t cols = opponent_profile_count(dims);

  std::vector<QTable> q =
      make_q_tables(dims.num_agents, n, static_cast<int>(cols), options);
  std::vector<std::vector<double>> expected;
  expected.reserve(dims.num_agents);
  for (int i = 0; i < dims.num_agents; ++i)
    expected.push_back(expected_profile_table(game, i));

  BeliefState state(dims, run.current);

  auto learn = [&](const ActionProfile& profile) {
    for (int i = 0; i < dims.num_agents; ++i) {
      const double reward = sample_reward(game, profile, i, run.perturb_rng);
      const int col =
          static_cast<int>(opponent_profile_index(profile, i, n));
      if (options.freeze_q) {
        ++q[i].visits[q[i].cell(profile[i], col)];
      } else {
        q_update(q[i], profile[i], col, reward, schedule);
      }
    }
  };
  auto total_q_error = [&] {
    double err = 0.0;
    for (int i = 0; i < dims.num_agents; ++i)
      err += kernels::l1_diff(q[i].values.data(), expected[i].data(),
                              expected[i].size());
    return err;
  };

  learn(run.current);

  // weights[col] = product of opponent beliefs along the profile encoded by
  // col; built by one outer product per opponent in ascending order.
  std::vector<double> weights, next_weights;
  std::vector<std::vector<double>> scores(dims.num_agents,
                                          std::vector<double>(n));
  for (long k = 1; k <= steps; ++k) {
    for (int i = 0; i < dims.num_agents; ++i) {
      weights.assign(1, 1.0);
      for (int j = 0; j < dims.num_agents; ++j) {
        if (j == i) continue;
        const auto pi = state.action_belief(j);
        next_weights.resize(weights.size() * n);
        for (std::size_t w = 0; w < weights.size(); ++w)
          for (int b = 0; b < n; ++b)
            next_weights[w * n + b] = weights[w] * pi[b];
        weights.swap(next_weights);
      }
      kernels::matvec(q[i].values.data(), n, cols, weights.data(),
                      scores[i].data());
    }
    select_joint_action(exploration, run.explore_rng, dims, scores,
                        run.current);
    learn(run.current);
    state.observe(run.current, schedule.alpha(k));
    run.record_step(state, k, steps, options.snapshot_stride,
                    is_snapshot_step(k, steps, options.snapshot_stride)
                        ? total_q_error()
                        : 0.0,
                    true);
  }

  run.rec.final_empirical = state.empirical_all();
  return {std::move(run.rec), std::move(q)};
}

ModelFreeResult run_individual_q(const RandomPayoffGame& game, long steps,
                                 std::uint64_t seed,
                                 const TwoTimescaleSchedule& schedule,
                                 double temperature,
                                 const ModelFreeOptions& options) {
  schedule.validate();
  if (!(temperature > 0.0))
    throw std::invalid_argument("temperature must be positive");

  RunScaffold run(game, Algorithm::individual_q, steps, seed, options);
  const GameDims& dims = run.dims;
  const int n = dims.num_actions;

  SplitMix64 play_rng = derive_stream(seed, "indq-play");
  std::vector<QTable> q = make_q_tables(dims.num_agents, n, 1, options);
  BeliefState state(dims, run.current);

  auto learn = [&](const ActionProfile& profile) {
    for (int i = 0; i < dims.num_agents; ++i) {
      const double reward = sample_reward(game, profile, i, run.perturb_rng);
      if (options.freeze_q) {
        ++q[i].visits[q[i].cell(profile[i], 0)];
      } else {
        q_update(q[i], profile[i], 0, reward, schedule);
      }
    }
  };

  learn(run.current);

  std::vector<double> policy(n);
  for (long k = 1; k <= steps; ++k) {
    for (int i = 0; i < dims.num_agents; ++i) {
      // Boltzmann play over own Q-values
      double best = q[i].values[0];
      for (int a = 1; a < n; ++a) best = std::max(best, q[i].values[a]);
      double norm = 0.0;
      for (int a = 0; a < n; ++a) {
        policy[a] = std::exp((q[i].values[a] - best) / temperature);
        norm += policy[a];
      }
      for (int a = 0; a < n; ++a) policy[a] /= norm;
      run.current[i] = play_rng.discrete(policy);
    }
    learn(run.current);
    state.observe(run.current, schedule.alpha(k));
    run.record_step(state, k, steps, options.snapshot_stride, 0.0, false);
  }

  run.rec.final_empirical = state.empirical_all();
  return {std::move(run.rec), std::move(q)};
}

}  // namespace aggplay
