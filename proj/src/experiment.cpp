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

#include "aggplay/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace aggplay {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw usage_error(key + ": not an integer: " + value);
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw usage_error(key + ": not a number: " + value);
  }
}

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

void ExperimentConfig::set_key(const std::string& key,
                               const std::string& value) {
  if (key == "game") {
    game = value;
  } else if (key == "num_agents") {
    num_agents = static_cast<int>(parse_long(key, value));
  } else if (key == "num_actions") {
    num_actions = static_cast<int>(parse_long(key, value));
  } else if (key == "pairwise" || key == "perturb_support" ||
             key == "perturb_probs") {
    std::vector<double> vals;
    for (const std::string& tok : split_ws(value))
      vals.push_back(parse_double(key, tok));
    if (key == "pairwise") pairwise = std::move(vals);
    else if (key == "perturb_support") perturb_support = std::move(vals);
    else perturb_probs = std::move(vals);
  } else if (key == "algorithms") {
    algorithms = split_ws(value);
  } else if (key == "steps") {
    steps = parse_long(key, value);
  } else if (key == "seeds") {
    seeds.clear();
    for (const std::string& tok : split_ws(value))
      seeds.push_back(static_cast<std::uint64_t>(parse_long(key, tok)));
  } else if (key == "delta") {
    delta = parse_double(key, value);
  } else if (key == "alpha_exponent") {
    alpha_exponent = parse_double(key, value);
  } else if (key == "beta_exponent") {
    beta_exponent = parse_double(key, value);
  } else if (key == "out_dir") {
    out_dir = value;
  } else if (key == "snapshot_stride") {
    snapshot_stride = parse_long(key, value);
  } else if (key == "output") {
    // manifest metadata; ignored so a manifest re-feeds as a config
  } else {
    throw usage_error("unknown config key: " + key);
  }
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot read config file: " + path);
  ExperimentConfig config;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw usage_error("config line without '=': " + t);
    config.set_key(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return config;
}

void ExperimentConfig::validate() const {
  if (game != "rps4" && game != "inline")
    throw usage_error("game: must be \"rps4\" or \"inline\"");
  if (steps < 1) throw usage_error("steps: must be >= 1");
  if (snapshot_stride < 1) throw usage_error("snapshot_stride: must be >= 1");
  if (!(delta >= 0.0 && delta < 1.0))
    throw usage_error("delta: must lie in [0, 1)");
  if (seeds.empty()) throw usage_error("seeds: must be nonempty");
  if (algorithms.empty()) throw usage_error("algorithms: must be nonempty");

  bool any_two_timescale = false;
  for (const std::string& name : algorithms) {
    Algorithm algo;
    try {
      algo = algorithm_from_name(name);
    } catch (const std::invalid_argument&) {
      throw usage_error("algorithms: unknown algorithm name: " + name);
    }
    if (algo == Algorithm::two_timescale_fp ||
        algo == Algorithm::two_timescale_aggfp ||
        algo == Algorithm::individual_q)
      any_two_timescale = true;
    if (algo == Algorithm::individual_q && !(delta > 0.0))
      throw usage_error(
          "delta: must be positive when running indq (it is the Boltzmann "
          "temperature)");
  }
  try {
    if (any_two_timescale)
      TwoTimescaleSchedule{alpha_exponent, beta_exponent}.validate();
    else
      StepSizeSchedule{alpha_exponent}.validate();
  } catch (const std::invalid_argument& e) {
    throw usage_error(std::string("alpha_exponent/beta_exponent: ") + e.what());
  }

  if (game == "inline") {
    if (num_agents < 2) throw usage_error("num_agents: must be >= 2");
    if (num_actions < 1) throw usage_error("num_actions: must be >= 1");
    if (pairwise.size() !=
        static_cast<std::size_t>(num_actions) * num_actions)
      throw usage_error("pairwise: must have num_actions^2 entries");
    if (perturb_support.size() != perturb_probs.size())
      throw usage_error(
          "perturb_support/perturb_probs: must have matching lengths");
  }
}

std::string ExperimentConfig::echo() const {
  std::ostringstream os;
  os << "game = " << game << "\n";
  if (game == "inline") {
    os << "num_agents = " << num_agents << "\n";
    os << "num_actions = " << num_actions << "\n";
    os << "pairwise =";
    for (double v : pairwise) os << ' ' << format_double(v);
    os << "\n";
    if (!perturb_support.empty()) {
      os << "perturb_support =";
      for (double v : perturb_support) os << ' ' << format_double(v);
      os << "\nperturb_probs =";
      for (double v : perturb_probs) os << ' ' << format_double(v);
      os << "\n";
    }
  }
  os << "algorithms =";
  for (const std::string& a : algorithms) os << ' ' << a;
  os << "\n";
  os << "steps = " << steps << "\n";
  os << "seeds =";
  for (std::uint64_t s : seeds) os << ' ' << s;
  os << "\n";
  os << "delta = " << format_double(delta) << "\n";
  os << "alpha_exponent = " << format_double(alpha_exponent) << "\n";
  os << "beta_exponent = " << format_double(beta_exponent) << "\n";
  os << "out_dir = " << out_dir << "\n";
  os << "snapshot_stride = " << snapshot_stride << "\n";
  return os.str();
}

RandomPayoffGame build_rps4() {
  const GameDims dims{4, 3};
  const std::vector<double> matrix = {0, -1, 1, 1, 0, -1, -1, 1, 0};
  PayoffPerturbation noise;
  noise.support = {-4, -2, 0, 2, 4};
  noise.probs = {0.1, 0.2, 0.4, 0.2, 0.1};
  RandomPayoffGame game{
      AnonymousPolymatrixGame::with_shared_matrix(dims, matrix),
      std::vector<PayoffPerturbation>(dims.num_agents, noise)};
  game.validate();
  return game;
}

RandomPayoffGame ExperimentConfig::build_game() const {
  if (game == "rps4") return build_rps4();
  const GameDims dims{num_agents, num_actions};
  std::vector<PayoffPerturbation> noise(
      dims.num_agents, perturb_support.empty()
                           ? PayoffPerturbation::none()
                           : PayoffPerturbation{perturb_support, perturb_probs});
  RandomPayoffGame g{AnonymousPolymatrixGame::with_shared_matrix(dims, pairwise),
                     std::move(noise)};
  g.validate();
  return g;
}

MixedProfile ExperimentConfig::ne_target() const {
  if (!has_ne_target())
    throw std::logic_error("no equilibrium target for this game");
  const RandomPayoffGame g = build_rps4();
  const int n = g.base.dims().num_actions;
  return MixedProfile(g.base.dims().num_agents,
                      std::vector<double>(n, 1.0 / n));
}

void emit_csv(const std::vector<long>& xs, const std::vector<double>& ys,
              const std::string& path) {
  if (xs.empty()) throw std::invalid_argument("emit_csv: empty series");
  if (xs.size() != ys.size())
    throw std::invalid_argument("emit_csv: x/y length mismatch");
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) throw std::runtime_error("cannot write file: " + path);
  char buf[64];
  bool ok = std::fputs("x,y\n", f) >= 0;
  for (std::size_t i = 0; ok && i < xs.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%ld,%.12g\n", xs[i], ys[i]);
    ok = std::fputs(buf, f) >= 0;
  }
  ok = (std::fclose(f) == 0) && ok;
  if (!ok) throw std::runtime_error("write failed: " + path);
}

namespace {

TrajectoryRecord run_one(const ExperimentConfig& config,
                         const RandomPayoffGame& game, Algorithm algo,
                         std::uint64_t seed) {
  const TwoTimescaleSchedule two{config.alpha_exponent, config.beta_exponent};
  const ModelFreeOptions options{config.snapshot_stride, nullptr, false};
  switch (algo) {
    case Algorithm::classical_fp:
    case Algorithm::aggregate_fp:
      return run_repeated_play(algo, game.base, config.steps, seed,
                               StepSizeSchedule{config.alpha_exponent},
                               ExplorationConfig{config.delta, true},
                               config.snapshot_stride);
    case Algorithm::two_timescale_aggfp:
      return run_two_timescale_aggfp(game, config.steps, seed, two,
                                     config.delta, options)
          .record;
    case Algorithm::two_timescale_fp:
      return run_two_timescale_fp(game, config.steps, seed, two, config.delta,
                                  options)
          .record;
    case Algorithm::individual_q:
      return run_individual_q(game, config.steps, seed, two,
                              /*temperature=*/config.delta, options)
          .record;
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace

ExperimentOutputs run_experiment(const ExperimentConfig& config) {
  config.validate();
  const RandomPayoffGame game = config.build_game();
  std::filesystem::create_directories(config.out_dir);

  ExperimentOutputs outputs;
  auto write_series = [&](const std::string& name, const std::vector<long>& xs,
                          const std::vector<double>& ys) {
    emit_csv(xs, ys, config.out_dir + "/" + name);
    outputs.files.push_back(name);
    outputs.row_counts.push_back(static_cast<long>(xs.size()));
  };

  const MixedProfile target =
      config.has_ne_target() ? config.ne_target() : MixedProfile{};

  for (const std::string& algo_name : config.algorithms) {
    const Algorithm algo = algorithm_from_name(algo_name);
    for (std::uint64_t seed : config.seeds) {
      const TrajectoryRecord rec = run_one(config, game, algo, seed);
      const std::size_t snapshots = rec.snapshot_steps.size();
      const int num_agents = rec.dims.num_agents;
      const int n = rec.dims.num_actions;

      std::ostringstream prefix;
      prefix << algo_name << "_seed" << seed;

      std::vector<double> ys(snapshots);
      for (int i = 0; i < num_agents; ++i) {
        for (int a = 0; a < n; ++a) {
          for (std::size_t s = 0; s < snapshots; ++s)
            ys[s] = rec.empirical_row(s)[static_cast<std::size_t>(i) * n + a];
          std::ostringstream name;
          name << prefix.str() << "_freq_agent" << i << "_action" << a
               << ".csv";
          write_series(name.str(), rec.snapshot_steps, ys);
        }
      }
      if (!rec.q_error_series.empty())
        write_series(prefix.str() + "_q_error.csv", rec.snapshot_steps,
                     rec.q_error_series);
      if (config.has_ne_target()) {
        for (std::size_t s = 0; s < snapshots; ++s)
          ys[s] = ne_distance(rec.empirical_row(s), target);
        write_series(prefix.str() + "_ne_distance.csv", rec.snapshot_steps, ys);
      }
    }
  }

  const std::string manifest = config.out_dir + "/manifest.txt";
  std::FILE* f = std::fopen(manifest.c_str(), "wb");
  if (f == nullptr) throw std::runtime_error("cannot write file: " + manifest);
  bool ok = std::fputs("# aggplay run manifest\n", f) >= 0;
  const std::string echo = config.echo();
  ok = ok && std::fputs(echo.c_str(), f) >= 0;
  for (std::size_t i = 0; ok && i < outputs.files.size(); ++i) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), "output = %s %ld\n",
                  outputs.files[i].c_str(), outputs.row_counts[i]);
    ok = std::fputs(buf, f) >= 0;
  }
  ok = (std::fclose(f) == 0) && ok;
  if (!ok) throw std::runtime_error("write failed: " + manifest);
  outputs.manifest_path = manifest;
  return outputs;
}

namespace {

int largest_index_argmax(std::span<const double> v) {
  int best = 0;
  for (std::size_t a = 1; a < v.size(); ++a)
    if (v[a] >= v[best]) best = static_cast<int>(a);
  return best;
}

// fp run with the largest-index argmax; only the negative control uses it.
TrajectoryRecord run_fp_largest_tiebreak(const AnonymousPolymatrixGame& game,
                                         long steps, std::uint64_t seed,
                                         const StepSizeSchedule& schedule,
                                         const ExplorationConfig& exploration) {
  const GameDims& dims = game.dims();
  SplitMix64 init_rng = derive_stream(seed, "init-actions");
  SplitMix64 explore_rng = derive_stream(seed, "explore");

  ActionProfile current(dims.num_agents);
  for (int i = 0; i < dims.num_agents; ++i)
    current[i] = init_rng.uniform_int(dims.num_actions);
  BeliefState state(dims, current);

  TrajectoryRecord rec;
  rec.algorithm = Algorithm::classical_fp;
  rec.dims = dims;
  rec.seed = seed;
  rec.steps = steps;
  rec.actions.insert(rec.actions.end(), current.begin(), current.end());

  for (long k = 0; k < steps; ++k) {
    bool explore = false;
    if (exploration.delta > 0.0)
      explore = explore_rng.u01() < exploration.delta;
    if (explore) {
      for (int i = 0; i < dims.num_agents; ++i)
        current[i] = explore_rng.uniform_int(dims.num_actions);
    } else {
      for (int i = 0; i < dims.num_agents; ++i)
        current[i] = largest_index_argmax(
            expected_reward_individual(game, i, state.action_beliefs()));
    }
    state.observe(current, schedule.alpha(k + 1));
    rec.actions.insert(rec.actions.end(), current.begin(), current.end());
  }
  rec.final_empirical = state.empirical_all();
  return rec;
}

}  // namespace

double reward_gap_along(const AnonymousPolymatrixGame& game,
                        const TrajectoryRecord& record,
                        const StepSizeSchedule& schedule) {
  const GameDims& dims = game.dims();
  std::vector<SuccinctReward> succinct;
  succinct.reserve(dims.num_agents);
  for (int i = 0; i < dims.num_agents; ++i)
    succinct.push_back(expand_polymatrix(game, i));

  auto profile_at = [&](long step) {
    auto row = record.profile_at(step);
    return ActionProfile(row.begin(), row.end());
  };
  BeliefState state(dims, profile_at(0));

  double gap = 0.0;
  auto measure = [&] {
    for (int i = 0; i < dims.num_agents; ++i) {
      const std::vector<double> r_ind =
          expected_reward_individual(game, i, state.action_beliefs());
      const std::vector<double> r_agg =
          expected_reward_aggregate(succinct[i], state.aggregate_belief(i));
      for (int a = 0; a < dims.num_actions; ++a)
        gap = std::max(gap, std::fabs(r_ind[a] - r_agg[a]));
    }
  };

  measure();
  for (long k = 1; k <= record.steps; ++k) {
    state.observe(profile_at(k), schedule.alpha(k));
    measure();
  }
  return gap;
}

CoupledComparison compare_coupled_runs(const AnonymousPolymatrixGame& game,
                                       long steps, std::uint64_t seed,
                                       const StepSizeSchedule& schedule,
                                       const ExplorationConfig& exploration,
                                       bool flip_fp_tiebreak) {
  const TrajectoryRecord agg =
      run_repeated_play(Algorithm::aggregate_fp, game, steps, seed, schedule,
                        exploration, steps);
  const TrajectoryRecord fp =
      flip_fp_tiebreak
          ? run_fp_largest_tiebreak(game, steps, seed, schedule, exploration)
          : run_repeated_play(Algorithm::classical_fp, game, steps, seed,
                              schedule, exploration, steps);

  CoupledComparison cmp;
  cmp.identical = true;
  for (long k = 0; k <= steps && cmp.identical; ++k) {
    auto a = fp.profile_at(k);
    auto b = agg.profile_at(k);
    if (!std::equal(a.begin(), a.end(), b.begin())) {
      cmp.identical = false;
      cmp.first_mismatch_step = k;
    }
  }
  cmp.reward_gap = std::max(reward_gap_along(game, fp, schedule),
                            reward_gap_along(game, agg, schedule));
  return cmp;
}

std::string EquivalenceReport::summary() const {
  std::ostringstream os;
  os << "instances: " << instances << "  coupled runs: " << runs << "\n";
  os << "trajectory mismatches: " << trajectory_mismatches;
  if (trajectory_mismatches > 0)
    os << " (first: instance " << first_mismatch_instance << ", step "
       << first_mismatch_step << ")";
  os << "\n";
  os << "max pathwise reward gap: " << max_reward_gap << "\n";
  os << "max mixed-profile reward gap: " << max_mixed_reward_gap << "\n";
  os << "result: " << (passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

namespace {

// Expected reward of every own action by enumerating all opponent profiles,
// weighted by the product of opponent beliefs. The suite's reference route.
std::vector<double> brute_force_expected_reward(
    const AnonymousPolymatrixGame& game, int agent,
    const MixedProfile& beliefs) {
  const GameDims& dims = game.dims();
  const int n = dims.num_actions;
  std::vector<double> out(n, 0.0);
  std::vector<int> opp(dims.num_agents - 1, 0);
  for (;;) {
    double weight = 1.0;
    int slot = 0;
    for (int j = 0; j < dims.num_agents; ++j) {
      if (j == agent) continue;
      weight *= beliefs[j][opp[slot]];
      ++slot;
    }
    for (int a = 0; a < n; ++a) {
      double r = 0.0;
      for (int b : opp) r += game.pairwise_entry(agent, a, b);
      out[a] += weight * r;
    }
    int pos = static_cast<int>(opp.size()) - 1;
    while (pos >= 0 && ++opp[pos] == n) opp[pos--] = 0;
    if (pos < 0) break;
  }
  return out;
}

}  // namespace

EquivalenceReport equivalence_suite(const EquivalenceConfig& config) {
  if (config.instances < 1) throw usage_error("instances: must be >= 1");
  if (config.steps < 1) throw usage_error("steps: must be >= 1");
  if (config.max_agents < 2) throw usage_error("max-agents: must be >= 2");
  if (config.max_actions < 2) throw usage_error("max-actions: must be >= 2");
  if (config.deltas.empty()) throw usage_error("deltas: must be nonempty");
  for (double d : config.deltas)
    if (!(d >= 0.0 && d < 1.0)) throw usage_error("deltas: must lie in [0, 1)");
  const StepSizeSchedule schedule{config.schedule_exponent};
  schedule.validate();

  SplitMix64 gen = derive_stream(config.seed, "game-gen");
  EquivalenceReport report;
  report.instances = config.instances;

  for (int inst = 0; inst < config.instances; ++inst) {
    const GameDims dims{2 + gen.uniform_int(config.max_agents - 1),
                        2 + gen.uniform_int(config.max_actions - 1)};
    std::vector<std::vector<double>> matrices(dims.num_agents);
    for (auto& m : matrices) {
      m.resize(static_cast<std::size_t>(dims.num_actions) * dims.num_actions);
      for (double& v : m) v = 2.0 * gen.u01() - 1.0;
    }
    const AnonymousPolymatrixGame game(dims, std::move(matrices));
    const std::uint64_t run_seed = gen.next();

    for (double delta : config.deltas) {
      const CoupledComparison cmp =
          compare_coupled_runs(game, config.steps, run_seed, schedule,
                               ExplorationConfig{delta, true});
      ++report.runs;
      if (!cmp.identical) {
        ++report.trajectory_mismatches;
        if (report.first_mismatch_instance < 0) {
          report.first_mismatch_instance = inst;
          report.first_mismatch_step = cmp.first_mismatch_step;
        }
      }
      report.max_reward_gap = std::max(report.max_reward_gap, cmp.reward_gap);
    }

    // aggregate route against brute force on one random mixed profile
    MixedProfile beliefs(dims.num_agents,
                         std::vector<double>(dims.num_actions));
    for (auto& pi : beliefs) {
      double total = 0.0;
      for (double& p : pi) total += (p = gen.u01() + 1e-3);
      for (double& p : pi) p /= total;
    }
    for (int i = 0; i < dims.num_agents; ++i) {
      const std::vector<double> brute =
          brute_force_expected_reward(game, i, beliefs);
      const std::vector<double> agg = expected_reward_aggregate(
          expand_polymatrix(game, i), aggregate_distribution(beliefs, i, dims));
      for (int a = 0; a < dims.num_actions; ++a)
        report.max_mixed_reward_gap =
            std::max(report.max_mixed_reward_gap, std::fabs(brute[a] - agg[a]));
    }
  }
  return report;
}

}  // namespace aggplay
