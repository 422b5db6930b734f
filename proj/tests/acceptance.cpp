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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "aggplay/continuous.hpp"
#include "aggplay/discrete.hpp"
#include "aggplay/experiment.hpp"
#include "aggplay/model_free.hpp"
#include "oracles.hpp"

using namespace aggplay;
namespace fs = std::filesystem;

namespace {

constexpr long kSteps = 200000;
constexpr int kSeeds = 10;

// ---- shared heavy runs (criteria 6-9 reuse them) ---------------------------

struct Rps4Runs {
  std::vector<ModelFreeResult> aggfp, fp2t, indq;
};

const Rps4Runs& rps4_runs() {
  static const Rps4Runs runs = [] {
    const RandomPayoffGame game = build_rps4();
    const TwoTimescaleSchedule schedule;  // alpha 0.7, beta 0.6
    const double delta = 0.1;
    Rps4Runs r;
    for (int seed = 1; seed <= kSeeds; ++seed) {
      r.aggfp.push_back(
          run_two_timescale_aggfp(game, kSteps, seed, schedule, delta));
      r.fp2t.push_back(
          run_two_timescale_fp(game, kSteps, seed, schedule, delta));
      r.indq.push_back(run_individual_q(game, kSteps, seed, schedule,
                                        /*temperature=*/delta));
    }
    return r;
  }();
  return runs;
}

const EquivalenceReport& coupled_report() {
  static const EquivalenceReport report = [] {
    EquivalenceConfig config;
    config.instances = 100;
    config.steps = 1000;
    config.max_agents = 5;
    config.max_actions = 3;
    config.deltas = {0.0, 0.1};
    return equivalence_suite(config);
  }();
  return report;
}

// ---- criteria --------------------------------------------------------------

bool criterion_succinct_size(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  const std::int64_t succinct = succinct_size({5, 3});
  std::int64_t full = 1;
  for (int i = 0; i < 5; ++i) full *= 3;
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  std::ostringstream os;
  os << "succinct " << succinct << " vs full " << full << " in " << ms << " ms";
  detail = os.str();
  return succinct == 45 && full == 243 && ms < 1.0;
}

bool criterion_mixed_reward_equivalence(std::string& detail) {
  SplitMix64 rng(20260810);
  double max_gap = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int num_agents = 2 + rng.uniform_int(4);   // up to 5
    const int num_actions = 2 + rng.uniform_int(2);  // up to 3
    const auto game = oracle::random_game(rng, num_agents, num_actions);
    const MixedProfile beliefs =
        oracle::random_mixed(rng, num_agents, num_actions);
    for (int i = 0; i < num_agents; ++i) {
      const auto brute = oracle::expected_reward_enum(game, i, beliefs);
      const auto aggregate = expected_reward_aggregate(
          expand_polymatrix(game, i),
          aggregate_distribution(beliefs, i, {num_agents, num_actions}));
      for (int a = 0; a < num_actions; ++a)
        max_gap = std::max(max_gap, std::fabs(brute[a] - aggregate[a]));
    }
  }
  std::ostringstream os;
  os << "max |individual - aggregate| = " << max_gap << " over 100 games";
  detail = os.str();
  return max_gap <= 1e-9;
}

bool criterion_trajectory_equality(std::string& detail) {
  const EquivalenceReport& report = coupled_report();
  std::ostringstream os;
  os << report.runs << " coupled runs, " << report.trajectory_mismatches
     << " mismatches";
  detail = os.str();
  return report.trajectory_mismatches == 0;
}

bool criterion_pathwise_reward_equality(std::string& detail) {
  const EquivalenceReport& report = coupled_report();
  std::ostringstream os;
  os << "max pathwise reward gap = " << report.max_reward_gap;
  detail = os.str();
  return report.max_reward_gap <= 1e-9;
}

bool criterion_continuous_equivalence(std::string& detail) {
  SplitMix64 rng(271828);
  double reward_gap = 0.0, strategy_gap = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int num_agents = 2 + rng.uniform_int(4);
    const int num_actions = 2 + rng.uniform_int(2);
    const auto game = oracle::random_game(rng, num_agents, num_actions);
    const MixedProfile start =
        oracle::random_mixed(rng, num_agents, num_actions);
    const double delta = trial < 10 ? 0.1 : 0.0;
    const PathDeviation dev = compare_coupled_flows(game, start, delta, 1e-3, 10.0);
    reward_gap = std::max(reward_gap, dev.reward_gap);
    strategy_gap = std::max(strategy_gap, dev.strategy_gap);
  }
  std::ostringstream os;
  os << "max reward gap " << reward_gap << ", max strategy gap "
     << strategy_gap << " over 20 instances";
  detail = os.str();
  return reward_gap <= 1e-9 && strategy_gap <= 1e-9;
}

bool criterion_rps4_frequencies(std::string& detail) {
  int good_seeds = 0;
  double worst = 0.0;
  for (const ModelFreeResult& run : rps4_runs().aggfp) {
    double dev = 0.0;
    for (const auto& freqs : run.record.final_empirical)
      for (double f : freqs) dev = std::max(dev, std::fabs(f - 1.0 / 3));
    worst = std::max(worst, dev);
    if (dev <= 0.05) ++good_seeds;
  }
  std::ostringstream os;
  os << good_seeds << "/" << kSeeds
     << " seeds with all frequencies within 0.05 of 1/3 at k=" << kSteps
     << " (worst seed deviation " << worst << ")";
  detail = os.str();
  return good_seeds >= 8;
}

bool criterion_q_error_ordering(std::string& detail) {
  const Rps4Runs& runs = rps4_runs();
  int agg_better = 0;
  for (int s = 0; s < kSeeds; ++s) {
    const double agg = runs.aggfp[s].record.q_error_series.back();
    const double fp = runs.fp2t[s].record.q_error_series.back();
    if (agg < fp) ++agg_better;
  }
  std::ostringstream os;
  os << "aggregate learner strictly below the profile-indexed baseline for "
     << agg_better << "/" << kSeeds << " seeds";
  detail = os.str();
  return agg_better >= 8;
}

bool criterion_ne_distance_ordering(std::string& detail) {
  const Rps4Runs& runs = rps4_runs();
  const MixedProfile target(4, std::vector<double>(3, 1.0 / 3));
  int agg_best = 0, beats_indq = 0;
  double agg_sum = 0.0, fp_sum = 0.0, ind_sum = 0.0;
  for (int s = 0; s < kSeeds; ++s) {
    const double agg = ne_distance(runs.aggfp[s].record.final_empirical, target);
    const double fp = ne_distance(runs.fp2t[s].record.final_empirical, target);
    const double ind = ne_distance(runs.indq[s].record.final_empirical, target);
    agg_sum += agg;
    fp_sum += fp;
    ind_sum += ind;
    if (agg <= fp && agg <= ind) ++agg_best;
    if (agg <= ind) ++beats_indq;
  }
  std::ostringstream os;
  os << "aggregate learner at or below both baselines for " << agg_best << "/"
     << kSeeds << " seeds (vs indq alone " << beats_indq << "/" << kSeeds
     << "; mean final distances agg " << agg_sum / kSeeds << ", fp2t "
     << fp_sum / kSeeds << ", indq " << ind_sum / kSeeds << ")";
  detail = os.str();
  return agg_best >= 8;
}

bool property_simplex_preservation() {
  SplitMix64 rng(99);
  const GameDims dims{4, 3};
  ActionProfile profile = {0, 1, 2, 0};
  BeliefState state(dims, profile);
  const StepSizeSchedule schedule{0.7};
  for (long k = 1; k <= 1000000; ++k) {
    for (int& a : profile) a = rng.uniform_int(3);
    state.observe(profile, schedule.alpha(k));
  }
  auto defect = [](std::span<const double> v) {
    double total = 0.0, neg = 0.0;
    for (double p : v) {
      total += p;
      neg = std::min(neg, p);
    }
    return std::max(std::fabs(total - 1.0), -neg);
  };
  for (int i = 0; i < 4; ++i)
    if (defect(state.action_belief(i)) > 1e-9 ||
        defect(state.aggregate_belief(i)) > 1e-9 ||
        defect(state.empirical(i)) > 1e-9)
      return false;
  return true;
}

bool property_rank_bijection() {
  for (int num_agents = 2; num_agents <= 8; ++num_agents)
    for (int num_actions = 1; num_actions <= 4; ++num_actions) {
      const GameDims dims{num_agents, num_actions};
      const auto all = oracle::compositions(num_agents - 1, num_actions);
      if (static_cast<int>(all.size()) != dims.aggregate_space_size())
        return false;
      for (std::size_t r = 0; r < all.size(); ++r) {
        if (rank_count(all[r]) != static_cast<int>(r)) return false;
        if (unrank_count(static_cast<int>(r), dims).counts != all[r])
          return false;
      }
    }
  return true;
}

bool property_q_locality_and_bound() {
  const RandomPayoffGame game = build_rps4();
  const TwoTimescaleSchedule schedule;
  const auto r1 = run_two_timescale_aggfp(game, 300, 5, schedule, 0.1);
  const auto r2 = run_two_timescale_aggfp(game, 301, 5, schedule, 0.1);
  for (int i = 0; i < 4; ++i) {
    long visit_diff = 0;
    int changed = 0;
    for (std::size_t c = 0; c < r1.q_tables[i].values.size(); ++c) {
      if (r1.q_tables[i].values[c] != r2.q_tables[i].values[c]) ++changed;
      visit_diff += r2.q_tables[i].visits[c] - r1.q_tables[i].visits[c];
    }
    if (visit_diff != 1 || changed > 1) return false;
  }
  for (const ModelFreeResult& run : rps4_runs().aggfp)
    for (const QTable& t : run.q_tables)
      for (double v : t.values)
        if (std::fabs(v) > 13.0) return false;
  return true;
}

bool property_euler_invariance() {
  SplitMix64 rng(123);
  const GameDims dims{3, 3};
  const auto game = oracle::random_game(rng, 3, 3);
  ContinuousState state = consistent_init(oracle::random_mixed(rng, 3, 3), dims);
  const double h = 0.9;
  for (int step = 0; step < 500; ++step) {
    const auto deriv = br_field(state, game, 0.1);
    for (int i = 0; i < 3; ++i)
      for (int a = 0; a < 3; ++a) state.strategy[i][a] += h * deriv[i][a];
    for (int i = 0; i < 3; ++i) {
      double total = 0.0;
      for (double p : state.strategy[i]) {
        if (p < -1e-12) return false;
        total += p;
      }
      if (std::fabs(total - 1.0) > 1e-12) return false;
    }
  }
  return true;
}

bool property_byte_identical_reruns() {
  const fs::path dir = fs::temp_directory_path() / "aggplay_acceptance_out";
  fs::remove_all(dir);
  ExperimentConfig config;
  config.algorithms = {"aggfp2t", "fp2t", "indq"};
  config.steps = 300;
  config.seeds = {1};
  config.snapshot_stride = 100;
  config.out_dir = (dir / "a").string();
  const ExperimentOutputs first = run_experiment(config);
  config.out_dir = (dir / "b").string();
  const ExperimentOutputs second = run_experiment(config);

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  if (first.files != second.files) return false;
  for (const std::string& f : first.files)
    if (slurp(dir / "a" / f) != slurp(dir / "b" / f)) return false;
  return true;
}

bool criterion_property_suite(std::string& detail) {
  struct Named {
    const char* name;
    bool ok;
  };
  const Named checks[] = {
      {"simplex preservation (1e6 updates)", property_simplex_preservation()},
      {"rank/unrank bijection (N<=8, n<=4)", property_rank_bijection()},
      {"Q-cell locality and |Q|<=13", property_q_locality_and_bound()},
      {"Euler simplex forward-invariance", property_euler_invariance()},
      {"byte-identical CSV reruns", property_byte_identical_reruns()},
  };
  std::ostringstream os;
  bool all = true;
  for (const Named& c : checks) {
    if (!c.ok) {
      all = false;
      os << (os.str().empty() ? "failed: " : ", ") << c.name;
    }
  }
  detail = all ? "all property checks passed" : os.str();
  return all;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "succinct-size identity (45 vs 243)", criterion_succinct_size},
      {2, "individual/aggregate expected-reward equivalence",
       criterion_mixed_reward_equivalence},
      {3, "coupled fp/agg-fp trajectory equality",
       criterion_trajectory_equality},
      {4, "pathwise expected-reward equality",
       criterion_pathwise_reward_equality},
      {5, "coupled continuous-flow equivalence",
       criterion_continuous_equivalence},
      {6, "rps4 empirical frequencies near uniform",
       criterion_rps4_frequencies},
      {7, "rps4 Q-error ordering", criterion_q_error_ordering},
      {8, "rps4 NE-distance ordering", criterion_ne_distance_ordering},
      {9, "property suite", criterion_property_suite},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.check(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] criterion %d: %s - %s (%.2fs)\n", ok ? "PASS" : "FAIL",
                c.id, c.name, detail.c_str(), seconds);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures == 0)
    std::printf("all %zu criteria passed\n", criteria.size());
  else
    std::printf("%d criteria FAILED\n", failures);
  return failures;
}
