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

#ifndef AGGPLAY_EXPERIMENT_HPP_
#define AGGPLAY_EXPERIMENT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "aggplay/discrete.hpp"
#include "aggplay/game.hpp"
#include "aggplay/model_free.hpp"

// Experiment orchestration: run configurations, the built-in perturbed
// rock-paper-scissors game, CSV/manifest output, and the randomized
// fp/agg-fp equivalence suite.
namespace aggplay {

// Configuration or CLI problems; the CLI maps these to exit code 2.
class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Run configuration. Loaded from a plain key=value file (# comments, blank
// lines and `output` keys ignored, lists space-separated) and overridable
// by CLI flags; the manifest echoes it back in the same format, so a
// manifest re-feeds as a config.
struct ExperimentConfig {
  std::string game = "rps4";  // "rps4" or "inline"
  // inline games: dims plus one shared row-major pairwise matrix and an
  // optional perturbation (defaults to none)
  int num_agents = 0;
  int num_actions = 0;
  std::vector<double> pairwise;
  std::vector<double> perturb_support;
  std::vector<double> perturb_probs;

  std::vector<std::string> algorithms = {"aggfp2t"};
  long steps = 200000;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double delta = 0.1;
  double alpha_exponent = 0.7;
  double beta_exponent = 0.6;
  std::string out_dir = "out";
  long snapshot_stride = 100;

  void validate() const;  // throws usage_error naming the offending field
  void set_key(const std::string& key, const std::string& value);
  std::string echo() const;
  static ExperimentConfig from_file(const std::string& path);

  RandomPayoffGame build_game() const;
  // Known equilibrium target for reporting NE distance, if any (uniform play
  // for the builtin rps4 game).
  bool has_ne_target() const { return game == "rps4"; }
  MixedProfile ne_target() const;
};

// 4-agent rock-paper-scissors with pairwise matrix rows (0,-1,1), (1,0,-1),
// (-1,1,0) and additive payoff noise on {-4,-2,0,2,4} with probabilities
// (1/10, 1/5, 4/10, 1/5, 1/10) for every agent.
RandomPayoffGame build_rps4();

// Writes a two-column series: header "x,y", one row per point, values with
// 12 significant digits, newline terminated. Empty series are an error and
// create no file.
void emit_csv(const std::vector<long>& xs, const std::vector<double>& ys,
              const std::string& path);

// Runs every (algorithm, seed) pair of the config, writes one CSV per
// metric series (per-(agent,action) empirical frequencies, total Q-error
// where the algorithm keeps a Q-table, NE distance where the target is
// known) and a manifest listing the echoed config and every file with its
// data row count. Rerunning a config overwrites the same bytes.
struct ExperimentOutputs {
  std::vector<std::string> files;   // relative to out_dir
  std::vector<long> row_counts;
  std::string manifest_path;
};
ExperimentOutputs run_experiment(const ExperimentConfig& config);

// Coupled fp/agg-fp comparison under one seed: both runs draw the same
// initial actions and exploration randomness. Reports whether the action
// sequences match exactly, the first step where they differ, and the
// largest pathwise gap between the individual and aggregate expected-reward
// vectors along the (fp-side) history. `flip_fp_tiebreak` switches the fp
// side to a largest-index argmax as a negative control.
struct CoupledComparison {
  bool identical = false;
  long first_mismatch_step = -1;
  double reward_gap = 0.0;
};
CoupledComparison compare_coupled_runs(const AnonymousPolymatrixGame& game,
                                       long steps, std::uint64_t seed,
                                       const StepSizeSchedule& schedule,
                                       const ExplorationConfig& exploration,
                                       bool flip_fp_tiebreak = false);

// Largest entrywise gap between the two expected-reward routes when the
// recorded action history is replayed through fresh beliefs.
double reward_gap_along(const AnonymousPolymatrixGame& game,
                        const TrajectoryRecord& record,
                        const StepSizeSchedule& schedule);

struct EquivalenceConfig {
  int instances = 100;
  long steps = 1000;
  int max_agents = 5;
  int max_actions = 3;
  std::vector<double> deltas = {0.0, 0.1};
  double schedule_exponent = 1.0;
  std::uint64_t seed = 1;
};

struct EquivalenceReport {
  int instances = 0;
  int runs = 0;
  long trajectory_mismatches = 0;
  int first_mismatch_instance = -1;
  long first_mismatch_step = -1;
  double max_reward_gap = 0.0;       // along coupled trajectories
  double max_mixed_reward_gap = 0.0; // brute-force vs aggregate, random mixed

  bool passed() const {
    return trajectory_mismatches == 0 && max_reward_gap <= 1e-9 &&
           max_mixed_reward_gap <= 1e-9;
  }
  std::string summary() const;
};

// Draws random anonymous polymatrix games (entries uniform in [-1,1]),
// runs the coupled comparison for every configured delta, and checks the
// aggregate expected-reward route against brute-force enumeration over all
// opponent profiles on random mixed profiles. Failures are report entries,
// not errors.
EquivalenceReport equivalence_suite(const EquivalenceConfig& config);

}  // namespace aggplay

#endif  // AGGPLAY_EXPERIMENT_HPP_
