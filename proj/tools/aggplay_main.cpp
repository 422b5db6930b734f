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

#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "aggplay/experiment.hpp"
#include "aggplay/kernels.hpp"

namespace {

struct RunFlags {
  std::string config_path, out_dir, algo;
  long seed = 0, steps = 0, stride = 0;
  double delta = 0.0;
  bool has_seed = false, has_steps = false, has_delta = false,
       has_stride = false;
};

int cmd_run(const RunFlags& flags) {
  aggplay::ExperimentConfig config;
  if (!flags.config_path.empty())
    config = aggplay::ExperimentConfig::from_file(flags.config_path);
  if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
  if (flags.has_seed)
    config.seeds = {static_cast<std::uint64_t>(flags.seed)};
  if (flags.has_steps) config.steps = flags.steps;
  if (flags.has_delta) config.delta = flags.delta;
  if (!flags.algo.empty()) config.algorithms = {flags.algo};
  if (flags.has_stride) config.snapshot_stride = flags.stride;

  const aggplay::ExperimentOutputs outputs = aggplay::run_experiment(config);
  std::printf("wrote %zu series to %s (manifest: %s)\n", outputs.files.size(),
              config.out_dir.c_str(), outputs.manifest_path.c_str());
  return 0;
}

int cmd_suite_equivalence(int instances, long steps, int max_agents,
                          int max_actions, long seed) {
  aggplay::EquivalenceConfig config;
  config.instances = instances;
  config.steps = steps;
  config.max_agents = max_agents;
  config.max_actions = max_actions;
  if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);

  const aggplay::EquivalenceReport report = aggplay::equivalence_suite(config);
  std::fputs(report.summary().c_str(), stdout);
  return report.passed() ? 0 : 1;
}

int cmd_game_info(const std::string& name) {
  if (name != "rps4")
    throw aggplay::usage_error("game: unknown builtin game: " + name);
  const aggplay::RandomPayoffGame game = aggplay::build_rps4();
  const aggplay::GameDims& dims = game.base.dims();
  const int n = dims.num_actions;

  std::printf("game: %s\n", name.c_str());
  std::printf("agents: %d\nactions: %d\n", dims.num_agents, n);
  std::printf("opponent count vectors: %d\n", dims.aggregate_space_size());
  double full = 1.0;
  for (int i = 0; i < dims.num_agents; ++i) full *= n;
  std::printf("reward entries per agent: succinct %lld, full %.0f\n",
              static_cast<long long>(aggplay::succinct_size(dims)), full);
  std::printf("pairwise matrix:\n");
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      std::printf(" %4.1f", game.base.pairwise_entry(0, a, b));
    std::printf("\n");
  }
  const aggplay::PayoffPerturbation& p = game.perturbations[0];
  std::printf("perturbation support:");
  for (double v : p.support) std::printf(" %g", v);
  std::printf("\nperturbation probabilities:");
  for (double v : p.probs) std::printf(" %g", v);
  std::printf("\nperturbation mean: %g\n", p.mean());
  std::printf("kernel backend: %s\n",
              std::string(aggplay::kernels::active_backend()).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"learning dynamics for anonymous polymatrix games"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run configured simulations");
  RunFlags flags;
  run->add_option("--config", flags.config_path,
                  "config file (key = value lines)");
  run->add_option("--out", flags.out_dir, "output directory");
  auto* seed_opt = run->add_option("--seed", flags.seed, "single seed override");
  auto* steps_opt =
      run->add_option("--steps", flags.steps, "number of repeated-play steps");
  auto* delta_opt =
      run->add_option("--delta", flags.delta, "exploration probability");
  run->add_option("--algo", flags.algo,
                  "single algorithm override: aggfp2t fp2t indq fp aggfp");
  auto* stride_opt = run->add_option("--snapshot-stride", flags.stride,
                                     "steps between snapshots");

  // suite equivalence
  auto* suite = app.add_subcommand("suite", "randomized verification suites");
  suite->require_subcommand(1);
  auto* equiv = suite->add_subcommand(
      "equivalence", "coupled fp/aggfp trajectory and reward checks");
  int instances = 100, max_agents = 5, max_actions = 3;
  long suite_steps = 1000, suite_seed = -1;
  equiv->add_option("--instances", instances, "number of random games");
  equiv->add_option("--steps", suite_steps, "steps per run");
  equiv->add_option("--max-agents", max_agents, "largest number of agents");
  equiv->add_option("--max-actions", max_actions, "largest number of actions");
  equiv->add_option("--seed", suite_seed, "suite seed");

  // game info
  auto* game = app.add_subcommand("game", "builtin game inspection");
  game->require_subcommand(1);
  auto* info = game->add_subcommand("info", "print a builtin game");
  std::string game_name = "rps4";
  info->add_option("--game", game_name, "builtin game name");

  try {
    app.parse(argc, argv);
    if (run->parsed()) {
      flags.has_seed = seed_opt->count() > 0;
      flags.has_steps = steps_opt->count() > 0;
      flags.has_delta = delta_opt->count() > 0;
      flags.has_stride = stride_opt->count() > 0;
      return cmd_run(flags);
    }
    if (equiv->parsed())
      return cmd_suite_equivalence(instances, suite_steps, max_agents,
                                   max_actions, suite_seed);
    if (info->parsed()) return cmd_game_info(game_name);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const aggplay::usage_error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
