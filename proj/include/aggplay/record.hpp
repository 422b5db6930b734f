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

#ifndef AGGPLAY_RECORD_HPP_
#define AGGPLAY_RECORD_HPP_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aggplay/game.hpp"

namespace aggplay {

enum class Algorithm {
  classical_fp,        // "fp"
  aggregate_fp,        // "aggfp"
  two_timescale_fp,    // "fp2t"
  two_timescale_aggfp, // "aggfp2t"
  individual_q,        // "indq"
};

std::string_view algorithm_name(Algorithm a);
Algorithm algorithm_from_name(std::string_view name);  // invalid name throws

// What one simulation run produces. Snapshots are taken at every step that
// is a multiple of the stride, plus the final step; the empirical action
// frequencies of all agents are stored per snapshot, and runs that maintain
// Q-tables also store the total Q-error per snapshot.
struct TrajectoryRecord {
  Algorithm algorithm = Algorithm::classical_fp;
  GameDims dims;
  std::uint64_t seed = 0;
  long steps = 0;

  std::vector<int> actions;  // (steps+1) * N, step-major

  std::vector<long> snapshot_steps;
  std::vector<double> empirical_snapshots;  // snapshot-major, N*n per row
  std::vector<double> q_error_series;       // per snapshot; empty if no Q-table

  std::vector<std::vector<double>> final_empirical;  // N vectors of n

  std::span<const int> profile_at(long step) const {
    return {actions.data() + static_cast<std::size_t>(step) * dims.num_agents,
            static_cast<std::size_t>(dims.num_agents)};
  }
  std::span<const double> empirical_row(std::size_t snapshot) const {
    const std::size_t row =
        static_cast<std::size_t>(dims.num_agents) * dims.num_actions;
    return {empirical_snapshots.data() + snapshot * row, row};
  }
};

// Steps at which snapshots are recorded for `steps` total steps: every
// multiple of `stride` in [1, steps] plus the final step, ceil(steps/stride)
// snapshots in total.
bool is_snapshot_step(long step, long total_steps, long stride);

}  // namespace aggplay

#endif  // AGGPLAY_RECORD_HPP_
