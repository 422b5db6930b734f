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

#include "aggplay/record.hpp"

namespace aggplay {

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::classical_fp: return "fp";
    case Algorithm::aggregate_fp: return "aggfp";
    case Algorithm::two_timescale_fp: return "fp2t";
    case Algorithm::two_timescale_aggfp: return "aggfp2t";
    case Algorithm::individual_q: return "indq";
  }
  throw std::invalid_argument("unknown algorithm");
}

Algorithm algorithm_from_name(std::string_view name) {
  if (name == "fp") return Algorithm::classical_fp;
  if (name == "aggfp") return Algorithm::aggregate_fp;
  if (name == "fp2t") return Algorithm::two_timescale_fp;
  if (name == "aggfp2t") return Algorithm::two_timescale_aggfp;
  if (name == "indq") return Algorithm::individual_q;
  throw std::invalid_argument("unknown algorithm name: " + std::string(name));
}

bool is_snapshot_step(long step, long total_steps, long stride) {
  return step % stride == 0 || step == total_steps;
}

}  // namespace aggplay
