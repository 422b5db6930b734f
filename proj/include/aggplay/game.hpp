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

#ifndef AGGPLAY_GAME_HPP_
#define AGGPLAY_GAME_HPP_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Matrix games with a shared action set, their anonymous/polymatrix
// structure, and the aggregate-count view: the count vector of how many
// opponents play each action. For N agents and n actions the count vectors
// of one agent's opponents form the set of n-part compositions of N-1; a
// reward table indexed by (own action, count vector) is the succinct form
// of an anonymous reward function and has n*C(N+n-2, n-1) entries instead
// of n^N.
namespace aggplay {

struct GameDims {
  int num_agents = 0;   // N >= 2
  int num_actions = 0;  // n >= 1, shared by all agents

  void validate() const;
  // |X|: number of n-part compositions of N-1, i.e. C(N+n-2, n-1).
  int aggregate_space_size() const;
};

using ActionProfile = std::vector<int>;                 // length N
using MixedProfile = std::vector<std::vector<double>>;  // N simplex vectors

// A count vector over actions (summing to N-1) together with its canonical
// rank: the position of the count vector in lexicographic order over all
// compositions. rank_count/unrank_count are inverse bijections.
struct AggregateCount {
  std::vector<int> counts;
  int rank = 0;
};

// Thrown by succinct_from_full when two permutation-equivalent profiles
// carry different rewards.
class not_anonymous_error : public std::runtime_error {
 public:
  not_anonymous_error(int agent, const ActionProfile& a, const ActionProfile& b,
                      double reward_a, double reward_b);
};

// Exact binomial coefficient; arguments small enough for 64-bit results.
std::int64_t binomial(int n, int k);

// Per-agent pairwise reward matrices, the same matrix applied to every
// opponent. reward(i, a) = sum_{j != i} pairwise[i][a_i][a_j], which makes
// the game polymatrix and anonymous by construction.
class AnonymousPolymatrixGame {
 public:
  AnonymousPolymatrixGame(GameDims dims,
                          std::vector<std::vector<double>> pairwise_per_agent);
  // Same matrix (row-major n x n) for every agent.
  static AnonymousPolymatrixGame with_shared_matrix(GameDims dims,
                                                    std::vector<double> matrix);

  const GameDims& dims() const { return dims_; }
  // Row-major n x n matrix of agent i.
  std::span<const double> pairwise(int agent) const;
  double pairwise_entry(int agent, int own_action, int other_action) const;

  double reward(int agent, const ActionProfile& profile) const;

 private:
  GameDims dims_;
  std::vector<std::vector<double>> pairwise_;
};

// Dense reward tables over all n^N joint profiles, one per agent. Profile
// indices are mixed-radix with agent 0 most significant.
struct FullRewardTable {
  GameDims dims;
  std::vector<std::vector<double>> values;  // [agent][profile_index]

  double at(int agent, const ActionProfile& profile) const;
};

std::size_t profile_index(const ActionProfile& profile, int num_actions);

// Reward table over (own action, opponent count vector), row-major
// n x aggregate_space_size.
struct SuccinctReward {
  int num_actions = 0;
  int space_size = 0;
  std::vector<double> table;

  double at(int action, int count_rank) const {
    return table[static_cast<std::size_t>(action) * space_size + count_rank];
  }
  std::span<const double> row(int action) const {
    return {table.data() + static_cast<std::size_t>(action) * space_size,
            static_cast<std::size_t>(space_size)};
  }
};

// Count vector of the actions in `profile`, excluding agent `excluded`.
AggregateCount sigma(const ActionProfile& profile, int excluded,
                     const GameDims& dims);

// Lexicographic rank of a count vector among all compositions with the same
// length and sum; inverse below. O(n * sum) via cumulative binomials.
int rank_count(const std::vector<int>& counts);
AggregateCount unrank_count(int rank, const GameDims& dims);

// n * C(N+n-2, n-1): entries of one agent's succinct table.
std::int64_t succinct_size(const GameDims& dims);

// Dense expansion of the polymatrix rewards; used by oracles and baselines.
FullRewardTable full_from_polymatrix(const AnonymousPolymatrixGame& game);

// Succinct table of one agent from a full table, verifying anonymity: all
// profiles with the same count vector must agree (within `tolerance`, which
// defaults to exact equality of stored values).
SuccinctReward succinct_from_full(const FullRewardTable& full, int agent,
                                  double tolerance = 0.0);

// Succinct table of a polymatrix game: value(a, x) = sum_b x[b] * M[a][b].
SuccinctReward expand_polymatrix(const AnonymousPolymatrixGame& game,
                                 int agent);

// Expected reward of each own action when opponent j plays beliefs[j]
// independently; beliefs[agent] is ignored. Linear in each opponent belief.
std::vector<double> expected_reward_individual(const AnonymousPolymatrixGame& game,
                                               int agent,
                                               const MixedProfile& beliefs);

// Expected reward of each own action under a distribution mu over count
// vectors (indexed by rank).
std::vector<double> expected_reward_aggregate(const SuccinctReward& succinct,
                                              std::span<const double> mu);

// Exact distribution of the opponent count vector when each opponent j
// plays beliefs[j] independently; computed by adding one opponent at a time
// to the count distribution. Returned over ranks, sums to 1 within 1e-12.
std::vector<double> aggregate_distribution(const MixedProfile& beliefs,
                                           int excluded, const GameDims& dims);

// Smallest index attaining the maximum. The same tie-break is used by every
// dynamic in this library so coupled trajectories can be compared exactly.
int best_response(std::span<const double> rewards);

// Throws std::invalid_argument if v has an entry below -tolerance or its
// sum is farther than tolerance from 1. Accepted vectors are used as-is.
void validate_simplex(std::span<const double> v, double tolerance,
                      const char* what);

}  // namespace aggplay

#endif  // AGGPLAY_GAME_HPP_
