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

#include "aggplay/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "aggplay/kernels.hpp"

namespace aggplay {

namespace {

std::string profile_to_string(const ActionProfile& p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) os << ',';
    os << p[i];
  }
  os << ')';
  return os.str();
}

void check_profile(const ActionProfile& profile, const GameDims& dims) {
  if (static_cast<int>(profile.size()) != dims.num_agents)
    throw std::invalid_argument("action profile has wrong length");
  for (int a : profile)
    if (a < 0 || a >= dims.num_actions)
      throw std::invalid_argument("action index out of range");
}

// Number of compositions of `total` into `parts` nonnegative parts.
std::int64_t composition_count(int total, int parts) {
  return binomial(total + parts - 1, parts - 1);
}

std::vector<int> unrank_composition(std::int64_t rank, int parts, int total) {
  std::vector<int> counts(parts, 0);
  int remaining = total;
  for (int pos = 0; pos + 1 < parts; ++pos) {
    int v = 0;
    for (;;) {
      std::int64_t block = composition_count(remaining - v, parts - pos - 1);
      if (rank < block) break;
      rank -= block;
      ++v;
    }
    counts[pos] = v;
    remaining -= v;
  }
  counts[parts - 1] = remaining;
  return counts;
}

}  // namespace

void GameDims::validate() const {
  if (num_agents < 2) throw std::invalid_argument("num_agents must be >= 2");
  if (num_actions < 1) throw std::invalid_argument("num_actions must be >= 1");
}

int GameDims::aggregate_space_size() const {
  const std::int64_t size = composition_count(num_agents - 1, num_actions);
  if (size > std::numeric_limits<int>::max())
    throw std::length_error("aggregate count space does not fit dense tables");
  return static_cast<int>(size);
}

not_anonymous_error::not_anonymous_error(int agent, const ActionProfile& a,
                                         const ActionProfile& b, double reward_a,
                                         double reward_b)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "reward table of agent " << agent
           << " is not anonymous: permutation-equivalent profiles "
           << profile_to_string(a) << " and " << profile_to_string(b)
           << " have rewards " << reward_a << " and " << reward_b;
        return os.str();
      }()) {}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

AnonymousPolymatrixGame::AnonymousPolymatrixGame(
    GameDims dims, std::vector<std::vector<double>> pairwise_per_agent)
    : dims_(dims), pairwise_(std::move(pairwise_per_agent)) {
  dims_.validate();
  const std::size_t cells =
      static_cast<std::size_t>(dims_.num_actions) * dims_.num_actions;
  if (static_cast<int>(pairwise_.size()) != dims_.num_agents)
    throw std::invalid_argument("need one pairwise matrix per agent");
  for (const auto& m : pairwise_)
    if (m.size() != cells)
      throw std::invalid_argument("pairwise matrix must be n x n");
}

AnonymousPolymatrixGame AnonymousPolymatrixGame::with_shared_matrix(
    GameDims dims, std::vector<double> matrix) {
  dims.validate();
  std::vector<std::vector<double>> per_agent(dims.num_agents, matrix);
  return AnonymousPolymatrixGame(dims, std::move(per_agent));
}

std::span<const double> AnonymousPolymatrixGame::pairwise(int agent) const {
  return pairwise_[agent];
}

double AnonymousPolymatrixGame::pairwise_entry(int agent, int own_action,
                                               int other_action) const {
  return pairwise_[agent][static_cast<std::size_t>(own_action) *
                              dims_.num_actions +
                          other_action];
}

double AnonymousPolymatrixGame::reward(int agent,
                                       const ActionProfile& profile) const {
  check_profile(profile, dims_);
  if (agent < 0 || agent >= dims_.num_agents)
    throw std::invalid_argument("agent index out of range");
  double r = 0.0;
  for (int j = 0; j < dims_.num_agents; ++j)
    if (j != agent) r += pairwise_entry(agent, profile[agent], profile[j]);
  return r;
}

std::size_t profile_index(const ActionProfile& profile, int num_actions) {
  std::size_t idx = 0;
  for (int a : profile) idx = idx * num_actions + static_cast<std::size_t>(a);
  return idx;
}

double FullRewardTable::at(int agent, const ActionProfile& profile) const {
  return values[agent][profile_index(profile, dims.num_actions)];
}

AggregateCount sigma(const ActionProfile& profile, int excluded,
                     const GameDims& dims) {
  dims.validate();
  check_profile(profile, dims);
  if (excluded < 0 || excluded >= dims.num_agents)
    throw std::invalid_argument("excluded agent index out of range");
  AggregateCount out;
  out.counts.assign(dims.num_actions, 0);
  for (int j = 0; j < dims.num_agents; ++j)
    if (j != excluded) ++out.counts[profile[j]];
  out.rank = rank_count(out.counts);
  return out;
}

int rank_count(const std::vector<int>& counts) {
  if (counts.empty()) throw std::invalid_argument("empty count vector");
  int total = 0;
  for (int c : counts) {
    if (c < 0) throw std::invalid_argument("count vector has negative entry");
    total += c;
  }
  const int parts = static_cast<int>(counts.size());
  std::int64_t rank = 0;
  int remaining = total;
  for (int pos = 0; pos + 1 < parts; ++pos) {
    for (int v = 0; v < counts[pos]; ++v)
      rank += composition_count(remaining - v, parts - pos - 1);
    remaining -= counts[pos];
  }
  return static_cast<int>(rank);
}

AggregateCount unrank_count(int rank, const GameDims& dims) {
  dims.validate();
  if (rank < 0 || rank >= dims.aggregate_space_size())
    throw std::invalid_argument("count rank out of range");
  AggregateCount out;
  out.counts = unrank_composition(rank, dims.num_actions, dims.num_agents - 1);
  out.rank = rank;
  return out;
}

std::int64_t succinct_size(const GameDims& dims) {
  dims.validate();
  return dims.num_actions *
         composition_count(dims.num_agents - 1, dims.num_actions);
}

FullRewardTable full_from_polymatrix(const AnonymousPolymatrixGame& game) {
  const GameDims& dims = game.dims();
  std::size_t total = 1;
  for (int i = 0; i < dims.num_agents; ++i)
    total *= static_cast<std::size_t>(dims.num_actions);
  FullRewardTable full;
  full.dims = dims;
  full.values.assign(dims.num_agents, std::vector<double>(total));
  ActionProfile profile(dims.num_agents, 0);
  for (std::size_t idx = 0;; ++idx) {
    for (int i = 0; i < dims.num_agents; ++i) {
      // evaluated through the opponent counts so permutation-equivalent
      // profiles store identical doubles (reward(i, profile) would round
      // differently per opponent order)
      const AggregateCount x = sigma(profile, i, dims);
      double r = 0.0;
      for (int b = 0; b < dims.num_actions; ++b)
        r += x.counts[b] * game.pairwise_entry(i, profile[i], b);
      full.values[i][idx] = r;
    }
    // mixed-radix odometer, agent N-1 is the fastest digit
    int pos = dims.num_agents - 1;
    while (pos >= 0 && ++profile[pos] == dims.num_actions) profile[pos--] = 0;
    if (pos < 0) break;
  }
  return full;
}

SuccinctReward succinct_from_full(const FullRewardTable& full, int agent,
                                  double tolerance) {
  const GameDims& dims = full.dims;
  dims.validate();
  if (agent < 0 || agent >= dims.num_agents)
    throw std::invalid_argument("agent index out of range");
  const int space = dims.aggregate_space_size();

  SuccinctReward out;
  out.num_actions = dims.num_actions;
  out.space_size = space;
  out.table.assign(static_cast<std::size_t>(dims.num_actions) * space, 0.0);

  std::vector<char> seen(out.table.size(), 0);
  // representative profile per (action, rank), kept for error reporting
  std::vector<ActionProfile> witness(out.table.size());

  ActionProfile profile(dims.num_agents, 0);
  for (;;) {
    const AggregateCount x = sigma(profile, agent, dims);
    for (int a = 0; a < dims.num_actions; ++a) {
      ActionProfile p = profile;
      p[agent] = a;
      const double r = full.at(agent, p);
      const std::size_t cell =
          static_cast<std::size_t>(a) * space + static_cast<std::size_t>(x.rank);
      if (!seen[cell]) {
        seen[cell] = 1;
        out.table[cell] = r;
        witness[cell] = p;
      } else if (std::fabs(out.table[cell] - r) > tolerance) {
        throw not_anonymous_error(agent, witness[cell], p, out.table[cell], r);
      }
    }
    int pos = dims.num_agents - 1;
    while (pos >= 0) {
      if (pos == agent) {
        --pos;
        continue;
      }
      if (++profile[pos] < dims.num_actions) break;
      profile[pos--] = 0;
    }
    if (pos < 0) break;
  }
  return out;
}

SuccinctReward expand_polymatrix(const AnonymousPolymatrixGame& game,
                                 int agent) {
  const GameDims& dims = game.dims();
  if (agent < 0 || agent >= dims.num_agents)
    throw std::invalid_argument("agent index out of range");
  const int n = dims.num_actions;
  const int space = dims.aggregate_space_size();

  SuccinctReward out;
  out.num_actions = n;
  out.space_size = space;
  out.table.resize(static_cast<std::size_t>(n) * space);
  for (int r = 0; r < space; ++r) {
    const AggregateCount x = unrank_count(r, dims);
    for (int a = 0; a < n; ++a) {
      double v = 0.0;
      for (int b = 0; b < n; ++b)
        v += x.counts[b] * game.pairwise_entry(agent, a, b);
      out.table[static_cast<std::size_t>(a) * space + r] = v;
    }
  }
  return out;
}

void validate_simplex(std::span<const double> v, double tolerance,
                      const char* what) {
  for (double p : v)
    if (!(p >= -tolerance))
      throw std::invalid_argument(std::string(what) +
                                  ": negative probability entry");
  const double total = kernels::sum(v.data(), v.size());
  if (std::fabs(total - 1.0) > tolerance)
    throw std::invalid_argument(std::string(what) + ": entries do not sum to 1");
}

std::vector<double> expected_reward_individual(const AnonymousPolymatrixGame& game,
                                               int agent,
                                               const MixedProfile& beliefs) {
  const GameDims& dims = game.dims();
  if (agent < 0 || agent >= dims.num_agents)
    throw std::invalid_argument("agent index out of range");
  if (static_cast<int>(beliefs.size()) != dims.num_agents)
    throw std::invalid_argument("need one belief vector per agent");
  const int n = dims.num_actions;

  // The reward is linear in each opponent belief, so the opponents can be
  // pooled into one vector before the matrix product.
  std::vector<double> pooled(n, 0.0);
  for (int j = 0; j < dims.num_agents; ++j) {
    if (j == agent) continue;
    if (static_cast<int>(beliefs[j].size()) != n)
      throw std::invalid_argument("belief vector has wrong length");
    validate_simplex(beliefs[j], 1e-9, "opponent belief");
    kernels::axpy(pooled.data(), beliefs[j].data(), pooled.size(), 1.0);
  }
  std::vector<double> out(n);
  kernels::matvec(game.pairwise(agent).data(), n, n, pooled.data(), out.data());
  return out;
}

std::vector<double> expected_reward_aggregate(const SuccinctReward& succinct,
                                              std::span<const double> mu) {
  if (static_cast<int>(mu.size()) != succinct.space_size)
    throw std::invalid_argument("mu has wrong length");
  validate_simplex(mu, 1e-9, "aggregate belief");
  std::vector<double> out(succinct.num_actions);
  kernels::matvec(succinct.table.data(), succinct.num_actions,
                  succinct.space_size, mu.data(), out.data());
  return out;
}

std::vector<double> aggregate_distribution(const MixedProfile& beliefs,
                                           int excluded, const GameDims& dims) {
  dims.validate();
  if (excluded < 0 || excluded >= dims.num_agents)
    throw std::invalid_argument("excluded agent index out of range");
  if (static_cast<int>(beliefs.size()) != dims.num_agents)
    throw std::invalid_argument("need one belief vector per agent");
  const int n = dims.num_actions;

  // dist[m] lives on the compositions of m into n parts; adding opponent j
  // convolves with its action distribution.
  std::vector<double> dist{1.0};
  int added = 0;
  for (int j = 0; j < dims.num_agents; ++j) {
    if (j == excluded) continue;
    if (static_cast<int>(beliefs[j].size()) != n)
      throw std::invalid_argument("belief vector has wrong length");
    validate_simplex(beliefs[j], 1e-9, "opponent belief");
    std::vector<double> next(composition_count(added + 1, n), 0.0);
    for (std::size_t r = 0; r < dist.size(); ++r) {
      if (dist[r] == 0.0) continue;
      std::vector<int> counts =
          unrank_composition(static_cast<std::int64_t>(r), n, added);
      for (int b = 0; b < n; ++b) {
        ++counts[b];
        next[rank_count(counts)] += dist[r] * beliefs[j][b];
        --counts[b];
      }
    }
    dist = std::move(next);
    ++added;
  }
  return dist;
}

int best_response(std::span<const double> rewards) {
  if (rewards.empty())
    throw std::invalid_argument("best_response: empty reward vector");
  int best = 0;
  for (std::size_t a = 1; a < rewards.size(); ++a)
    if (rewards[a] > rewards[best]) best = static_cast<int>(a);
  return best;
}

}  // namespace aggplay
