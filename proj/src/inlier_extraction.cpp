// Copyright 2026 The cliqueloc Authors
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

#include "cliqueloc/inlier_extraction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cliqueloc/errors.hpp"
#include "cliqueloc/parallel.hpp"

namespace cliqueloc {
namespace {

constexpr std::size_t npos = Bitset::npos;

class BronKerbosch {
 public:
  BronKerbosch(const CompatibilityGraph& graph, std::size_t limit)
      : graph_(graph), limit_(limit), scratch_(graph.size()) {}

  void run(std::vector<int>& r, Bitset p, Bitset x) {
    if (cliques_.size() >= limit_) return;
    if (p.none()) {
      if (x.none()) cliques_.push_back(r);
      return;
    }
    const std::size_t u = pivot(p, x);
    Bitset todo = p - graph_.neighbors(u);
    for (std::size_t v = todo.find_first(); v != npos; v = todo.find_next(v)) {
      r.push_back(static_cast<int>(v));
      run(r, p & graph_.neighbors(v), x & graph_.neighbors(v));
      r.pop_back();
      if (cliques_.size() >= limit_) return;
      p.reset(v);
      x.set(v);
    }
  }

  // Vertex of P u X with the most neighbors in P, lowest index on ties.
  std::size_t pivot(const Bitset& p, const Bitset& x) {
    std::size_t best = npos;
    std::size_t best_count = 0;
    auto consider = [&](const Bitset& set) {
      for (std::size_t u = set.find_first(); u != npos; u = set.find_next(u)) {
        scratch_ = p;
        scratch_ &= graph_.neighbors(u);
        const std::size_t c = scratch_.count();
        if (best == npos || c > best_count || (c == best_count && u < best)) {
          best = u;
          best_count = c;
        }
      }
    };
    consider(p);
    consider(x);
    return best;
  }

  std::vector<std::vector<int>>& cliques() { return cliques_; }

 private:
  const CompatibilityGraph& graph_;
  std::size_t limit_;
  Bitset scratch_;
  std::vector<std::vector<int>> cliques_;
};

struct Branch {
  int vertex;
  Bitset p;
  Bitset x;
};

}  // namespace

CompatibilityGraph::CompatibilityGraph(std::size_t n, double d_comp)
    : rows_(n, Bitset(n)), d_comp_(d_comp) {}

std::size_t CompatibilityGraph::num_edges() const {
  std::size_t twice = 0;
  for (const auto& r : rows_) twice += r.count();
  return twice / 2;
}

void CompatibilityGraph::connect(std::size_t i, std::size_t j) {
  if (i == j) return;
  rows_.at(i).set(j);
  rows_.at(j).set(i);
}

CompatibilityGraph build_compatibility(std::span<const Correspondence> candidates,
                                       const ObjectMap& map, const ObservationSet& obs,
                                       double d_comp) {
  if (!(d_comp > 0.0)) throw std::invalid_argument("d_comp must be positive");
  for (const auto& c : candidates) {
    if (c.map_index < 0 || static_cast<std::size_t>(c.map_index) >= map.size() || c.obs_index < 0 ||
        static_cast<std::size_t>(c.obs_index) >= obs.size()) {
      throw std::out_of_range("correspondence index out of range");
    }
  }
  const std::size_t n = candidates.size();
  std::vector<Bitset> rows(n, Bitset(n));
  parallel_for(n, [&](std::size_t i) {
    const auto& ci = candidates[i];
    const Eigen::Vector3d& mi = map.landmarks[ci.map_index].position;
    const Eigen::Vector3d& oi = obs.objects[ci.obs_index].position;
    for (std::size_t j = 0; j < n; ++j) {
      const auto& cj = candidates[j];
      if (j == i || cj.map_index == ci.map_index || cj.obs_index == ci.obs_index) continue;
      const double d_map = (mi - map.landmarks[cj.map_index].position).norm();
      const double d_obs = (oi - obs.objects[cj.obs_index].position).norm();
      if (std::abs(d_map - d_obs) < d_comp) rows[i].set(j);
    }
  });
  CompatibilityGraph graph(n, d_comp);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = rows[i].find_first(); j != npos; j = rows[i].find_next(j)) {
      if (j > i) graph.connect(i, j);
    }
  }
  return graph;
}

bool ranks_before(const CliqueHypothesis& a, const CliqueHypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
  return a.members < b.members;
}

CliqueEnumeration enumerate_maximal_cliques(const CompatibilityGraph& graph,
                                            std::span<const double> node_scores,
                                            std::size_t max_cliques) {
  const std::size_t n = graph.size();
  if (node_scores.size() != n) throw std::invalid_argument("one score per graph node is required");
  CliqueEnumeration result;
  if (n == 0 || max_cliques == 0) {
    result.limit_exceeded = n > 0;
    return result;
  }

  // Unroll the top level of the recursion sequentially so every branch
  // starts from exactly the sets the serial algorithm would use.
  Bitset p(n);
  p.set();
  Bitset x(n);
  BronKerbosch top(graph, max_cliques + 1);
  const std::size_t u = top.pivot(p, x);
  const Bitset todo = p - graph.neighbors(u);
  std::vector<Branch> branches;
  for (std::size_t v = todo.find_first(); v != npos; v = todo.find_next(v)) {
    branches.push_back({static_cast<int>(v), p & graph.neighbors(v), x & graph.neighbors(v)});
    p.reset(v);
    x.set(v);
  }

  // Each branch may stop one past the limit; that is enough to detect truncation.
  std::vector<std::vector<std::vector<int>>> found(branches.size());
  parallel_for(branches.size(), [&](std::size_t b) {
    BronKerbosch worker(graph, max_cliques + 1);
    std::vector<int> r{branches[b].vertex};
    worker.run(r, branches[b].p, branches[b].x);
    found[b] = std::move(worker.cliques());
  });

  for (auto& branch : found) {
    for (auto& members : branch) {
      if (result.cliques.size() == max_cliques) {
        result.limit_exceeded = true;
        break;
      }
      std::sort(members.begin(), members.end());
      double score = 0.0;
      for (const int m : members) score += node_scores[static_cast<std::size_t>(m)];
      result.cliques.push_back({std::move(members), score});
    }
    if (result.limit_exceeded) break;
  }
  std::sort(result.cliques.begin(), result.cliques.end(), ranks_before);
  return result;
}

CliqueEnumeration enumerate_maximal_cliques(const CompatibilityGraph& graph,
                                            std::span<const Correspondence> candidates,
                                            std::size_t max_cliques) {
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) scores.push_back(c.similarity);
  return enumerate_maximal_cliques(graph, scores, max_cliques);
}

std::vector<CliqueHypothesis> top_n_hypotheses(std::span<const CliqueHypothesis> cliques,
                                               std::size_t n, std::size_t min_size) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  std::vector<CliqueHypothesis> out;
  for (const auto& c : cliques) {
    if (out.size() == n) break;
    if (c.members.size() >= min_size) out.push_back(c);
  }
  if (out.empty()) {
    throw EmptyHypothesisSet("no maximal clique with at least " + std::to_string(min_size) +
                             " correspondences");
  }
  return out;
}

}  // namespace cliqueloc
