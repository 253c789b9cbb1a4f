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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "cliqueloc/matching.hpp"
#include "cliqueloc/scene_model.hpp"

namespace cliqueloc {

inline constexpr double kDefaultCompatibilityDistance = 0.3;  // meters
inline constexpr std::size_t kDefaultMaxCliques = 10000;
inline constexpr std::size_t kMinPoseCliqueSize = 3;

using Bitset = boost::dynamic_bitset<std::uint64_t>;

/// Undirected graph over correspondence hypotheses; an edge means the two
/// hypotheses agree on inter-landmark distance.
class CompatibilityGraph {
 public:
  CompatibilityGraph() = default;
  explicit CompatibilityGraph(std::size_t n, double d_comp = kDefaultCompatibilityDistance);

  std::size_t size() const { return rows_.size(); }
  double d_comp() const { return d_comp_; }
  bool adjacent(std::size_t i, std::size_t j) const { return rows_[i].test(j); }
  const Bitset& neighbors(std::size_t i) const { return rows_[i]; }
  std::size_t num_edges() const;

  /// Adds the undirected edge (i, j); self loops are ignored.
  void connect(std::size_t i, std::size_t j);

 private:
  std::vector<Bitset> rows_;
  double d_comp_ = kDefaultCompatibilityDistance;
};

/// C_ij = 1 iff i != j, the two candidates share neither a map nor an
/// observation index, and | ||t_m - t_m'|| - ||t_n - t_n'|| | < d_comp.
CompatibilityGraph build_compatibility(std::span<const Correspondence> candidates,
                                       const ObjectMap& map, const ObservationSet& obs,
                                       double d_comp);

struct CliqueHypothesis {
  /// Candidate indices, ascending.
  std::vector<int> members;
  /// Sum of member similarities.
  double score = 0.0;

  bool operator==(const CliqueHypothesis&) const = default;
};

struct CliqueEnumeration {
  std::vector<CliqueHypothesis> cliques;
  /// True when enumeration stopped at the limit before listing every clique.
  bool limit_exceeded = false;
};

/// Ranking used for clique hypotheses: score descending, then more members,
/// then lexicographically smaller member list.
bool ranks_before(const CliqueHypothesis& a, const CliqueHypothesis& b);

/// Lists the maximal cliques of `graph` (Bron-Kerbosch with Tomita pivoting,
/// vertices visited in index order), scores each by the sum of `node_scores`
/// over its members and returns them ranked. At most `max_cliques` cliques
/// are produced, always the first ones in sequential visiting order, so the
/// output is independent of the thread count.
CliqueEnumeration enumerate_maximal_cliques(const CompatibilityGraph& graph,
                                            std::span<const double> node_scores,
                                            std::size_t max_cliques = kDefaultMaxCliques);

/// Scores nodes by candidate similarity.
CliqueEnumeration enumerate_maximal_cliques(const CompatibilityGraph& graph,
                                            std::span<const Correspondence> candidates,
                                            std::size_t max_cliques = kDefaultMaxCliques);

/// The first `n` ranked cliques having at least `min_size` members.
/// Throws EmptyHypothesisSet if there is none.
std::vector<CliqueHypothesis> top_n_hypotheses(std::span<const CliqueHypothesis> cliques,
                                               std::size_t n,
                                               std::size_t min_size = kMinPoseCliqueSize);

}  // namespace cliqueloc
