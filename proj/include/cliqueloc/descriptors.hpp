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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cliqueloc/scene_model.hpp"

namespace cliqueloc {

inline constexpr double kDefaultAdjacencyDistance = 0.8;  // meters
inline constexpr int kDefaultHistogramSteps = 3;
inline constexpr double kDefaultAlpha = 0.7;

/// Landmarks as nodes, an edge wherever two landmarks are closer than `d_adj`.
struct SemanticGraph {
  std::vector<int> node_classes;
  /// Sorted neighbor lists; symmetric, no self loops.
  std::vector<std::vector<int>> neighbors;
  double d_adj = kDefaultAdjacencyDistance;

  std::size_t size() const { return node_classes.size(); }
  bool adjacent(int i, int j) const;
};

/// Edge (i, j) iff ||t_i - t_j|| < d_adj (strict). Requires d_adj > 0.
SemanticGraph build_semantic_graph(std::span<const EllipsoidLandmark> landmarks, double d_adj);

enum class WalkMode {
  kWalks,        ///< nodes may repeat, including immediate backtracking
  kSimplePaths,  ///< every node at most once (ablation only)
};

struct HistogramParams {
  /// Number of nodes in each walk, the start node included.
  int steps = kDefaultHistogramSteps;
  /// Class ids must lie in [0, num_classes).
  int num_classes = 1;
  WalkMode mode = WalkMode::kWalks;
};

/// Bin index of a class sequence: base-C digits, first node most significant.
std::uint64_t histogram_bin(std::span<const int> classes, int num_classes);

/// Raw walk counts per bin, sorted by bin, zero bins omitted.
using WalkCounts = std::vector<std::pair<std::uint64_t, std::uint64_t>>;

/// Sparse, L2-normalized C^s histogram of class sequences along every walk
/// of `steps` nodes leaving one node. All-zero when no such walk exists.
struct SemanticHistogram {
  int num_classes = 1;
  int steps = 1;
  /// (bin, value) pairs sorted by bin; zero bins omitted.
  std::vector<std::pair<std::uint64_t, double>> bins;

  std::uint64_t dimension() const;
  bool is_zero() const { return bins.empty(); }
  double dot(const SemanticHistogram& other) const;
  std::vector<double> dense() const;
};

WalkCounts semantic_walk_counts(const SemanticGraph& graph, int node, const HistogramParams& params);
SemanticHistogram semantic_histogram(const SemanticGraph& graph, int node,
                                     const HistogramParams& params);
/// Histograms for every node, computed in parallel.
std::vector<SemanticHistogram> semantic_histograms(const SemanticGraph& graph,
                                                   const HistogramParams& params);

/// Unit-norm embedding vectors keyed by string id, stored as float32 rows.
class EmbeddingTable {
 public:
  static constexpr double kNormTolerance = 1e-6;

  EmbeddingTable() = default;
  /// `data` holds ids.size() rows of `dim` values. Throws std::invalid_argument
  /// on shape mismatch, duplicate ids or rows that are not unit norm.
  EmbeddingTable(int dim, std::vector<std::string> ids, std::vector<float> data);

  /// Same as the constructor but L2-normalizes each row first.
  static EmbeddingTable normalized(int dim, std::vector<std::string> ids, std::vector<float> data);

  int dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const std::vector<std::string>& ids() const { return ids_; }
  std::span<const float> row(std::size_t i) const;
  const std::vector<float>& data() const { return data_; }
  std::optional<std::span<const float>> find(std::string_view id) const;

 private:
  int dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Double-precision dot product of two float rows.
double embedding_dot(std::span<const float> a, std::span<const float> b);

struct Similarity {
  double total = 0.0;
  double clip = 0.0;
  double sh = 0.0;
  /// Set when alpha > 0 and either landmark lacks an embedding; `clip` is then 0.
  bool missing_embedding = false;
};

/// s_total = alpha * (e_map . e_obs) + (1 - alpha) * (sh_map . sh_obs).
Similarity hybrid_similarity(const EllipsoidLandmark& map_lm, const EllipsoidLandmark& obs_lm,
                             const SemanticHistogram& sh_map, const SemanticHistogram& sh_obs,
                             const EmbeddingTable& embeddings, double alpha);

}  // namespace cliqueloc
