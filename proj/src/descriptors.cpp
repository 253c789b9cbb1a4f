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

#include "cliqueloc/descriptors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "cliqueloc/parallel.hpp"

namespace cliqueloc {
namespace {

std::uint64_t checked_dimension(int num_classes, int steps) {
  if (num_classes < 1) throw std::invalid_argument("num_classes must be >= 1");
  if (steps < 1) throw std::invalid_argument("histogram steps must be >= 1");
  std::uint64_t dim = 1;
  for (int i = 0; i < steps; ++i) {
    if (dim > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(num_classes)) {
      throw std::invalid_argument("histogram dimension C^s overflows 64 bits");
    }
    dim *= static_cast<std::uint64_t>(num_classes);
  }
  return dim;
}

void check_classes(const SemanticGraph& graph, const HistogramParams& params) {
  for (const int c : graph.node_classes) {
    if (c < 0 || c >= params.num_classes) {
      throw std::invalid_argument("class id " + std::to_string(c) + " outside [0, " +
                                  std::to_string(params.num_classes) + ")");
    }
  }
}

// Walks may revisit nodes, so the count of walks ending at a node with a given
// label prefix only depends on (node, prefix): propagate those counts hop by hop.
WalkCounts count_walks(const SemanticGraph& graph, int node, const HistogramParams& params) {
  const auto C = static_cast<std::uint64_t>(params.num_classes);
  std::map<std::pair<int, std::uint64_t>, std::uint64_t> frontier{
      {{node, static_cast<std::uint64_t>(graph.node_classes[node])}, 1}};
  for (int hop = 1; hop < params.steps; ++hop) {
    std::map<std::pair<int, std::uint64_t>, std::uint64_t> next;
    for (const auto& [state, count] : frontier) {
      for (const int w : graph.neighbors[state.first]) {
        next[{w, state.second * C + static_cast<std::uint64_t>(graph.node_classes[w])}] += count;
      }
    }
    frontier = std::move(next);
  }
  std::map<std::uint64_t, std::uint64_t> bins;
  for (const auto& [state, count] : frontier) bins[state.second] += count;
  return {bins.begin(), bins.end()};
}

void extend_paths(const SemanticGraph& graph, int node, int remaining, std::uint64_t code,
                  std::vector<char>& visited, std::uint64_t C,
                  std::map<std::uint64_t, std::uint64_t>& bins) {
  if (remaining == 0) {
    ++bins[code];
    return;
  }
  for (const int w : graph.neighbors[node]) {
    if (visited[w]) continue;
    visited[w] = 1;
    extend_paths(graph, w, remaining - 1, code * C + static_cast<std::uint64_t>(graph.node_classes[w]),
                 visited, C, bins);
    visited[w] = 0;
  }
}

WalkCounts count_simple_paths(const SemanticGraph& graph, int node, const HistogramParams& params) {
  std::map<std::uint64_t, std::uint64_t> bins;
  std::vector<char> visited(graph.size(), 0);
  visited[node] = 1;
  extend_paths(graph, node, params.steps - 1, static_cast<std::uint64_t>(graph.node_classes[node]),
               visited, static_cast<std::uint64_t>(params.num_classes), bins);
  return {bins.begin(), bins.end()};
}

}  // namespace

bool SemanticGraph::adjacent(int i, int j) const {
  const auto& n = neighbors.at(i);
  return std::binary_search(n.begin(), n.end(), j);
}

SemanticGraph build_semantic_graph(std::span<const EllipsoidLandmark> landmarks, double d_adj) {
  if (!(d_adj > 0.0)) throw std::invalid_argument("d_adj must be positive");
  SemanticGraph graph;
  graph.d_adj = d_adj;
  graph.node_classes.reserve(landmarks.size());
  for (const auto& lm : landmarks) graph.node_classes.push_back(lm.class_id);
  graph.neighbors.assign(landmarks.size(), {});
  for (std::size_t i = 0; i < landmarks.size(); ++i) {
    for (std::size_t j = i + 1; j < landmarks.size(); ++j) {
      if ((landmarks[i].position - landmarks[j].position).norm() < d_adj) {
        graph.neighbors[i].push_back(static_cast<int>(j));
        graph.neighbors[j].push_back(static_cast<int>(i));
      }
    }
  }
  for (auto& n : graph.neighbors) std::sort(n.begin(), n.end());
  return graph;
}

std::uint64_t histogram_bin(std::span<const int> classes, int num_classes) {
  std::uint64_t code = 0;
  for (const int c : classes) code = code * static_cast<std::uint64_t>(num_classes) + static_cast<std::uint64_t>(c);
  return code;
}

std::uint64_t SemanticHistogram::dimension() const { return checked_dimension(num_classes, steps); }

double SemanticHistogram::dot(const SemanticHistogram& other) const {
  if (other.num_classes != num_classes || other.steps != steps) {
    throw std::invalid_argument("histograms have different (C, s)");
  }
  double sum = 0.0;
  auto a = bins.begin();
  auto b = other.bins.begin();
  while (a != bins.end() && b != other.bins.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      sum += a->second * b->second;
      ++a;
      ++b;
    }
  }
  return sum;
}

std::vector<double> SemanticHistogram::dense() const {
  std::vector<double> out(dimension(), 0.0);
  for (const auto& [bin, value] : bins) out[bin] = value;
  return out;
}

WalkCounts semantic_walk_counts(const SemanticGraph& graph, int node, const HistogramParams& params) {
  checked_dimension(params.num_classes, params.steps);
  if (node < 0 || static_cast<std::size_t>(node) >= graph.size()) {
    throw std::out_of_range("histogram node index out of range");
  }
  check_classes(graph, params);
  return params.mode == WalkMode::kWalks ? count_walks(graph, node, params)
                                         : count_simple_paths(graph, node, params);
}

SemanticHistogram semantic_histogram(const SemanticGraph& graph, int node,
                                     const HistogramParams& params) {
  const WalkCounts counts = semantic_walk_counts(graph, node, params);
  SemanticHistogram h;
  h.num_classes = params.num_classes;
  h.steps = params.steps;
  double squared = 0.0;
  for (const auto& [bin, count] : counts) squared += static_cast<double>(count) * static_cast<double>(count);
  const double norm = std::sqrt(squared);
  h.bins.reserve(counts.size());
  for (const auto& [bin, count] : counts) h.bins.emplace_back(bin, static_cast<double>(count) / norm);
  return h;
}

std::vector<SemanticHistogram> semantic_histograms(const SemanticGraph& graph,
                                                   const HistogramParams& params) {
  check_classes(graph, params);
  std::vector<SemanticHistogram> out(graph.size());
  parallel_for(graph.size(),
               [&](std::size_t i) { out[i] = semantic_histogram(graph, static_cast<int>(i), params); });
  return out;
}

EmbeddingTable::EmbeddingTable(int dim, std::vector<std::string> ids, std::vector<float> data)
    : dim_(dim), ids_(std::move(ids)), data_(std::move(data)) {
  if (dim_ < 1) throw std::invalid_argument("embedding dimension must be >= 1");
  if (data_.size() != ids_.size() * static_cast<std::size_t>(dim_)) {
    throw std::invalid_argument("embedding payload has " + std::to_string(data_.size()) +
                                " values, expected " + std::to_string(ids_.size()) + " x " +
                                std::to_string(dim_));
  }
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) {
      throw std::invalid_argument("duplicate embedding id '" + ids_[i] + "'");
    }
    const auto r = row(i);
    const double norm = std::sqrt(embedding_dot(r, r));
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kNormTolerance) {
      throw std::invalid_argument("embedding '" + ids_[i] + "' is not unit norm (" +
                                  std::to_string(norm) + ")");
    }
  }
}

EmbeddingTable EmbeddingTable::normalized(int dim, std::vector<std::string> ids,
                                          std::vector<float> data) {
  if (dim >= 1 && data.size() == ids.size() * static_cast<std::size_t>(dim)) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      std::span<float> r(data.data() + i * dim, dim);
      double squared = 0.0;
      for (const float v : r) squared += static_cast<double>(v) * v;
      const double norm = std::sqrt(squared);
      if (norm > 0.0) {
        for (float& v : r) v = static_cast<float>(v / norm);
      }
    }
  }
  return EmbeddingTable(dim, std::move(ids), std::move(data));
}

std::span<const float> EmbeddingTable::row(std::size_t i) const {
  return {data_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
}

std::optional<std::span<const float>> EmbeddingTable::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return row(it->second);
}

double embedding_dot(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw std::invalid_argument("embedding dimensions differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += static_cast<double>(a[i]) * b[i];
  return sum;
}

Similarity hybrid_similarity(const EllipsoidLandmark& map_lm, const EllipsoidLandmark& obs_lm,
                             const SemanticHistogram& sh_map, const SemanticHistogram& sh_obs,
                             const EmbeddingTable& embeddings, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
  Similarity s;
  s.sh = sh_map.dot(sh_obs);
  if (alpha > 0.0) {
    std::optional<std::span<const float>> e_map;
    std::optional<std::span<const float>> e_obs;
    if (map_lm.embedding_id) e_map = embeddings.find(*map_lm.embedding_id);
    if (obs_lm.embedding_id) e_obs = embeddings.find(*obs_lm.embedding_id);
    if (e_map && e_obs) {
      s.clip = embedding_dot(*e_map, *e_obs);
    } else {
      s.missing_embedding = true;
    }
  }
  s.total = alpha * s.clip + (1.0 - alpha) * s.sh;
  return s;
}

}  // namespace cliqueloc
