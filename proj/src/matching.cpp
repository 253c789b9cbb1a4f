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

#include "cliqueloc/matching.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cliqueloc/parallel.hpp"

namespace cliqueloc {
namespace {

// Column indices of row `n` by descending similarity, lowest index first on ties.
std::vector<int> ranked_columns(const SimilarityMatrix& s, int n) {
  std::vector<int> cols(s.num_landmarks());
  std::iota(cols.begin(), cols.end(), 0);
  std::stable_sort(cols.begin(), cols.end(),
                   [&](int a, int b) { return s.values(n, a) > s.values(n, b); });
  return cols;
}

int row_argmax(const SimilarityMatrix& s, int n) {
  int best = 0;
  for (int m = 1; m < s.num_landmarks(); ++m) {
    if (s.values(n, m) > s.values(n, best)) best = m;
  }
  return best;
}

int col_argmax(const SimilarityMatrix& s, int m) {
  int best = 0;
  for (int n = 1; n < s.num_observations(); ++n) {
    if (s.values(n, m) > s.values(best, m)) best = n;
  }
  return best;
}

template <typename PerRow>
std::vector<Correspondence> collect_rows(const SimilarityMatrix& s, PerRow per_row) {
  std::vector<std::vector<Correspondence>> rows(s.num_observations());
  parallel_for(rows.size(), [&](std::size_t n) { rows[n] = per_row(static_cast<int>(n)); });
  std::vector<Correspondence> out;
  for (auto& r : rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

}  // namespace

SimilarityMatrix build_similarity_matrix(const ObjectMap& map, const ObservationSet& obs,
                                         std::span<const SemanticHistogram> map_histograms,
                                         std::span<const SemanticHistogram> obs_histograms,
                                         const EmbeddingTable& embeddings, double alpha) {
  if (map_histograms.size() != map.size() || obs_histograms.size() != obs.size()) {
    throw std::invalid_argument("one histogram per landmark is required");
  }
  SimilarityMatrix s;
  s.values.resize(static_cast<Eigen::Index>(obs.size()), static_cast<Eigen::Index>(map.size()));
  std::vector<std::size_t> missing(obs.size(), 0);
  parallel_for(obs.size(), [&](std::size_t n) {
    for (std::size_t m = 0; m < map.size(); ++m) {
      const Similarity sim = hybrid_similarity(map.landmarks[m], obs.objects[n], map_histograms[m],
                                               obs_histograms[n], embeddings, alpha);
      s.values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) = sim.total;
      if (sim.missing_embedding) ++missing[n];
    }
  });
  s.missing_embedding_pairs = std::accumulate(missing.begin(), missing.end(), std::size_t{0});
  return s;
}

MatchingStrategy parse_matching_strategy(std::string_view name) {
  if (name == "one_to_one" || name == "1-to-1") return MatchingStrategy::kOneToOne;
  if (name == "knn") return MatchingStrategy::kKnn;
  if (name == "adaptive") return MatchingStrategy::kAdaptive;
  throw std::invalid_argument("unknown matching strategy '" + std::string(name) + "'");
}

std::string_view to_string(MatchingStrategy strategy) {
  switch (strategy) {
    case MatchingStrategy::kOneToOne:
      return "one_to_one";
    case MatchingStrategy::kKnn:
      return "knn";
    case MatchingStrategy::kAdaptive:
      return "adaptive";
  }
  return "unknown";
}

std::vector<Correspondence> match_one_to_one(const SimilarityMatrix& s) {
  if (s.num_landmarks() == 0) return {};
  return collect_rows(s, [&](int n) -> std::vector<Correspondence> {
    const int m = row_argmax(s, n);
    if (col_argmax(s, m) != n) return {};
    return {{m, n, s.values(n, m)}};
  });
}

std::vector<Correspondence> match_knn(const SimilarityMatrix& s, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  return collect_rows(s, [&](int n) {
    const std::vector<int> cols = ranked_columns(s, n);
    const auto keep = std::min<std::size_t>(static_cast<std::size_t>(k), cols.size());
    std::vector<Correspondence> row;
    for (std::size_t i = 0; i < keep; ++i) row.push_back({cols[i], n, s.values(n, cols[i])});
    return row;
  });
}

std::vector<Correspondence> match_adaptive(const SimilarityMatrix& s, int top_m) {
  if (top_m < 2) throw std::invalid_argument("top_m must be >= 2");
  return collect_rows(s, [&](int n) {
    std::vector<int> cols = ranked_columns(s, n);
    cols.resize(std::min<std::size_t>(static_cast<std::size_t>(top_m), cols.size()));
    std::vector<Correspondence> row;
    if (cols.empty()) return row;
    // Index of the last candidate kept: the upper member of the widest gap.
    std::size_t cut = 0;
    double widest = -1.0;
    for (std::size_t i = 0; i + 1 < cols.size(); ++i) {
      const double gap = s.values(n, cols[i]) - s.values(n, cols[i + 1]);
      if (gap > widest) {
        widest = gap;
        cut = i;
      }
    }
    for (std::size_t i = 0; i <= cut; ++i) row.push_back({cols[i], n, s.values(n, cols[i])});
    return row;
  });
}

int default_top_m(int num_landmarks) { return std::max(2, (num_landmarks + 3) / 4); }

std::vector<Correspondence> match(const SimilarityMatrix& s, const MatchingOptions& options) {
  switch (options.strategy) {
    case MatchingStrategy::kOneToOne:
      return match_one_to_one(s);
    case MatchingStrategy::kKnn:
      return match_knn(s, options.k);
    case MatchingStrategy::kAdaptive:
      return match_adaptive(s, options.top_m > 0 ? options.top_m : default_top_m(s.num_landmarks()));
  }
  throw std::invalid_argument("unknown matching strategy");
}

}  // namespace cliqueloc
