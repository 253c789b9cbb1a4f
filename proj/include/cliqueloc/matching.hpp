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
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cliqueloc/descriptors.hpp"
#include "cliqueloc/scene_model.hpp"

namespace cliqueloc {

/// Hypothesis that observation `obs_index` is map landmark `map_index`.
struct Correspondence {
  int map_index = 0;
  int obs_index = 0;
  double similarity = 0.0;

  bool operator==(const Correspondence&) const = default;
};

/// Rows are observations, columns map landmarks.
struct SimilarityMatrix {
  Eigen::MatrixXd values;
  /// Pairs whose embedding term was dropped because an embedding was missing.
  std::size_t missing_embedding_pairs = 0;

  int num_observations() const { return static_cast<int>(values.rows()); }
  int num_landmarks() const { return static_cast<int>(values.cols()); }
};

/// Hybrid similarity of every (observation, landmark) pair, rows in parallel.
SimilarityMatrix build_similarity_matrix(const ObjectMap& map, const ObservationSet& obs,
                                         std::span<const SemanticHistogram> map_histograms,
                                         std::span<const SemanticHistogram> obs_histograms,
                                         const EmbeddingTable& embeddings, double alpha);

enum class MatchingStrategy { kOneToOne, kKnn, kAdaptive };

MatchingStrategy parse_matching_strategy(std::string_view name);
std::string_view to_string(MatchingStrategy strategy);

inline constexpr int kDefaultKnn = 3;

/// Mutual best matches; argmax ties go to the lowest index.
std::vector<Correspondence> match_one_to_one(const SimilarityMatrix& s);

/// The min(k, N_m) most similar landmarks of every observation.
std::vector<Correspondence> match_knn(const SimilarityMatrix& s, int k = kDefaultKnn);

/// Per observation: sort similarities descending, keep the top `top_m`, and
/// cut at the largest gap between consecutive values (earliest gap on ties).
/// The candidates above the gap are returned, so a row of equal values
/// yields only its first entry.
std::vector<Correspondence> match_adaptive(const SimilarityMatrix& s, int top_m);

/// A quarter of the landmarks, rounded up, and never below 2.
int default_top_m(int num_landmarks);

struct MatchingOptions {
  MatchingStrategy strategy = MatchingStrategy::kAdaptive;
  int k = kDefaultKnn;
  /// 0 selects default_top_m().
  int top_m = 0;
};

std::vector<Correspondence> match(const SimilarityMatrix& s, const MatchingOptions& options);

}  // namespace cliqueloc
