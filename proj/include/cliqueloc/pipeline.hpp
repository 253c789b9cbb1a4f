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
#include <string>
#include <vector>

#include "cliqueloc/baselines.hpp"
#include "cliqueloc/descriptors.hpp"
#include "cliqueloc/inlier_extraction.hpp"
#include "cliqueloc/matching.hpp"
#include "cliqueloc/pose_solver.hpp"
#include "cliqueloc/scene_model.hpp"

namespace cliqueloc {

struct PipelineConfig {
  double d_adj = kDefaultAdjacencyDistance;
  double d_comp = kDefaultCompatibilityDistance;
  double alpha = kDefaultAlpha;
  int steps = kDefaultHistogramSteps;
  /// 0 infers max(class_id) + 1 over map and observation.
  int num_classes = 0;
  WalkMode walk_mode = WalkMode::kWalks;
  MatchingOptions matching;
  Extractor extractor = Extractor::kClique;
  std::size_t top_n = 5;
  std::size_t max_cliques = kDefaultMaxCliques;
  WeightMode weights = WeightMode::kBoth;
  /// Iteration budget and threshold for RANSAC/PROSAC; the seed is derived from `seed`.
  SacConfig sac;
  std::uint64_t seed = 0;
};

struct LocalizationResult {
  /// Ranked best first. Clique extraction yields up to top_n; RANSAC/PROSAC one.
  std::vector<PoseEstimate> estimates;
  std::vector<Correspondence> candidates;
  /// Clique hypotheses behind `estimates`, before unsolvable ones were dropped.
  std::vector<CliqueHypothesis> hypotheses;
  std::size_t num_cliques = 0;
  bool clique_limit_exceeded = false;
  std::size_t missing_embedding_pairs = 0;
  std::vector<std::string> diagnostics;
  /// Wall time of the four pipeline stages.
  double latency_seconds = 0.0;
};

/// Runs descriptors, initial matching, inlier extraction and pose estimation.
///
/// Throws one of the no-solution errors when no pose can be produced, and
/// MissingEmbedding when alpha = 1 and some landmark has
/// no embedding (for alpha < 1 the embedding term is dropped and counted).
LocalizationResult localize(const ObjectMap& map, const ObservationSet& obs,
                            const EmbeddingTable& embeddings, const PipelineConfig& config);

/// Descriptor stage alone: semantic histograms on both sides and the hybrid
/// similarity of every (observation, landmark) pair.
SimilarityMatrix compute_similarity(const ObjectMap& map, const ObservationSet& obs,
                                    const EmbeddingTable& embeddings, const PipelineConfig& config);

/// Inlier extraction and pose estimation on a given candidate list. Fills
/// everything in the result except the similarity statistics and latency.
LocalizationResult localize_candidates(std::vector<Correspondence> candidates, const ObjectMap& map,
                                       const ObservationSet& obs, const PipelineConfig& config);

/// Sub-seed handed to RANSAC/PROSAC for a pipeline seed.
std::uint64_t sac_seed(std::uint64_t seed);

}  // namespace cliqueloc
