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

#include "cliqueloc/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "cliqueloc/errors.hpp"
#include "cliqueloc/random.hpp"

namespace cliqueloc {
namespace {

int infer_num_classes(const ObjectMap& map, const ObservationSet& obs) {
  int top = -1;
  for (const auto& lm : map.landmarks) top = std::max(top, lm.class_id);
  for (const auto& lm : obs.objects) top = std::max(top, lm.class_id);
  return top + 1;
}

}  // namespace

std::uint64_t sac_seed(std::uint64_t seed) { return sub_seed(seed, "sac"); }

SimilarityMatrix compute_similarity(const ObjectMap& map, const ObservationSet& obs,
                                    const EmbeddingTable& embeddings, const PipelineConfig& config) {
  HistogramParams params;
  params.steps = config.steps;
  params.num_classes = config.num_classes > 0 ? config.num_classes : infer_num_classes(map, obs);
  params.mode = config.walk_mode;
  const auto map_sh = semantic_histograms(build_semantic_graph(map.landmarks, config.d_adj), params);
  const auto obs_sh = semantic_histograms(build_semantic_graph(obs.objects, config.d_adj), params);
  return build_similarity_matrix(map, obs, map_sh, obs_sh, embeddings, config.alpha);
}

LocalizationResult localize_candidates(std::vector<Correspondence> candidates, const ObjectMap& map,
                                       const ObservationSet& obs, const PipelineConfig& config) {
  LocalizationResult result;
  result.candidates = std::move(candidates);
  if (config.extractor == Extractor::kClique) {
    const CompatibilityGraph graph = build_compatibility(result.candidates, map, obs, config.d_comp);
    const CliqueEnumeration cliques =
        enumerate_maximal_cliques(graph, result.candidates, config.max_cliques);
    result.num_cliques = cliques.cliques.size();
    result.clique_limit_exceeded = cliques.limit_exceeded;
    if (cliques.limit_exceeded) {
      result.diagnostics.push_back("clique enumeration truncated at " +
                                   std::to_string(config.max_cliques));
    }
    result.hypotheses = top_n_hypotheses(cliques.cliques, config.top_n);
    HypothesisEvaluation evaluation =
        evaluate_hypotheses(result.hypotheses, result.candidates, map, obs, config.weights);
    result.estimates = std::move(evaluation.estimates);
    result.diagnostics.insert(result.diagnostics.end(), evaluation.diagnostics.begin(),
                              evaluation.diagnostics.end());
  } else {
    SacConfig sac = config.sac;
    sac.rng_seed = sac_seed(config.seed);
    const SacResult sac_result = config.extractor == Extractor::kRansac
                                     ? ransac_extract(result.candidates, map, obs, sac)
                                     : prosac_extract(result.candidates, map, obs, sac);
    result.estimates.push_back(sac_result.estimate);
  }
  return result;
}

LocalizationResult localize(const ObjectMap& map, const ObservationSet& obs,
                            const EmbeddingTable& embeddings, const PipelineConfig& config) {
  if (map.landmarks.empty()) throw std::invalid_argument("map has no landmarks");
  if (obs.objects.empty()) throw std::invalid_argument("observation has no objects");
  const auto start = std::chrono::steady_clock::now();

  const SimilarityMatrix similarity = compute_similarity(map, obs, embeddings, config);
  std::vector<std::string> notes;
  if (similarity.missing_embedding_pairs > 0) {
    if (config.alpha >= 1.0) {
      throw MissingEmbedding(std::to_string(similarity.missing_embedding_pairs) +
                             " landmark pairs lack embeddings and alpha = 1");
    }
    notes.push_back(std::to_string(similarity.missing_embedding_pairs) +
                    " pairs scored without the embedding term");
  }

  LocalizationResult result = localize_candidates(match(similarity, config.matching), map, obs, config);
  result.missing_embedding_pairs = similarity.missing_embedding_pairs;
  result.diagnostics.insert(result.diagnostics.begin(), notes.begin(), notes.end());
  result.latency_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace cliqueloc
