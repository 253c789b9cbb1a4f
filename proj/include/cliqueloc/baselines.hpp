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
#include <span>
#include <string_view>
#include <vector>

#include "cliqueloc/matching.hpp"
#include "cliqueloc/pose_solver.hpp"
#include "cliqueloc/scene_model.hpp"

namespace cliqueloc {

struct SacConfig {
  int max_iterations = 1000;
  /// Position residual (meters) below which a candidate supports a pose.
  double inlier_threshold = 0.3;
  int min_sample = 3;
  std::uint64_t rng_seed = 0;
  /// Stop once an all-inlier sample has been drawn with this probability;
  /// 1 disables early termination.
  double confidence = 0.99;
};

struct SacResult {
  /// Candidate indices supporting the best hypothesis, ascending.
  std::vector<int> inliers;
  /// Unweighted refit on the inliers; its score is their similarity sum.
  PoseEstimate estimate;
  int iterations = 0;
  /// Iteration (0-based) at which the returned consensus was first reached.
  int best_iteration = -1;
};

/// Hypothesize-and-verify with uniform minimal samples. Samples reusing a
/// map or observation index are redrawn. Throws NoConsensus when no
/// hypothesis gathers `min_sample` inliers.
SacResult ransac_extract(std::span<const Correspondence> candidates, const ObjectMap& map,
                         const ObservationSet& obs, const SacConfig& config);

/// PROSAC: like ransac_extract, but samples are drawn from a pool of the most
/// similar candidates that grows on the standard PROSAC schedule. Candidates
/// need not be pre-sorted; they are ranked by similarity (stable).
SacResult prosac_extract(std::span<const Correspondence> candidates, const ObjectMap& map,
                         const ObservationSet& obs, const SacConfig& config);

enum class Extractor { kClique, kRansac, kProsac };

Extractor parse_extractor(std::string_view name);
std::string_view to_string(Extractor extractor);

}  // namespace cliqueloc
