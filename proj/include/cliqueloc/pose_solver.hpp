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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cliqueloc/inlier_extraction.hpp"
#include "cliqueloc/matching.hpp"
#include "cliqueloc/scene_model.hpp"

namespace cliqueloc {

struct WeightedPair {
  Eigen::Vector3d map_position = Eigen::Vector3d::Zero();
  Eigen::Vector3d obs_position = Eigen::Vector3d::Zero();
  double w_sim = 1.0;
  double w_com = 1.0;

  double weight() const { return w_sim * w_com; }
};

using WeightedCorrespondenceSet = std::vector<WeightedPair>;

struct PoseEstimate {
  Pose pose;
  /// sqrt(sum w r^2 / sum w) over the pairs used.
  double weighted_rms_residual = 0.0;
  double hypothesis_score = 0.0;
  /// Correspondences the pose was computed from.
  std::vector<Correspondence> inliers;
};

/// min(1, |obs_axes| / |map_axes|): how much of the mapped object was observed.
double completeness_weight(const Eigen::Vector3d& obs_axes, const Eigen::Vector3d& map_axes);

/// Sum of w_k ||t_map,k - (R t_obs,k + t)||^2.
double pose_objective(std::span<const WeightedPair> pairs, const Pose& pose);

/// Closed-form minimizer of pose_objective over SE(3): weighted centroids,
/// SVD of the weighted cross-covariance projected onto SO(3).
///
/// Throws InsufficientPairs with fewer than 3 positively weighted pairs and
/// DegenerateGeometry when either point set is collinear.
PoseEstimate solve_weighted_pose(std::span<const WeightedPair> pairs);

enum class WeightMode { kNone, kSimilarity, kCompleteness, kBoth };

WeightMode parse_weight_mode(std::string_view name);
std::string_view to_string(WeightMode mode);

/// Positions and weights for a correspondence list. w_sim is the similarity
/// clamped at 0; modes that ignore a factor set it to 1.
WeightedCorrespondenceSet make_weighted_set(std::span<const Correspondence> correspondences,
                                            const ObjectMap& map, const ObservationSet& obs,
                                            WeightMode mode);

struct HypothesisEvaluation {
  /// One estimate per solvable hypothesis, in hypothesis order.
  std::vector<PoseEstimate> estimates;
  /// One line per dropped hypothesis.
  std::vector<std::string> diagnostics;
};

/// Solves a pose per clique hypothesis. Throws NoSolvableHypothesis when none succeeds.
HypothesisEvaluation evaluate_hypotheses(std::span<const CliqueHypothesis> hypotheses,
                                         std::span<const Correspondence> candidates,
                                         const ObjectMap& map, const ObservationSet& obs,
                                         WeightMode mode);

}  // namespace cliqueloc
