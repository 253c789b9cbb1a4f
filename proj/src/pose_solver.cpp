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

#include "cliqueloc/pose_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "cliqueloc/errors.hpp"
#include "cliqueloc/parallel.hpp"

namespace cliqueloc {
namespace {

// Second principal spread below this fraction of the first means collinear.
constexpr double kCollinearTolerance = 1e-12;

bool collinear(const Eigen::Matrix3d& scatter) {
  const Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(scatter, Eigen::EigenvaluesOnly)
                                 .eigenvalues();  // ascending
  return !(ev[2] > 0.0) || ev[1] <= kCollinearTolerance * ev[2];
}

}  // namespace

double completeness_weight(const Eigen::Vector3d& obs_axes, const Eigen::Vector3d& map_axes) {
  if ((map_axes.array() <= 0.0).any()) throw std::invalid_argument("map axes must be positive");
  return std::min(1.0, std::sqrt(obs_axes.squaredNorm() / map_axes.squaredNorm()));
}

double pose_objective(std::span<const WeightedPair> pairs, const Pose& pose) {
  double sum = 0.0;
  for (const auto& p : pairs) sum += p.weight() * (p.map_position - pose * p.obs_position).squaredNorm();
  return sum;
}

PoseEstimate solve_weighted_pose(std::span<const WeightedPair> pairs) {
  double total = 0.0;
  std::size_t positive = 0;
  Eigen::Vector3d map_centroid = Eigen::Vector3d::Zero();
  Eigen::Vector3d obs_centroid = Eigen::Vector3d::Zero();
  for (const auto& p : pairs) {
    const double w = p.weight();
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("weights must be finite and >= 0");
    if (w == 0.0) continue;
    ++positive;
    total += w;
    map_centroid += w * p.map_position;
    obs_centroid += w * p.obs_position;
  }
  if (positive < 3) {
    throw InsufficientPairs("pose needs 3 positively weighted pairs, got " + std::to_string(positive));
  }
  map_centroid /= total;
  obs_centroid /= total;

  Eigen::Matrix3d cross = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d map_scatter = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d obs_scatter = Eigen::Matrix3d::Zero();
  for (const auto& p : pairs) {
    const double w = p.weight();
    if (w == 0.0) continue;
    const Eigen::Vector3d m = p.map_position - map_centroid;
    const Eigen::Vector3d o = p.obs_position - obs_centroid;
    cross += w * m * o.transpose();
    map_scatter += w * m * m.transpose();
    obs_scatter += w * o * o.transpose();
  }
  if (collinear(map_scatter) || collinear(obs_scatter)) {
    throw DegenerateGeometry("correspondences are collinear; rotation about the line is unobservable");
  }

  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d correction = Eigen::Matrix3d::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) correction(2, 2) = -1.0;

  PoseEstimate estimate;
  estimate.pose.rotation = svd.matrixU() * correction * svd.matrixV().transpose();
  estimate.pose.translation = map_centroid - estimate.pose.rotation * obs_centroid;
  estimate.weighted_rms_residual = std::sqrt(std::max(0.0, pose_objective(pairs, estimate.pose) / total));
  return estimate;
}

WeightMode parse_weight_mode(std::string_view name) {
  if (name == "none") return WeightMode::kNone;
  if (name == "sim") return WeightMode::kSimilarity;
  if (name == "com") return WeightMode::kCompleteness;
  if (name == "both") return WeightMode::kBoth;
  throw std::invalid_argument("unknown weight mode '" + std::string(name) + "'");
}

std::string_view to_string(WeightMode mode) {
  switch (mode) {
    case WeightMode::kNone:
      return "none";
    case WeightMode::kSimilarity:
      return "sim";
    case WeightMode::kCompleteness:
      return "com";
    case WeightMode::kBoth:
      return "both";
  }
  return "unknown";
}

WeightedCorrespondenceSet make_weighted_set(std::span<const Correspondence> correspondences,
                                            const ObjectMap& map, const ObservationSet& obs,
                                            WeightMode mode) {
  const bool use_sim = mode == WeightMode::kSimilarity || mode == WeightMode::kBoth;
  const bool use_com = mode == WeightMode::kCompleteness || mode == WeightMode::kBoth;
  WeightedCorrespondenceSet set;
  set.reserve(correspondences.size());
  for (const auto& c : correspondences) {
    const auto& m = map.landmarks.at(static_cast<std::size_t>(c.map_index));
    const auto& o = obs.objects.at(static_cast<std::size_t>(c.obs_index));
    WeightedPair p;
    p.map_position = m.position;
    p.obs_position = o.position;
    p.w_sim = use_sim ? std::max(0.0, c.similarity) : 1.0;
    p.w_com = use_com ? completeness_weight(o.axis_lengths, m.axis_lengths) : 1.0;
    set.push_back(p);
  }
  return set;
}

HypothesisEvaluation evaluate_hypotheses(std::span<const CliqueHypothesis> hypotheses,
                                         std::span<const Correspondence> candidates,
                                         const ObjectMap& map, const ObservationSet& obs,
                                         WeightMode mode) {
  std::vector<std::optional<PoseEstimate>> solved(hypotheses.size());
  std::vector<std::string> errors(hypotheses.size());
  parallel_for(hypotheses.size(), [&](std::size_t h) {
    std::vector<Correspondence> members;
    for (const int i : hypotheses[h].members) members.push_back(candidates[static_cast<std::size_t>(i)]);
    try {
      const WeightedCorrespondenceSet set = make_weighted_set(members, map, obs, mode);
      PoseEstimate e = solve_weighted_pose(set);
      e.hypothesis_score = hypotheses[h].score;
      e.inliers = std::move(members);
      solved[h] = std::move(e);
    } catch (const Error& err) {
      errors[h] = err.what();
    }
  });

  HypothesisEvaluation out;
  for (std::size_t h = 0; h < hypotheses.size(); ++h) {
    if (solved[h]) {
      out.estimates.push_back(std::move(*solved[h]));
    } else {
      out.diagnostics.push_back("hypothesis " + std::to_string(h) + " dropped: " + errors[h]);
    }
  }
  if (out.estimates.empty()) {
    throw NoSolvableHypothesis("none of " + std::to_string(hypotheses.size()) +
                               " hypotheses yields a pose");
  }
  return out;
}

}  // namespace cliqueloc
