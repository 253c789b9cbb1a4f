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
#include <vector>

#include <Eigen/Core>

namespace cliqueloc {

/// Tolerance on |R^T R - I| and |det R - 1| for a matrix to count as a rotation.
inline constexpr double kRotationTolerance = 1e-9;

/// An object landmark approximated by an ellipsoid.
///
/// `axis_lengths` are HALF-axis lengths: a unit cube fits an ellipsoid with
/// axis lengths (0.5, 0.5, 0.5). The completeness weight only depends on the
/// ratio of observed to mapped axis lengths, so the convention does not leak
/// into pose estimation.
///
/// The ellipsoid pose maps body coordinates into the enclosing frame:
/// `p_frame = orientation * p_body + position`.
struct EllipsoidLandmark {
  std::int64_t id = 0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Matrix3d orientation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d axis_lengths = Eigen::Vector3d::Ones();
  int class_id = 0;
  std::optional<std::string> text_label;
  /// Key of this landmark's row in an EmbeddingTable.
  std::optional<std::string> embedding_id;
  /// Observations only: id of the map landmark this object really is.
  std::optional<std::int64_t> gt_map_id;
};

/// Rigid transform taking observation (camera) coordinates into the map frame:
/// `p_map = rotation * p_obs + translation`.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const { return rotation * p + translation; }
  Pose operator*(const Pose& rhs) const {
    return {rotation * rhs.rotation, rotation * rhs.translation + translation};
  }
  Pose inverse() const { return {rotation.transpose(), -(rotation.transpose() * translation)}; }
};

struct ObjectMap {
  std::string frame_id = "map";
  std::vector<EllipsoidLandmark> landmarks;

  std::size_t size() const { return landmarks.size(); }
  std::optional<std::size_t> index_of(std::int64_t id) const;
};

/// Objects seen in one frame, expressed in the camera frame.
struct ObservationSet {
  std::string frame_id = "camera";
  std::vector<EllipsoidLandmark> objects;
  std::optional<Pose> source_pose_gt;

  std::size_t size() const { return objects.size(); }
};

bool is_rotation(const Eigen::Matrix3d& r, double tolerance = kRotationTolerance);

/// Throws std::invalid_argument when the landmark violates its invariants
/// (non-rotation orientation, non-positive or non-finite axes).
void validate(const EllipsoidLandmark& landmark);

/// Fits an oriented bounding ellipsoid to a point cloud by PCA.
///
/// Position is the centroid; orientation columns are the covariance
/// eigenvectors by descending eigenvalue (each column's dominant component
/// made positive, the last column flipped if needed for det = +1); axis
/// lengths are the half-extents of the points projected onto those axes.
/// Within a group of (nearly) equal eigenvalues the covariance does not fix
/// the axes; there the frame of the smallest bounding box is taken, and the
/// world axes break any remaining tie.
///
/// Throws DegenerateCloud for fewer than 4 points or coplanar/collinear clouds.
EllipsoidLandmark fit_ellipsoid(std::span<const Eigen::Vector3d> points);

}  // namespace cliqueloc
