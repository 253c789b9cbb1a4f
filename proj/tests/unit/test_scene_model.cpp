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

#include <algorithm>
#include <array>
#include <vector>

#include <gtest/gtest.h>
#include <Eigen/Geometry>

#include "cliqueloc/errors.hpp"
#include "cliqueloc/random.hpp"
#include "cliqueloc/scene_model.hpp"

using namespace cliqueloc;

namespace {

std::vector<Eigen::Vector3d> cube_corners(double side = 1.0) {
  std::vector<Eigen::Vector3d> pts;
  for (int x : {-1, 1})
    for (int y : {-1, 1})
      for (int z : {-1, 1}) pts.emplace_back(0.5 * side * x, 0.5 * side * y, 0.5 * side * z);
  return pts;
}

std::vector<Eigen::Vector3d> transform(const std::vector<Eigen::Vector3d>& pts, const Pose& p) {
  std::vector<Eigen::Vector3d> out;
  for (const auto& x : pts) out.push_back(p * x);
  return out;
}

Eigen::Vector3d sorted(Eigen::Vector3d v) {
  std::sort(v.data(), v.data() + 3);
  return v;
}

// Corners of the box described by a fitted landmark.
std::vector<Eigen::Vector3d> box_corners(const EllipsoidLandmark& lm) {
  std::vector<Eigen::Vector3d> pts;
  for (int x : {-1, 1})
    for (int y : {-1, 1})
      for (int z : {-1, 1}) {
        const Eigen::Vector3d body(x * lm.axis_lengths.x(), y * lm.axis_lengths.y(), z * lm.axis_lengths.z());
        pts.push_back(lm.orientation * body + lm.position);
      }
  return pts;
}

bool same_point_sets(std::vector<Eigen::Vector3d> a, std::vector<Eigen::Vector3d> b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& p : a) {
    const auto it = std::find_if(b.begin(), b.end(), [&](const Eigen::Vector3d& q) { return (p - q).norm() < tol; });
    if (it == b.end()) return false;
    b.erase(it);
  }
  return true;
}

}  // namespace

TEST(FitEllipsoid, AxisAlignedUnitCube) {
  const EllipsoidLandmark lm = fit_ellipsoid(cube_corners());
  EXPECT_LT(lm.position.norm(), 1e-12);
  EXPECT_TRUE(lm.axis_lengths.isApprox(Eigen::Vector3d::Constant(0.5), 1e-12));
  EXPECT_TRUE(is_rotation(lm.orientation));
  // Permutation of the identity: every entry is 0 or +-1.
  EXPECT_TRUE((lm.orientation.cwiseAbs() * Eigen::Vector3d::Ones()).isApprox(Eigen::Vector3d::Ones()));
  EXPECT_NEAR(lm.orientation.cwiseAbs().maxCoeff(), 1.0, 1e-12);
}

TEST(FitEllipsoid, RotatedShiftedCubeRegeneratesBox) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Pose p{random_rotation(rng), Eigen::Vector3d(1.0, -2.0, 0.5) * trial};
    const auto pts = transform(cube_corners(), p);
    const EllipsoidLandmark lm = fit_ellipsoid(pts);
    EXPECT_LT((lm.position - p.translation).norm(), 1e-9);
    EXPECT_TRUE(lm.axis_lengths.isApprox(Eigen::Vector3d::Constant(0.5), 1e-9));
    EXPECT_TRUE(same_point_sets(box_corners(lm), pts, 1e-9)) << "trial " << trial;
  }
}

TEST(FitEllipsoid, CollinearAndCoplanarAreDegenerate) {
  const std::vector<Eigen::Vector3d> line{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}};
  EXPECT_THROW(fit_ellipsoid(line), DegenerateCloud);
  const std::vector<Eigen::Vector3d> line4{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {3, 3, 3}};
  EXPECT_THROW(fit_ellipsoid(line4), DegenerateCloud);
  const std::vector<Eigen::Vector3d> plane{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {2, 3, 0}};
  EXPECT_THROW(fit_ellipsoid(plane), DegenerateCloud);
}

TEST(FitEllipsoid, AnisotropicBoxDescendingAxes) {
  std::vector<Eigen::Vector3d> pts;
  for (int x : {-1, 1})
    for (int y : {-1, 1})
      for (int z : {-1, 1}) pts.emplace_back(0.2 * y, 3.0 * x, 1.0 * z);
  const EllipsoidLandmark lm = fit_ellipsoid(pts);
  EXPECT_TRUE(lm.axis_lengths.isApprox(Eigen::Vector3d(3.0, 1.0, 0.2), 1e-12));
  EXPECT_TRUE(lm.orientation.col(0).cwiseAbs().isApprox(Eigen::Vector3d::UnitY(), 1e-12));
  EXPECT_NEAR(lm.orientation.determinant(), 1.0, 1e-12);
}

TEST(FitEllipsoid, EquivariantUnderRigidMotion) {
  Rng rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Eigen::Vector3d> pts;
    const Eigen::Vector3d scale(2.0, 1.0, 0.5);
    for (int i = 0; i < 40; ++i) pts.emplace_back(Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng)).cwiseProduct(scale));
    const Pose p{random_rotation(rng), Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng))};
    const EllipsoidLandmark a = fit_ellipsoid(pts);
    const EllipsoidLandmark b = fit_ellipsoid(transform(pts, p));
    EXPECT_LT((b.position - (p * a.position)).norm(), 1e-9);
    EXPECT_LT((sorted(a.axis_lengths) - sorted(b.axis_lengths)).norm(), 1e-9);
  }
}

TEST(FitEllipsoid, PermutationInvariantAxes) {
  Rng rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Eigen::Vector3d> pts;
  for (int i = 0; i < 30; ++i) pts.emplace_back(3 * u(rng), u(rng), 0.3 * u(rng));
  const EllipsoidLandmark a = fit_ellipsoid(pts);
  std::shuffle(pts.begin(), pts.end(), rng);
  const EllipsoidLandmark b = fit_ellipsoid(pts);
  EXPECT_LT((sorted(a.axis_lengths) - sorted(b.axis_lengths)).norm(), 1e-12);
}

TEST(FitEllipsoid, TooFewPoints) {
  const std::vector<Eigen::Vector3d> pts{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  EXPECT_THROW(fit_ellipsoid(pts), DegenerateCloud);
}

TEST(Pose, ComposeAndInverse) {
  Rng rng(3);
  const Pose a{random_rotation(rng), {1, 2, 3}};
  const Pose b{random_rotation(rng), {-1, 0, 4}};
  const Eigen::Vector3d x(0.3, -0.7, 2.0);
  EXPECT_LT(((a * b) * x - a * (b * x)).norm(), 1e-12);
  EXPECT_LT((a.inverse() * (a * x) - x).norm(), 1e-12);
}

TEST(Validate, RejectsBadLandmarks) {
  EllipsoidLandmark lm;
  EXPECT_NO_THROW(validate(lm));
  lm.axis_lengths.z() = 0.0;
  EXPECT_THROW(validate(lm), std::invalid_argument);
  lm.axis_lengths.z() = 1.0;
  lm.orientation(0, 0) = 1.0 + 1e-6;
  EXPECT_THROW(validate(lm), std::invalid_argument);
  lm.orientation = -Eigen::Matrix3d::Identity();
  EXPECT_THROW(validate(lm), std::invalid_argument);
}

TEST(ObjectMap, IndexOf) {
  ObjectMap map;
  map.landmarks.resize(3);
  map.landmarks[0].id = 10;
  map.landmarks[1].id = 4;
  map.landmarks[2].id = 7;
  EXPECT_EQ(map.index_of(4), 1u);
  EXPECT_FALSE(map.index_of(5).has_value());
}
