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

#include <vector>

#include <gtest/gtest.h>

#include "cliqueloc/errors.hpp"
#include "cliqueloc/pose_solver.hpp"
#include "cliqueloc/random.hpp"
#include "oracles.hpp"

using namespace cliqueloc;

namespace {

double pose_distance(const Pose& a, const Pose& b) {
  return std::max((a.rotation - b.rotation).cwiseAbs().maxCoeff(), (a.translation - b.translation).cwiseAbs().maxCoeff());
}

}  // namespace

TEST(CompletenessWeight, Examples) {
  const Eigen::Vector3d m(0.4, 0.2, 0.1);
  EXPECT_DOUBLE_EQ(completeness_weight(m, m), 1.0);
  EXPECT_DOUBLE_EQ(completeness_weight(m / 2, m), 0.5);
  EXPECT_DOUBLE_EQ(completeness_weight(m * 2, m), 1.0);
}

TEST(SolvePose, IdentityWhenPointsCoincide) {
  Rng rng(1);
  auto inst = oracle::random_rigid_instance(rng, 6);
  for (auto& p : inst.pairs) p.map_position = p.obs_position;
  const PoseEstimate e = solve_weighted_pose(inst.pairs);
  EXPECT_LT((e.pose.rotation - Eigen::Matrix3d::Identity()).norm(), 1e-12);
  EXPECT_LT(e.pose.translation.norm(), 1e-12);
  EXPECT_LT(e.weighted_rms_residual, 1e-12);
}

TEST(SolvePose, RecoversRandomRigidTransform) {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = oracle::random_rigid_instance(rng, 3 + trial % 20);
    const PoseEstimate e = solve_weighted_pose(inst.pairs);
    EXPECT_LT(pose_distance(e.pose, inst.truth), 1e-9);
    EXPECT_TRUE(is_rotation(e.pose.rotation));
  }
}

TEST(SolvePose, ZeroWeightOutlierIgnored) {
  Rng rng(3);
  auto inst = oracle::random_rigid_instance(rng, 8);
  WeightedPair outlier = inst.pairs[0];
  outlier.map_position += Eigen::Vector3d(10, -3, 4);
  outlier.w_sim = 0.0;
  auto with = inst.pairs;
  with.push_back(outlier);
  EXPECT_LT(pose_distance(solve_weighted_pose(with).pose, solve_weighted_pose(inst.pairs).pose), 1e-12);
}

TEST(SolvePose, WeightScaleInvariance) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = oracle::random_rigid_instance(rng, 10, 0.1);
    const Pose a = solve_weighted_pose(inst.pairs).pose;
    for (auto& p : inst.pairs) p.w_sim *= 17.0;
    EXPECT_LT(pose_distance(a, solve_weighted_pose(inst.pairs).pose), 1e-9);
  }
}

TEST(SolvePose, EquivarianceInObservationFrame) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = oracle::random_rigid_instance(rng, 12, 0.1);
    const Pose a = solve_weighted_pose(inst.pairs).pose;
    const Pose t1{random_rotation(rng), Eigen::Vector3d(1, -2, 3)};
    for (auto& p : inst.pairs) p.obs_position = t1 * p.obs_position;
    const Pose b = solve_weighted_pose(inst.pairs).pose;
    const Pose expected{a.rotation * t1.rotation.transpose(), a.translation - a.rotation * t1.rotation.transpose() * t1.translation};
    EXPECT_LT(pose_distance(b, expected), 1e-9);
  }
}

TEST(SolvePose, LocallyOptimal) {
  Rng rng(6);
  std::normal_distribution<double> g(0.0, 0.01);
  auto inst = oracle::random_rigid_instance(rng, 15, 0.2);
  const PoseEstimate e = solve_weighted_pose(inst.pairs);
  const double best = pose_objective(inst.pairs, e.pose);
  for (int k = 0; k < 1000; ++k) {
    const Eigen::Vector3d w(g(rng), g(rng), g(rng));
    Pose p = e.pose;
    p.rotation = Eigen::AngleAxisd(w.norm(), w.normalized()).toRotationMatrix() * p.rotation;
    p.translation += Eigen::Vector3d(g(rng), g(rng), g(rng));
    EXPECT_GE(pose_objective(inst.pairs, p), best - 1e-12);
  }
}

TEST(SolvePose, MatchesIterativeMinimizerAndZeroGradient) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = oracle::random_rigid_instance(rng, 4 + trial, 0.3);
    const PoseEstimate e = solve_weighted_pose(inst.pairs);
    const Pose it = oracle::iterative_pose(inst.pairs);
    EXPECT_NEAR(pose_objective(inst.pairs, e.pose), pose_objective(inst.pairs, it), 1e-6);
    EXPECT_LT(oracle::translation_gradient(inst.pairs, e.pose).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(SolvePose, ResidualIsWeightedRms) {
  Rng rng(8);
  auto inst = oracle::random_rigid_instance(rng, 9, 0.2);
  const PoseEstimate e = solve_weighted_pose(inst.pairs);
  double wsum = 0;
  for (const auto& p : inst.pairs) wsum += p.weight();
  EXPECT_NEAR(e.weighted_rms_residual, std::sqrt(pose_objective(inst.pairs, e.pose) / wsum), 1e-12);
}

TEST(SolvePose, Errors) {
  Rng rng(9);
  auto inst = oracle::random_rigid_instance(rng, 2);
  EXPECT_THROW(solve_weighted_pose(inst.pairs), InsufficientPairs);
  auto three = oracle::random_rigid_instance(rng, 3);
  three.pairs[2].w_com = 0.0;
  EXPECT_THROW(solve_weighted_pose(three.pairs), InsufficientPairs);
  std::vector<WeightedPair> line;
  for (int i = 0; i < 5; ++i) line.push_back({Eigen::Vector3d(i, 2 * i, 0), Eigen::Vector3d(i, 0, 0), 1, 1});
  EXPECT_THROW(solve_weighted_pose(line), DegenerateGeometry);
}

TEST(WeightedSet, Modes) {
  ObjectMap map;
  ObservationSet obs;
  EllipsoidLandmark m, o;
  m.axis_lengths = {0.4, 0.2, 0.2};
  o.axis_lengths = {0.2, 0.1, 0.1};
  map.landmarks = {m};
  obs.objects = {o};
  const std::vector<Correspondence> c{{0, 0, -0.2}, {0, 0, 0.6}};
  const auto both = make_weighted_set(c, map, obs, WeightMode::kBoth);
  EXPECT_DOUBLE_EQ(both[0].w_sim, 0.0);
  EXPECT_DOUBLE_EQ(both[1].w_sim, 0.6);
  EXPECT_DOUBLE_EQ(both[1].w_com, 0.5);
  const auto none = make_weighted_set(c, map, obs, WeightMode::kNone);
  EXPECT_DOUBLE_EQ(none[1].weight(), 1.0);
  EXPECT_DOUBLE_EQ(make_weighted_set(c, map, obs, WeightMode::kSimilarity)[1].weight(), 0.6);
  EXPECT_DOUBLE_EQ(make_weighted_set(c, map, obs, WeightMode::kCompleteness)[1].weight(), 0.5);
  EXPECT_EQ(parse_weight_mode("com"), WeightMode::kCompleteness);
  EXPECT_EQ(to_string(WeightMode::kSimilarity), "sim");
}

namespace {

struct Fixture {
  ObjectMap map;
  ObservationSet obs;
  std::vector<Correspondence> candidates;
};

Fixture exact_fixture(Rng& rng, int n) {
  Fixture f;
  const Pose truth{random_rotation(rng), Eigen::Vector3d(1, 2, 3)};
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < n; ++i) {
    EllipsoidLandmark o;
    o.id = i;
    o.position = {u(rng), u(rng), u(rng)};
    EllipsoidLandmark m = o;
    m.position = truth * o.position;
    f.map.landmarks.push_back(m);
    f.obs.objects.push_back(o);
    f.candidates.push_back({i, i, 1.0});
  }
  return f;
}

}  // namespace

TEST(EvaluateHypotheses, DropsCollinearKeepsOrder) {
  Rng rng(10);
  Fixture f = exact_fixture(rng, 9);
  // Make candidates 3..5 collinear on both sides.
  for (int i = 3; i < 6; ++i) {
    f.map.landmarks[i].position = Eigen::Vector3d(i, 0, 0);
    f.obs.objects[i].position = Eigen::Vector3d(0, i, 0);
  }
  const std::vector<CliqueHypothesis> hyps{{{0, 1, 2}, 3}, {{3, 4, 5}, 2.5}, {{6, 7, 8}, 2}};
  const auto r = evaluate_hypotheses(hyps, f.candidates, f.map, f.obs, WeightMode::kBoth);
  ASSERT_EQ(r.estimates.size(), 2u);
  EXPECT_DOUBLE_EQ(r.estimates[0].hypothesis_score, 3.0);
  EXPECT_DOUBLE_EQ(r.estimates[1].hypothesis_score, 2.0);
  EXPECT_EQ(r.diagnostics.size(), 1u);
}

TEST(EvaluateHypotheses, AllFailThrows) {
  Rng rng(11);
  Fixture f = exact_fixture(rng, 3);
  for (int i = 0; i < 3; ++i) f.map.landmarks[i].position = Eigen::Vector3d(i, 0, 0);
  const std::vector<CliqueHypothesis> hyps{{{0, 1, 2}, 3}};
  EXPECT_THROW(evaluate_hypotheses(hyps, f.candidates, f.map, f.obs, WeightMode::kBoth), NoSolvableHypothesis);
}

TEST(EvaluateHypotheses, SingleExact) {
  Rng rng(12);
  Fixture f = exact_fixture(rng, 5);
  const std::vector<CliqueHypothesis> hyps{{{0, 1, 2, 3, 4}, 5}};
  const auto r = evaluate_hypotheses(hyps, f.candidates, f.map, f.obs, WeightMode::kBoth);
  ASSERT_EQ(r.estimates.size(), 1u);
  EXPECT_LT(r.estimates[0].weighted_rms_residual, 1e-9);
  EXPECT_EQ(r.estimates[0].inliers.size(), 5u);
}
