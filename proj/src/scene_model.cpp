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

#include "cliqueloc/scene_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include "cliqueloc/errors.hpp"

namespace cliqueloc {
namespace {

namespace bg = boost::geometry;
using Point2 = bg::model::d2::point_xy<double>;

// Relative spread below which an eigen-direction counts as absent.
constexpr double kRankTolerance = 1e-10;
// Relative eigenvalue gap below which two principal axes are tied.
constexpr double kTieTolerance = 1e-9;
constexpr double kVolumeTolerance = 1e-9;

// How close a set of unit columns is to the world axes (3 = perfectly aligned).
double world_alignment(const Eigen::MatrixXd& axes) {
  double score = 0.0;
  for (Eigen::Index c = 0; c < axes.cols(); ++c) score += axes.col(c).cwiseAbs().maxCoeff();
  return score;
}

struct Frame2d {
  Eigen::Vector2d u;
  Eigen::Vector2d v;
  double area;
};

double range_along(const std::vector<Eigen::Vector2d>& pts, const Eigen::Vector2d& dir) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : pts) {
    const double s = p.dot(dir);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return hi - lo;
}

double range_along(std::span<const Eigen::Vector3d> pts, const Eigen::Vector3d& dir) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : pts) {
    const double s = p.dot(dir);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return hi - lo;
}

// Minimum-area enclosing rectangles of a planar point set. A minimal
// rectangle has a side collinear with a convex hull edge, so hull edges are
// the only candidates. Returns every frame whose area is within tolerance of
// the minimum.
std::vector<Frame2d> min_area_frames(const std::vector<Eigen::Vector2d>& pts) {
  bg::model::multi_point<Point2> cloud;
  for (const auto& p : pts) cloud.emplace_back(p.x(), p.y());
  bg::model::polygon<Point2> hull;
  bg::convex_hull(cloud, hull);

  std::vector<Frame2d> frames;
  const auto& ring = hull.outer();
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    Eigen::Vector2d edge(ring[i + 1].x() - ring[i].x(), ring[i + 1].y() - ring[i].y());
    if (edge.norm() < 1e-12) continue;
    edge.normalize();
    const Eigen::Vector2d perp(-edge.y(), edge.x());
    frames.push_back({edge, perp, range_along(pts, edge) * range_along(pts, perp)});
  }
  if (frames.empty()) frames.push_back({Eigen::Vector2d::UnitX(), Eigen::Vector2d::UnitY(), 0.0});
  const double best =
      std::min_element(frames.begin(), frames.end(), [](const auto& a, const auto& b) {
        return a.area < b.area;
      })->area;
  std::erase_if(frames, [&](const Frame2d& f) { return f.area > best * (1.0 + kVolumeTolerance); });
  return frames;
}

Eigen::Matrix<double, 3, 2> orthonormal_complement(const Eigen::Vector3d& axis) {
  Eigen::Vector3d helper = Eigen::Vector3d::UnitX();
  if (std::abs(axis.x()) > 0.9) helper = Eigen::Vector3d::UnitY();
  Eigen::Matrix<double, 3, 2> basis;
  basis.col(0) = axis.cross(helper).normalized();
  basis.col(1) = axis.cross(basis.col(0)).normalized();
  return basis;
}

struct Candidate {
  Eigen::MatrixXd axes;
  double volume;
};

// Best-aligned candidate among those with (near) minimal volume.
Eigen::MatrixXd pick(std::vector<Candidate>& candidates) {
  const double best =
      std::min_element(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
        return a.volume < b.volume;
      })->volume;
  const Candidate* chosen = nullptr;
  double chosen_alignment = -1.0;
  for (const auto& c : candidates) {
    if (c.volume > best * (1.0 + kVolumeTolerance)) continue;
    const double a = world_alignment(c.axes);
    if (a > chosen_alignment + 1e-12) {
      chosen = &c;
      chosen_alignment = a;
    }
  }
  return chosen->axes;
}

// Frame of a 2-dimensional tied eigenspace spanned by `basis` (3x2).
Eigen::MatrixXd resolve_plane(std::span<const Eigen::Vector3d> centered,
                              const Eigen::Matrix<double, 3, 2>& basis) {
  std::vector<Eigen::Vector2d> projected;
  projected.reserve(centered.size());
  for (const auto& p : centered) projected.emplace_back(basis.transpose() * p);
  std::vector<Candidate> candidates;
  for (const auto& f : min_area_frames(projected)) {
    Eigen::MatrixXd axes(3, 2);
    axes.col(0) = basis * f.u;
    axes.col(1) = basis * f.v;
    candidates.push_back({axes, f.area});
  }
  return pick(candidates);
}

// Frame for a fully isotropic covariance. Primary-axis candidates are the
// directions between extreme points of the cloud; for each, the orthogonal
// plane is solved exactly as in the 2-dimensional case.
Eigen::MatrixXd resolve_space(std::span<const Eigen::Vector3d> centered) {
  std::vector<std::size_t> extremes;
  for (int x = -1; x <= 1; ++x) {
    for (int y = -1; y <= 1; ++y) {
      for (int z = -1; z <= 1; ++z) {
        if (x == 0 && y == 0 && z == 0) continue;
        const Eigen::Vector3d dir = Eigen::Vector3d(x, y, z).normalized();
        std::size_t arg = 0;
        for (std::size_t i = 1; i < centered.size(); ++i) {
          if (centered[i].dot(dir) > centered[arg].dot(dir)) arg = i;
        }
        extremes.push_back(arg);
      }
    }
  }
  std::sort(extremes.begin(), extremes.end());
  extremes.erase(std::unique(extremes.begin(), extremes.end()), extremes.end());

  std::vector<Eigen::Vector3d> primaries{Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(),
                                         Eigen::Vector3d::UnitZ()};
  for (std::size_t a = 0; a < extremes.size(); ++a) {
    for (std::size_t b = a + 1; b < extremes.size(); ++b) {
      const Eigen::Vector3d d = centered[extremes[b]] - centered[extremes[a]];
      if (d.norm() > 1e-12) primaries.push_back(d.normalized());
    }
  }

  std::vector<Candidate> candidates;
  for (const auto& axis : primaries) {
    const Eigen::Matrix<double, 3, 2> plane = orthonormal_complement(axis);
    const Eigen::MatrixXd in_plane = resolve_plane(centered, plane);
    Eigen::MatrixXd axes(3, 3);
    axes << axis, in_plane;
    double volume = 1.0;
    for (int c = 0; c < 3; ++c) volume *= range_along(centered, axes.col(c));
    candidates.push_back({axes, volume});
  }
  return pick(candidates);
}

}  // namespace

std::optional<std::size_t> ObjectMap::index_of(std::int64_t id) const {
  for (std::size_t i = 0; i < landmarks.size(); ++i) {
    if (landmarks[i].id == id) return i;
  }
  return std::nullopt;
}

bool is_rotation(const Eigen::Matrix3d& r, double tolerance) {
  if (!r.allFinite()) return false;
  const double ortho = (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tolerance && std::abs(r.determinant() - 1.0) <= tolerance;
}

void validate(const EllipsoidLandmark& landmark) {
  const std::string who = "landmark " + std::to_string(landmark.id);
  if (!landmark.position.allFinite()) throw std::invalid_argument(who + ": non-finite position");
  if (!is_rotation(landmark.orientation)) {
    throw std::invalid_argument(who + ": orientation is not a rotation matrix");
  }
  if (!landmark.axis_lengths.allFinite() || (landmark.axis_lengths.array() <= 0.0).any()) {
    throw std::invalid_argument(who + ": axis lengths must be strictly positive");
  }
}

EllipsoidLandmark fit_ellipsoid(std::span<const Eigen::Vector3d> points) {
  if (points.size() < 4) {
    throw DegenerateCloud("ellipsoid fit needs at least 4 points, got " +
                          std::to_string(points.size()));
  }
  const double n = static_cast<double>(points.size());
  const Eigen::Vector3d centroid =
      std::accumulate(points.begin(), points.end(), Eigen::Vector3d::Zero().eval()) / n;
  std::vector<Eigen::Vector3d> centered;
  centered.reserve(points.size());
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  for (const auto& p : points) {
    centered.push_back(p - centroid);
    covariance += centered.back() * centered.back().transpose();
  }
  covariance /= n;

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(covariance);
  if (solver.info() != Eigen::Success) throw DegenerateCloud("eigen decomposition failed");
  // Eigen sorts ascending.
  const Eigen::Vector3d values = solver.eigenvalues().reverse();
  Eigen::Matrix3d axes = solver.eigenvectors().rowwise().reverse();
  if (!(values[0] > 0.0) || values[2] <= kRankTolerance * values[0]) {
    throw DegenerateCloud("point cloud is coplanar or collinear");
  }

  // Tied eigenvalues leave the frame undetermined inside their eigenspace;
  // settle it by the tightest enclosing box, then by world-axis alignment.
  for (int start = 0; start < 3;) {
    int end = start + 1;
    while (end < 3 && values[start] - values[end] <= kTieTolerance * values[0]) ++end;
    const int width = end - start;
    if (width == 2) {
      axes.middleCols(start, 2) = resolve_plane(centered, axes.middleCols(start, 2));
    } else if (width == 3) {
      axes = resolve_space(centered);
    }
    if (width > 1) {
      // Within the tie, order by descending extent, world x/y/z first on equal extents.
      std::vector<int> order(width);
      std::iota(order.begin(), order.end(), start);
      Eigen::Matrix3d snapshot = axes;
      auto extent = [&](int c) { return range_along(centered, snapshot.col(c)); };
      auto world_axis = [&](int c) {
        Eigen::Index k = 0;
        snapshot.col(c).cwiseAbs().maxCoeff(&k);
        return k;
      };
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double ea = extent(a);
        const double eb = extent(b);
        if (std::abs(ea - eb) > kVolumeTolerance * std::max(ea, eb)) return ea > eb;
        return world_axis(a) < world_axis(b);
      });
      for (int i = 0; i < width; ++i) axes.col(start + i) = snapshot.col(order[i]);
    }
    start = end;
  }

  for (int c = 0; c < 3; ++c) {
    Eigen::Index dominant = 0;
    axes.col(c).cwiseAbs().maxCoeff(&dominant);
    if (axes(dominant, c) < 0.0) axes.col(c) *= -1.0;
  }
  if (axes.determinant() < 0.0) axes.col(2) *= -1.0;

  Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector3d hi = -lo;
  for (const auto& p : centered) {
    const Eigen::Vector3d local = axes.transpose() * p;
    lo = lo.cwiseMin(local);
    hi = hi.cwiseMax(local);
  }

  EllipsoidLandmark fitted;
  fitted.position = centroid;
  fitted.orientation = axes;
  fitted.axis_lengths = 0.5 * (hi - lo);
  return fitted;
}

}  // namespace cliqueloc
