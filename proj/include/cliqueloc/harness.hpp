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

#include "cliqueloc/baselines.hpp"
#include "cliqueloc/descriptors.hpp"
#include "cliqueloc/matching.hpp"
#include "cliqueloc/pipeline.hpp"
#include "cliqueloc/pose_solver.hpp"
#include "cliqueloc/random.hpp"
#include "cliqueloc/scene_model.hpp"

namespace cliqueloc {

// ---------------------------------------------------------------------------
// Synthetic scenes

/// Copies a compact group of landmarks to a distant part of the map, so an
/// observation of the group fits two poses.
struct DuplicateClusterSpec {
  /// Landmarks copied: a random landmark and its nearest neighbors.
  int size = 8;
  /// Offset of the copy along x; 0 means twice the scene extent.
  double separation = 0.0;
  /// Perturbation of the copies' embeddings relative to the originals.
  double embedding_noise = 0.2;
};

struct SceneSpec {
  int n_landmarks = 30;
  /// Side of the cube landmarks are drawn from, meters.
  double extent = 4.0;
  int n_classes = 10;
  int embedding_dim = 64;
  double position_noise_sigma = 0.0;
  /// Observed objects whose class is replaced by a different one.
  double label_corruption_rate = 0.0;
  /// Observed objects whose embedding is drawn from a different class.
  double embedding_corruption_rate = 0.0;
  /// Landmarks left unobserved.
  double dropout_rate = 0.0;
  /// Observed objects seen only in part: one axis shrinks to 30-70 % and the
  /// fitted center moves towards the visible side.
  double partial_observation_rate = 0.0;
  std::optional<DuplicateClusterSpec> duplicate_cluster;
  /// Spread of instance embeddings around their class prototype.
  double instance_spread = 0.6;
  /// Observation-side embedding perturbation (appearance change between the
  /// mapped description and the observed crop).
  double embedding_noise = 0.0;
  std::uint64_t rng_seed = 0;
};

struct Scene {
  ObjectMap map;
  /// Carries the ground-truth pose and per-object gt_map_id.
  ObservationSet observation;
  EmbeddingTable embeddings;
  /// True (map, observation) pairs; similarity left at 0.
  std::vector<Correspondence> ground_truth;
  Pose gt_pose;
  /// Pose that explains the observation through the duplicated cluster.
  std::optional<Pose> alternate_pose;
};

/// Throws std::invalid_argument for rates outside [0, 1] or fewer than 4 landmarks.
Scene generate_scene(const SceneSpec& spec);

/// Pads `base` with translated copies of its map until it has `size`
/// landmarks; the observation is unchanged. Copies reuse the original
/// embedding vectors under new ids.
Scene duplicate_scene(const Scene& base, int size);

/// Ground-truth pairs plus random wrong pairs such that `outlier_rate` of the
/// returned candidates are outliers. Similarities come from `similarity`.
std::vector<Correspondence> contaminated_candidates(const Scene& scene, const SimilarityMatrix& similarity,
                                                    double outlier_rate, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Metrics

struct MatchingScore {
  double precision = 0.0;  ///< percent
  double recall = 0.0;     ///< percent
  /// No prediction: precision is undefined and reported as 0.
  bool empty_prediction = false;
};

/// Compares (map_index, obs_index) pairs; similarities are ignored.
MatchingScore evaluate_matching(std::span<const Correspondence> predicted,
                                std::span<const Correspondence> ground_truth);

inline constexpr double kSuccessThreshold = 1.0;  // meters

/// Geodesic angle between two rotations, radians in [0, pi].
double rotation_error(const Eigen::Matrix3d& estimate, const Eigen::Matrix3d& truth);

struct PoseScore {
  double translation_error = 0.0;  ///< rank-1, meters
  double rotation_error = 0.0;     ///< rank-1, radians
  /// success[k]: one of the best k + 1 estimates is within the threshold.
  std::vector<bool> success;

  /// Top-N success; N beyond the number of estimates uses all of them.
  bool success_at(std::size_t n) const;
};

PoseScore evaluate_pose(std::span<const PoseEstimate> estimates, const Pose& truth,
                        double threshold = kSuccessThreshold);

/// True when one of the best `n` estimates lies within `threshold` of `pose`.
bool contains_pose(std::span<const PoseEstimate> estimates, const Pose& pose, std::size_t n,
                   double threshold = kSuccessThreshold);

struct TrialOutcome {
  bool solved = false;
  MatchingScore matching;
  PoseScore pose;
  double latency_seconds = 0.0;
  LocalizationResult result;
};

/// Scores a pipeline result against the scene's ground truth. Precision and
/// recall use the rank-1 correspondence set.
TrialOutcome score_trial(const Scene& scene, LocalizationResult result);

/// Full pipeline on one scene; a pipeline failure becomes an unsolved trial.
TrialOutcome run_trial(const Scene& scene, const PipelineConfig& config);

/// Extraction and pose only, on a fixed candidate list.
TrialOutcome run_trial(const Scene& scene, std::vector<Correspondence> candidates,
                       const PipelineConfig& config);

/// Aggregate over trials. Success rates count unsolved trials as failures;
/// translation and rotation errors average over solved trials only.
struct EvalReport {
  double precision = 0.0;  ///< percent
  double recall = 0.0;     ///< percent
  double translation_error = 0.0;
  double rotation_error = 0.0;
  double success_rate_top1 = 0.0;  ///< percent
  double success_rate_top3 = 0.0;
  double success_rate_top5 = 0.0;
  double mean_latency = 0.0;  ///< seconds
  int trials = 0;
  int solved = 0;
};

EvalReport aggregate(std::span<const TrialOutcome> trials);

// ---------------------------------------------------------------------------
// Experiment suites

/// Named scene families: "noiseless", "noisy", "partial", "corrupted", "duplicate".
SceneSpec suite_spec(const std::string& suite);
std::vector<std::string> suite_names();

/// Scene `index` of a suite; independent of how many scenes are drawn.
Scene suite_scene(const std::string& suite, std::uint64_t seed, int index);

struct AblationGrid {
  std::vector<std::string> suites{"noisy", "partial", "corrupted", "duplicate"};
  /// Descriptor axis: 0 is SH only, 1 embeddings only.
  std::vector<double> alphas{kDefaultAlpha};
  std::vector<Extractor> extractors{Extractor::kClique};
  std::vector<WeightMode> weights{WeightMode::kBoth};
  std::vector<MatchingStrategy> matchings{MatchingStrategy::kAdaptive};
  int scenes = 50;
  std::uint64_t seed = 0;
  /// Stochastic extractors run this many seeds; the best top-1 success is reported.
  int stochastic_trials = 3;
  /// When positive, matching is replaced by contaminated ground truth with this outlier fraction.
  double candidate_outlier_rate = 0.0;
};

struct AblationRow {
  std::string suite;
  double alpha = kDefaultAlpha;
  Extractor extractor = Extractor::kClique;
  WeightMode weights = WeightMode::kBoth;
  MatchingStrategy matching = MatchingStrategy::kAdaptive;
  EvalReport report;
};

/// Cross product of the grid axes on shared scenes, trials in parallel.
std::vector<AblationRow> run_ablation(const AblationGrid& grid, const PipelineConfig& base = {});

std::string ablation_csv(std::span<const AblationRow> rows);
std::string ablation_table(std::span<const AblationRow> rows);

struct ScalabilityRow {
  int size = 0;
  double mean_latency = 0.0;    ///< seconds
  double median_latency = 0.0;  ///< seconds
};

/// Localizes a base scene duplicated to each size, `repeats` timed runs each.
std::vector<ScalabilityRow> benchmark_scalability(std::span<const int> sizes, const SceneSpec& base,
                                                  const PipelineConfig& config = {}, int repeats = 5);

struct GrowthFit {
  double r2_linear = 0.0;
  double r2_quadratic = 0.0;
};

/// Least-squares fits of latency against size with degree 1 and 2 polynomials.
GrowthFit fit_growth(std::span<const ScalabilityRow> rows);

std::string scalability_csv(std::span<const ScalabilityRow> rows);

}  // namespace cliqueloc
