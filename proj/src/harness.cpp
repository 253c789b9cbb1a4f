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

#include "cliqueloc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "cliqueloc/errors.hpp"
#include "cliqueloc/parallel.hpp"

namespace cliqueloc {
namespace {

// Extra embedding perturbation of a partial observation per unit of missing extent.
constexpr double kPartialEmbeddingNoise = 1.0;
constexpr double kMinAxis = 0.1;
constexpr double kMaxAxis = 0.4;

void check_rate(double rate, const char* name) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

Eigen::VectorXd perturb(Rng& rng, const Eigen::VectorXd& v, double amount) {
  if (amount <= 0.0) return v;
  Eigen::VectorXd out = v + amount * random_gaussian(rng, static_cast<int>(v.size())) /
                                std::sqrt(static_cast<double>(v.size()));
  return out.normalized();
}

void append_row(std::vector<float>& data, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) data.push_back(static_cast<float>(v[i]));
}

std::string map_embedding_id(std::int64_t id) { return "map/" + std::to_string(id); }
std::string obs_embedding_id(std::int64_t id) { return "obs/" + std::to_string(id); }
std::string class_label(int c) { return "class_" + std::to_string(c); }

Eigen::Matrix3d yaw(double theta) {
  return Eigen::AngleAxisd(theta, Eigen::Vector3d::UnitZ()).toRotationMatrix();
}

int other_class(Rng& rng, int c, int n_classes) {
  std::uniform_int_distribution<int> pick(0, n_classes - 2);
  const int o = pick(rng);
  return o >= c ? o + 1 : o;
}

// Indices of `seed` and its nearest landmarks, `size` in total.
std::vector<int> nearest_cluster(const ObjectMap& map, int seed, int size) {
  std::vector<int> order(map.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  const Eigen::Vector3d c = map.landmarks[static_cast<std::size_t>(seed)].position;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return (map.landmarks[static_cast<std::size_t>(a)].position - c).squaredNorm() <
           (map.landmarks[static_cast<std::size_t>(b)].position - c).squaredNorm();
  });
  order.resize(static_cast<std::size_t>(std::min<int>(size, static_cast<int>(order.size()))));
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

Scene generate_scene(const SceneSpec& spec) {
  if (spec.n_landmarks < 4) throw std::invalid_argument("n_landmarks must be at least 4");
  if (spec.n_classes < 2) throw std::invalid_argument("n_classes must be at least 2");
  if (spec.embedding_dim < 1) throw std::invalid_argument("embedding_dim must be positive");
  if (!(spec.extent > 0.0)) throw std::invalid_argument("extent must be positive");
  if (!(spec.position_noise_sigma >= 0.0)) throw std::invalid_argument("noise must be non-negative");
  check_rate(spec.label_corruption_rate, "label_corruption_rate");
  check_rate(spec.embedding_corruption_rate, "embedding_corruption_rate");
  check_rate(spec.dropout_rate, "dropout_rate");
  check_rate(spec.partial_observation_rate, "partial_observation_rate");

  // Separate streams so enabling one corruption does not reshuffle the others.
  Rng layout = make_rng(spec.rng_seed, "layout");
  Rng embed = make_rng(spec.rng_seed, "embedding");
  Rng observe = make_rng(spec.rng_seed, "observation");
  Rng corrupt = make_rng(spec.rng_seed, "corruption");
  Rng noise = make_rng(spec.rng_seed, "noise");

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> coord(-0.5 * spec.extent, 0.5 * spec.extent);
  std::uniform_real_distribution<double> axis(kMinAxis, kMaxAxis);
  std::uniform_int_distribution<int> klass(0, spec.n_classes - 1);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const int dim = spec.embedding_dim;
  std::vector<Eigen::VectorXd> prototypes;
  for (int c = 0; c < spec.n_classes; ++c) prototypes.push_back(random_gaussian(embed, dim).normalized());

  Scene scene;
  std::vector<std::string> ids;
  std::vector<float> data;
  std::vector<Eigen::VectorXd> instance;

  for (int i = 0; i < spec.n_landmarks; ++i) {
    EllipsoidLandmark lm;
    lm.id = i;
    lm.position = {coord(layout), coord(layout), coord(layout)};
    lm.orientation = random_rotation(layout);
    lm.axis_lengths = {axis(layout), axis(layout), axis(layout)};
    lm.class_id = klass(layout);
    lm.text_label = class_label(lm.class_id);
    lm.embedding_id = map_embedding_id(lm.id);
    instance.push_back(perturb(embed, prototypes[static_cast<std::size_t>(lm.class_id)], spec.instance_spread));
    scene.map.landmarks.push_back(std::move(lm));
  }

  // Landmarks the observation is drawn from.
  std::vector<int> source;
  if (spec.duplicate_cluster) {
    const DuplicateClusterSpec& dup = *spec.duplicate_cluster;
    if (dup.size < 3) throw std::invalid_argument("duplicate cluster needs at least 3 landmarks");
    std::uniform_int_distribution<int> pick(0, spec.n_landmarks - 1);
    source = nearest_cluster(scene.map, pick(layout), dup.size);
    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (int i : source) centroid += scene.map.landmarks[static_cast<std::size_t>(i)].position;
    centroid /= static_cast<double>(source.size());
    const double separation = dup.separation > 0.0 ? dup.separation : 2.0 * spec.extent;
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    const Eigen::Matrix3d r = yaw(angle(layout));
    const Pose copy{r, centroid + Eigen::Vector3d(separation, 0.0, 0.0) - r * centroid};
    for (int i : source) {
      EllipsoidLandmark lm = scene.map.landmarks[static_cast<std::size_t>(i)];
      lm.id = static_cast<std::int64_t>(scene.map.landmarks.size());
      lm.position = copy * lm.position;
      lm.orientation = r * lm.orientation;
      lm.embedding_id = map_embedding_id(lm.id);
      instance.push_back(perturb(embed, instance[static_cast<std::size_t>(i)], dup.embedding_noise));
      scene.map.landmarks.push_back(std::move(lm));
    }
    scene.alternate_pose = copy;
  } else {
    for (int i = 0; i < spec.n_landmarks; ++i) source.push_back(i);
  }
  for (const auto& lm : scene.map.landmarks) {
    ids.push_back(*lm.embedding_id);
    append_row(data, instance[static_cast<std::size_t>(lm.id)]);
  }

  scene.gt_pose.rotation = random_rotation(layout);
  scene.gt_pose.translation = {coord(layout), coord(layout), coord(layout)};
  if (scene.alternate_pose) scene.alternate_pose = *scene.alternate_pose * scene.gt_pose;
  const Pose to_camera = scene.gt_pose.inverse();

  std::vector<int> observed;
  for (int i : source) {
    if (unit(observe) >= spec.dropout_rate) observed.push_back(i);
  }
  for (int i : source) {
    if (observed.size() >= 3) break;
    if (std::find(observed.begin(), observed.end(), i) == observed.end()) observed.push_back(i);
  }
  std::shuffle(observed.begin(), observed.end(), observe);

  for (std::size_t k = 0; k < observed.size(); ++k) {
    const EllipsoidLandmark& src = scene.map.landmarks[static_cast<std::size_t>(observed[k])];
    EllipsoidLandmark lm;
    lm.id = static_cast<std::int64_t>(k);
    lm.gt_map_id = src.id;
    lm.orientation = to_camera.rotation * src.orientation;
    lm.axis_lengths = src.axis_lengths;
    Eigen::Vector3d center = src.position;
    Eigen::VectorXd e = instance[static_cast<std::size_t>(src.id)];

    const double u_partial = unit(corrupt);
    const int partial_axis = std::uniform_int_distribution<int>(0, 2)(corrupt);
    const double f = std::uniform_real_distribution<double>(0.3, 0.7)(corrupt);
    const double side = unit(corrupt) < 0.5 ? -1.0 : 1.0;
    const double u_corrupt = unit(corrupt);
    const int wrong_class = other_class(corrupt, src.class_id, spec.n_classes);

    if (u_partial < spec.partial_observation_rate) {
      const double a = src.axis_lengths[partial_axis];
      lm.axis_lengths[partial_axis] = f * a;
      center += side * (1.0 - f) * a * src.orientation.col(partial_axis);
      e = perturb(noise, e, kPartialEmbeddingNoise * (1.0 - f));
    }
    lm.class_id = src.class_id;
    if (u_corrupt < spec.label_corruption_rate) lm.class_id = wrong_class;
    if (u_corrupt < spec.embedding_corruption_rate) {
      e = perturb(noise, prototypes[static_cast<std::size_t>(wrong_class)], spec.instance_spread);
    }
    e = perturb(noise, e, spec.embedding_noise);

    Eigen::Vector3d offset = Eigen::Vector3d::Zero();
    if (spec.position_noise_sigma > 0.0) {
      offset = spec.position_noise_sigma * Eigen::Vector3d(gauss(noise), gauss(noise), gauss(noise));
    }
    lm.position = to_camera * center + offset;
    lm.text_label = class_label(lm.class_id);
    lm.embedding_id = obs_embedding_id(lm.id);
    ids.push_back(*lm.embedding_id);
    append_row(data, e);
    scene.ground_truth.push_back({observed[k], static_cast<int>(k), 0.0});
    scene.observation.objects.push_back(std::move(lm));
  }
  scene.observation.source_pose_gt = scene.gt_pose;
  scene.embeddings = EmbeddingTable::normalized(dim, std::move(ids), std::move(data));
  return scene;
}

Scene duplicate_scene(const Scene& base, int size) {
  const std::size_t n = base.map.size();
  if (n == 0) throw std::invalid_argument("base scene has no landmarks");
  if (size < static_cast<int>(n)) throw std::invalid_argument("size below the base map size");

  Eigen::Vector3d lo = base.map.landmarks[0].position, hi = lo;
  for (const auto& lm : base.map.landmarks) {
    lo = lo.cwiseMin(lm.position);
    hi = hi.cwiseMax(lm.position);
  }
  // Gap wider than the adjacency radius, so copies do not touch.
  const double stride = (hi.x() - lo.x()) + 2.0 * kDefaultAdjacencyDistance + 1.0;

  Scene scene = base;
  std::vector<std::string> ids = base.embeddings.ids();
  std::vector<float> data = base.embeddings.data();
  for (int j = static_cast<int>(n); j < size; ++j) {
    const std::size_t src_index = static_cast<std::size_t>(j) % n;
    const int copy = j / static_cast<int>(n);
    EllipsoidLandmark lm = base.map.landmarks[src_index];
    lm.id = j;
    lm.position.x() += stride * copy;
    if (lm.embedding_id) {
      if (const auto row = base.embeddings.find(*lm.embedding_id)) {
        lm.embedding_id = map_embedding_id(lm.id);
        ids.push_back(*lm.embedding_id);
        data.insert(data.end(), row->begin(), row->end());
      }
    }
    scene.map.landmarks.push_back(std::move(lm));
  }
  scene.embeddings = EmbeddingTable(base.embeddings.dim(), std::move(ids), std::move(data));
  return scene;
}

std::vector<Correspondence> contaminated_candidates(const Scene& scene, const SimilarityMatrix& similarity,
                                                    double outlier_rate, std::uint64_t seed) {
  if (!(outlier_rate >= 0.0 && outlier_rate < 1.0)) {
    throw std::invalid_argument("outlier_rate must lie in [0, 1)");
  }
  const int n_obs = static_cast<int>(scene.observation.size());
  const int n_map = static_cast<int>(scene.map.size());
  std::set<std::pair<int, int>> used;
  std::vector<Correspondence> out;
  for (const auto& c : scene.ground_truth) {
    used.insert({c.obs_index, c.map_index});
    out.push_back({c.map_index, c.obs_index, similarity.values(c.obs_index, c.map_index)});
  }
  const auto inliers = static_cast<double>(out.size());
  const auto target = static_cast<std::size_t>(std::llround(inliers * outlier_rate / (1.0 - outlier_rate)));
  const std::size_t capacity = static_cast<std::size_t>(n_obs) * static_cast<std::size_t>(n_map) - used.size();
  Rng rng = make_rng(seed, "outliers");
  std::uniform_int_distribution<int> pick_obs(0, n_obs - 1);
  std::uniform_int_distribution<int> pick_map(0, n_map - 1);
  std::size_t added = 0;
  while (added < std::min(target, capacity)) {
    const int o = pick_obs(rng);
    const int m = pick_map(rng);
    if (!used.insert({o, m}).second) continue;
    out.push_back({m, o, similarity.values(o, m)});
    ++added;
  }
  std::sort(out.begin(), out.end(), [](const Correspondence& a, const Correspondence& b) {
    return std::tie(a.obs_index, a.map_index) < std::tie(b.obs_index, b.map_index);
  });
  return out;
}

MatchingScore evaluate_matching(std::span<const Correspondence> predicted,
                                std::span<const Correspondence> ground_truth) {
  std::set<std::pair<int, int>> truth;
  for (const auto& c : ground_truth) truth.insert({c.map_index, c.obs_index});
  std::set<std::pair<int, int>> pred;
  for (const auto& c : predicted) pred.insert({c.map_index, c.obs_index});
  std::size_t hits = 0;
  for (const auto& p : pred) hits += truth.count(p);

  MatchingScore score;
  score.empty_prediction = pred.empty();
  if (!pred.empty()) score.precision = 100.0 * static_cast<double>(hits) / static_cast<double>(pred.size());
  if (!truth.empty()) score.recall = 100.0 * static_cast<double>(hits) / static_cast<double>(truth.size());
  return score;
}

double rotation_error(const Eigen::Matrix3d& estimate, const Eigen::Matrix3d& truth) {
  const double c = ((estimate.transpose() * truth).trace() - 1.0) / 2.0;
  return std::acos(std::clamp(c, -1.0, 1.0));
}

bool PoseScore::success_at(std::size_t n) const {
  if (success.empty() || n == 0) return false;
  return success[std::min(n, success.size()) - 1];
}

PoseScore evaluate_pose(std::span<const PoseEstimate> estimates, const Pose& truth, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
  PoseScore score;
  if (estimates.empty()) return score;
  score.translation_error = (estimates[0].pose.translation - truth.translation).norm();
  score.rotation_error = rotation_error(estimates[0].pose.rotation, truth.rotation);
  bool any = false;
  for (const auto& e : estimates) {
    any = any || (e.pose.translation - truth.translation).norm() < threshold;
    score.success.push_back(any);
  }
  return score;
}

bool contains_pose(std::span<const PoseEstimate> estimates, const Pose& pose, std::size_t n, double threshold) {
  const std::size_t limit = std::min(n, estimates.size());
  for (std::size_t i = 0; i < limit; ++i) {
    if ((estimates[i].pose.translation - pose.translation).norm() < threshold) return true;
  }
  return false;
}

TrialOutcome score_trial(const Scene& scene, LocalizationResult result) {
  TrialOutcome out;
  out.solved = !result.estimates.empty();
  out.latency_seconds = result.latency_seconds;
  if (out.solved) {
    out.matching = evaluate_matching(result.estimates.front().inliers, scene.ground_truth);
    out.pose = evaluate_pose(result.estimates, scene.gt_pose);
  } else {
    out.matching.empty_prediction = true;
  }
  out.result = std::move(result);
  return out;
}

namespace {

template <typename Body>
TrialOutcome guarded(const Scene& scene, Body&& body) {
  const auto start = std::chrono::steady_clock::now();
  LocalizationResult result;
  try {
    result = body();
  } catch (const Error& e) {
    result = {};
    result.diagnostics.push_back(e.what());
  }
  if (result.latency_seconds == 0.0) {
    result.latency_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return score_trial(scene, std::move(result));
}

}  // namespace

TrialOutcome run_trial(const Scene& scene, const PipelineConfig& config) {
  return guarded(scene, [&] { return localize(scene.map, scene.observation, scene.embeddings, config); });
}

TrialOutcome run_trial(const Scene& scene, std::vector<Correspondence> candidates,
                       const PipelineConfig& config) {
  return guarded(scene, [&] {
    return localize_candidates(std::move(candidates), scene.map, scene.observation, config);
  });
}

EvalReport aggregate(std::span<const TrialOutcome> trials) {
  EvalReport r;
  r.trials = static_cast<int>(trials.size());
  if (trials.empty()) return r;
  for (const auto& t : trials) {
    r.precision += t.matching.precision;
    r.recall += t.matching.recall;
    r.success_rate_top1 += t.pose.success_at(1) ? 1.0 : 0.0;
    r.success_rate_top3 += t.pose.success_at(3) ? 1.0 : 0.0;
    r.success_rate_top5 += t.pose.success_at(5) ? 1.0 : 0.0;
    r.mean_latency += t.latency_seconds;
    if (t.solved) {
      ++r.solved;
      r.translation_error += t.pose.translation_error;
      r.rotation_error += t.pose.rotation_error;
    }
  }
  const double n = static_cast<double>(trials.size());
  r.precision /= n;
  r.recall /= n;
  r.success_rate_top1 *= 100.0 / n;
  r.success_rate_top3 *= 100.0 / n;
  r.success_rate_top5 *= 100.0 / n;
  r.mean_latency /= n;
  if (r.solved > 0) {
    r.translation_error /= r.solved;
    r.rotation_error /= r.solved;
  }
  return r;
}

std::vector<std::string> suite_names() { return {"noiseless", "noisy", "partial", "corrupted", "duplicate"}; }

SceneSpec suite_spec(const std::string& suite) {
  SceneSpec spec;
  if (suite == "noiseless") return spec;
  if (suite == "noisy") {
    spec.position_noise_sigma = 0.05;
    spec.dropout_rate = 0.2;
    spec.embedding_noise = 0.2;
  } else if (suite == "partial") {
    spec.position_noise_sigma = 0.01;
    spec.partial_observation_rate = 0.3;
    spec.embedding_noise = 0.1;
  } else if (suite == "corrupted") {
    spec.position_noise_sigma = 0.02;
    spec.label_corruption_rate = 0.2;
    spec.embedding_corruption_rate = 0.2;
    spec.embedding_noise = 0.2;
  } else if (suite == "duplicate") {
    spec.position_noise_sigma = 0.02;
    spec.embedding_noise = 0.2;
    spec.duplicate_cluster = DuplicateClusterSpec{};
  } else {
    throw std::invalid_argument("unknown suite '" + suite + "'");
  }
  return spec;
}

Scene suite_scene(const std::string& suite, std::uint64_t seed, int index) {
  SceneSpec spec = suite_spec(suite);
  spec.rng_seed = sub_seed(seed, suite + "/" + std::to_string(index));
  return generate_scene(spec);
}

namespace {

bool stochastic(Extractor e) { return e != Extractor::kClique; }

std::vector<TrialOutcome> run_suite(const std::vector<Scene>& scenes, const PipelineConfig& config,
                                    double outlier_rate, std::uint64_t seed) {
  std::vector<TrialOutcome> out(scenes.size());
  parallel_for(scenes.size(), [&](std::size_t i) {
    if (outlier_rate > 0.0) {
      const SimilarityMatrix s = compute_similarity(scenes[i].map, scenes[i].observation, scenes[i].embeddings, config);
      auto candidates = contaminated_candidates(scenes[i], s, outlier_rate, sub_seed(seed, "scene/" + std::to_string(i)));
      out[i] = run_trial(scenes[i], std::move(candidates), config);
    } else {
      out[i] = run_trial(scenes[i], config);
    }
    out[i].result = {};  // keep memory flat on large grids
  });
  return out;
}

}  // namespace

std::vector<AblationRow> run_ablation(const AblationGrid& grid, const PipelineConfig& base) {
  if (grid.scenes < 1) throw std::invalid_argument("scenes must be positive");
  std::vector<AblationRow> rows;
  for (const auto& suite : grid.suites) {
    std::vector<Scene> scenes(static_cast<std::size_t>(grid.scenes));
    parallel_for(scenes.size(), [&](std::size_t i) { scenes[i] = suite_scene(suite, grid.seed, static_cast<int>(i)); });
    for (double alpha : grid.alphas) {
      for (Extractor extractor : grid.extractors) {
        for (WeightMode weights : grid.weights) {
          for (MatchingStrategy matching : grid.matchings) {
            PipelineConfig config = base;
            config.alpha = alpha;
            config.extractor = extractor;
            config.weights = weights;
            config.matching.strategy = matching;
            const int runs = stochastic(extractor) ? std::max(1, grid.stochastic_trials) : 1;
            std::optional<EvalReport> best;
            for (int run = 0; run < runs; ++run) {
              config.seed = sub_seed(grid.seed, "trial/" + std::to_string(run));
              const auto trials = run_suite(scenes, config, grid.candidate_outlier_rate, grid.seed);
              const EvalReport report = aggregate(trials);
              if (!best || report.success_rate_top1 > best->success_rate_top1) best = report;
            }
            rows.push_back({suite, alpha, extractor, weights, matching, *best});
          }
        }
      }
    }
  }
  return rows;
}

std::string ablation_csv(std::span<const AblationRow> rows) {
  std::ostringstream out;
  out << "suite,alpha,extractor,weights,matching,trials,solved,precision,recall,"
         "translation_error,rotation_error,success_top1,success_top3,success_top5,mean_latency\n";
  out << std::setprecision(6);
  for (const auto& r : rows) {
    const EvalReport& e = r.report;
    out << r.suite << ',' << r.alpha << ',' << to_string(r.extractor) << ',' << to_string(r.weights) << ','
        << to_string(r.matching) << ',' << e.trials << ',' << e.solved << ',' << e.precision << ','
        << e.recall << ',' << e.translation_error << ',' << e.rotation_error << ',' << e.success_rate_top1
        << ',' << e.success_rate_top3 << ',' << e.success_rate_top5 << ',' << e.mean_latency << '\n';
  }
  return out.str();
}

std::string ablation_table(std::span<const AblationRow> rows) {
  std::ostringstream out;
  out << std::left << std::setw(10) << "suite" << std::right << std::setw(6) << "alpha" << std::setw(9)
      << "extract" << std::setw(6) << "wts" << std::setw(11) << "matching" << std::setw(8) << "prec"
      << std::setw(8) << "rec" << std::setw(9) << "TE[m]" << std::setw(9) << "RE[rad]" << std::setw(7)
      << "top1" << std::setw(7) << "top3" << std::setw(7) << "top5" << std::setw(10) << "lat[ms]" << '\n';
  out << std::fixed;
  for (const auto& r : rows) {
    const EvalReport& e = r.report;
    out << std::left << std::setw(10) << r.suite << std::right << std::setprecision(2) << std::setw(6)
        << r.alpha << std::setw(9) << to_string(r.extractor) << std::setw(6) << to_string(r.weights)
        << std::setw(11) << to_string(r.matching) << std::setprecision(1) << std::setw(8) << e.precision
        << std::setw(8) << e.recall << std::setprecision(4) << std::setw(9) << e.translation_error
        << std::setw(9) << e.rotation_error << std::setprecision(1) << std::setw(7) << e.success_rate_top1
        << std::setw(7) << e.success_rate_top3 << std::setw(7) << e.success_rate_top5 << std::setprecision(2)
        << std::setw(10) << 1e3 * e.mean_latency << '\n';
  }
  return out.str();
}

std::vector<ScalabilityRow> benchmark_scalability(std::span<const int> sizes, const SceneSpec& base,
                                                  const PipelineConfig& config, int repeats) {
  if (repeats < 1) throw std::invalid_argument("repeats must be positive");
  const Scene scene = generate_scene(base);
  std::vector<ScalabilityRow> rows;
  for (int size : sizes) {
    const Scene big = duplicate_scene(scene, std::max(size, static_cast<int>(scene.map.size())));
    std::vector<double> times;
    for (int r = 0; r < repeats; ++r) {
      const auto start = std::chrono::steady_clock::now();
      try {
        (void)localize(big.map, big.observation, big.embeddings, config);
      } catch (const Error&) {
        // A failed localization still costs the time it took.
      }
      times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    ScalabilityRow row;
    row.size = static_cast<int>(big.map.size());
    for (double t : times) row.mean_latency += t;
    row.mean_latency /= static_cast<double>(times.size());
    std::sort(times.begin(), times.end());
    const std::size_t mid = times.size() / 2;
    row.median_latency = times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
    rows.push_back(row);
  }
  return rows;
}

namespace {

double r_squared(std::span<const ScalabilityRow> rows, int degree) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd a(n, degree + 1);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = rows[static_cast<std::size_t>(i)].size;
    for (int d = 0; d <= degree; ++d) a(i, d) = std::pow(x, d);
    y[i] = rows[static_cast<std::size_t>(i)].median_latency;
  }
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
  const double ss_res = (y - a * coef).squaredNorm();
  const double ss_tot = (y.array() - y.mean()).square().sum();
  return ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
}

}  // namespace

GrowthFit fit_growth(std::span<const ScalabilityRow> rows) {
  if (rows.size() < 3) throw std::invalid_argument("need at least 3 sizes to compare fits");
  return {r_squared(rows, 1), r_squared(rows, 2)};
}

std::string scalability_csv(std::span<const ScalabilityRow> rows) {
  std::ostringstream out;
  out << "size,mean_latency,median_latency\n" << std::setprecision(6);
  for (const auto& r : rows) out << r.size << ',' << r.mean_latency << ',' << r.median_latency << '\n';
  return out.str();
}

}  // namespace cliqueloc
