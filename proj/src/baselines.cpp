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

#include "cliqueloc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

#include "cliqueloc/errors.hpp"
#include "cliqueloc/random.hpp"

namespace cliqueloc {
namespace {

constexpr int kMaxResamples = 100;

void check_config(const SacConfig& config) {
  if (config.max_iterations < 1 || !(config.inlier_threshold > 0.0) || config.min_sample < 3) {
    throw std::invalid_argument("invalid SAC configuration");
  }
  if (!(config.confidence > 0.0 && config.confidence <= 1.0)) {
    throw std::invalid_argument("confidence must lie in (0, 1]");
  }
}

bool distinct_indices(std::span<const Correspondence> candidates, const std::vector<int>& sample) {
  for (std::size_t a = 0; a < sample.size(); ++a) {
    for (std::size_t b = a + 1; b < sample.size(); ++b) {
      const auto& ca = candidates[static_cast<std::size_t>(sample[a])];
      const auto& cb = candidates[static_cast<std::size_t>(sample[b])];
      if (sample[a] == sample[b] || ca.map_index == cb.map_index || ca.obs_index == cb.obs_index) {
        return false;
      }
    }
  }
  return true;
}

// Standard RANSAC iteration bound for the current inlier ratio.
int required_iterations(double inlier_ratio, int sample_size, double confidence, int cap) {
  if (confidence >= 1.0) return cap;
  const double all_inliers = std::pow(inlier_ratio, sample_size);
  if (all_inliers >= 1.0) return 0;
  if (all_inliers <= 0.0) return cap;
  const double k = std::log(1.0 - confidence) / std::log(1.0 - all_inliers);
  return static_cast<int>(std::min<double>(cap, std::ceil(k)));
}

// Shared hypothesize-and-verify loop; `draw(iteration, rng, sample)` fills a
// candidate-index sample and returns false when it could not.
template <typename Draw>
SacResult consensus_loop(std::span<const Correspondence> candidates, const ObjectMap& map,
                         const ObservationSet& obs, const SacConfig& config, Rng& rng, Draw draw) {
  check_config(config);
  const WeightedCorrespondenceSet pairs = make_weighted_set(candidates, map, obs, WeightMode::kNone);
  const int n = static_cast<int>(candidates.size());

  SacResult result;
  std::vector<int> best;
  int budget = config.max_iterations;
  std::vector<int> sample(static_cast<std::size_t>(config.min_sample));
  std::vector<WeightedPair> minimal(static_cast<std::size_t>(config.min_sample));
  int it = 0;
  for (; it < budget && n >= config.min_sample; ++it) {
    if (!draw(it, rng, sample)) continue;
    for (std::size_t k = 0; k < sample.size(); ++k) minimal[k] = pairs[static_cast<std::size_t>(sample[k])];
    Pose pose;
    try {
      pose = solve_weighted_pose(minimal).pose;
    } catch (const Error&) {
      continue;
    }
    std::vector<int> support;
    for (int i = 0; i < n; ++i) {
      const auto& p = pairs[static_cast<std::size_t>(i)];
      if ((p.map_position - pose * p.obs_position).norm() < config.inlier_threshold) support.push_back(i);
    }
    if (support.size() > best.size()) {
      best = std::move(support);
      result.best_iteration = it;
      const double ratio = static_cast<double>(best.size()) / n;
      budget = std::max(it + 1, required_iterations(ratio, config.min_sample, config.confidence,
                                                    config.max_iterations));
    }
  }
  result.iterations = it;
  if (best.size() < static_cast<std::size_t>(config.min_sample)) {
    throw NoConsensus("best consensus has " + std::to_string(best.size()) + " inliers");
  }

  std::vector<Correspondence> inliers;
  WeightedCorrespondenceSet refit;
  double score = 0.0;
  for (const int i : best) {
    inliers.push_back(candidates[static_cast<std::size_t>(i)]);
    refit.push_back(pairs[static_cast<std::size_t>(i)]);
    score += candidates[static_cast<std::size_t>(i)].similarity;
  }
  try {
    result.estimate = solve_weighted_pose(refit);
  } catch (const Error& e) {
    throw NoConsensus(std::string("consensus set is degenerate: ") + e.what());
  }
  result.estimate.hypothesis_score = score;
  result.estimate.inliers = std::move(inliers);
  result.inliers = std::move(best);
  return result;
}

}  // namespace

SacResult ransac_extract(std::span<const Correspondence> candidates, const ObjectMap& map,
                         const ObservationSet& obs, const SacConfig& config) {
  Rng rng(config.rng_seed);
  const int n = static_cast<int>(candidates.size());
  return consensus_loop(candidates, map, obs, config, rng, [&](int, Rng& g, std::vector<int>& sample) {
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
      for (auto& s : sample) s = pick(g);
      if (distinct_indices(candidates, sample)) return true;
    }
    return false;
  });
}

SacResult prosac_extract(std::span<const Correspondence> candidates, const ObjectMap& map,
                         const ObservationSet& obs, const SacConfig& config) {
  check_config(config);
  const int n = static_cast<int>(candidates.size());
  const int m = config.min_sample;
  std::vector<int> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return candidates[static_cast<std::size_t>(a)].similarity > candidates[static_cast<std::size_t>(b)].similarity;
  });
  std::vector<Correspondence> sorted;
  sorted.reserve(order.size());
  for (const int i : order) sorted.push_back(candidates[static_cast<std::size_t>(i)]);

  // Growth schedule: T_n is the expected number of samples drawn only from
  // the top n under uniform sampling with budget T_N; T'_n its integer counterpart.
  int pool = std::min(m, n);
  double t_n = config.max_iterations;
  for (int i = 0; i < m; ++i) t_n *= static_cast<double>(pool - i) / static_cast<double>(n - i);
  double t_n_prime = 1.0;

  Rng rng(config.rng_seed);
  SacResult result = consensus_loop(sorted, map, obs, config, rng, [&](int it, Rng& g, std::vector<int>& sample) {
    const double t = it + 1;
    while (t > t_n_prime && pool < n) {
      const double next = t_n * (pool + 1) / static_cast<double>(pool + 1 - m);
      t_n_prime += std::ceil(next - t_n);
      t_n = next;
      ++pool;
    }
    for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
      if (t_n_prime < t) {
        std::uniform_int_distribution<int> pick(0, pool - 1);
        for (auto& s : sample) s = pick(g);
      } else {
        // m - 1 from the top pool - 1 plus the newest member.
        std::uniform_int_distribution<int> pick(0, pool - 2);
        for (std::size_t k = 0; k + 1 < sample.size(); ++k) sample[k] = pick(g);
        sample.back() = pool - 1;
      }
      if (distinct_indices(sorted, sample)) return true;
    }
    return false;
  });

  for (auto& i : result.inliers) i = order[static_cast<std::size_t>(i)];
  std::sort(result.inliers.begin(), result.inliers.end());
  return result;
}

Extractor parse_extractor(std::string_view name) {
  if (name == "clique") return Extractor::kClique;
  if (name == "ransac") return Extractor::kRansac;
  if (name == "prosac") return Extractor::kProsac;
  throw std::invalid_argument("unknown extractor '" + std::string(name) + "'");
}

std::string_view to_string(Extractor extractor) {
  switch (extractor) {
    case Extractor::kClique:
      return "clique";
    case Extractor::kRansac:
      return "ransac";
    case Extractor::kProsac:
      return "prosac";
  }
  return "unknown";
}

}  // namespace cliqueloc
