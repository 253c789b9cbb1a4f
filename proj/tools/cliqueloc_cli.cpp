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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cliqueloc/errors.hpp"
#include "cliqueloc/harness.hpp"
#include "cliqueloc/io.hpp"
#include "cliqueloc/parallel.hpp"
#include "cliqueloc/pipeline.hpp"

namespace fs = std::filesystem;
using namespace cliqueloc;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kNoSolution = 3 };

struct PipelineFlags {
  std::string matching = "adaptive";
  std::string extractor = "clique";
  std::string weights = "both";
  std::string walk = "walks";
  PipelineConfig config;
  int threads = 0;

  void add(CLI::App* app) {
    app->add_option("--matching", matching, "one_to_one | knn | adaptive")
        ->check(CLI::IsMember({"one_to_one", "knn", "adaptive"}));
    app->add_option("--k", config.matching.k, "neighbors kept by knn matching")->check(CLI::PositiveNumber);
    app->add_option("--top-m", config.matching.top_m, "adaptive matching pool (0 = N/4)")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--d-adj", config.d_adj, "semantic graph radius [m]")->check(CLI::PositiveNumber);
    app->add_option("--d-comp", config.d_comp, "compatibility tolerance [m]")->check(CLI::PositiveNumber);
    app->add_option("--alpha", config.alpha, "embedding share of the similarity")->check(CLI::Range(0.0, 1.0));
    app->add_option("--steps", config.steps, "nodes per histogram walk")->check(CLI::PositiveNumber);
    app->add_option("--walks", walk, "walks | simple_paths")->check(CLI::IsMember({"walks", "simple_paths"}));
    app->add_option("--top-n", config.top_n, "hypotheses kept")->check(CLI::PositiveNumber);
    app->add_option("--max-cliques", config.max_cliques, "clique enumeration cap")->check(CLI::PositiveNumber);
    app->add_option("--extractor", extractor, "clique | ransac | prosac")
        ->check(CLI::IsMember({"clique", "ransac", "prosac"}));
    app->add_option("--weights", weights, "none | sim | com | both")
        ->check(CLI::IsMember({"none", "sim", "com", "both"}));
    app->add_option("--sac-iterations", config.sac.max_iterations)->check(CLI::PositiveNumber);
    app->add_option("--sac-threshold", config.sac.inlier_threshold)->check(CLI::PositiveNumber);
    app->add_option("--seed", config.seed);
    app->add_option("--threads", threads, "worker threads (0 = default)")->check(CLI::NonNegativeNumber);
  }

  PipelineConfig resolve() const {
    PipelineConfig c = config;
    c.matching.strategy = parse_matching_strategy(matching);
    c.extractor = parse_extractor(extractor);
    c.weights = parse_weight_mode(weights);
    c.walk_mode = walk == "walks" ? WalkMode::kWalks : WalkMode::kSimplePaths;
    return c;
  }
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    io::write_file(path, text);
  }
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

int run_synth(const std::string& suite, std::uint64_t seed, int index, int landmarks, const fs::path& out) {
  SceneSpec spec = suite_spec(suite);
  if (landmarks > 0) spec.n_landmarks = landmarks;
  spec.rng_seed = sub_seed(seed, suite + "/" + std::to_string(index));
  const Scene scene = generate_scene(spec);
  fs::create_directories(out);
  io::save_map(out / "map.json", scene.map);
  io::save_observation(out / "observation.json", scene.observation);
  io::save_embeddings(out / "embeddings.json", scene.embeddings);
  std::cerr << "wrote " << scene.map.size() << " landmarks, " << scene.observation.size()
            << " observed objects to " << out << '\n';
  return kOk;
}

nlohmann::json evaluation_json(const LocalizationResult& result, const ObservationSet& obs, const ObjectMap& map) {
  nlohmann::json ev;
  const Pose& gt = *obs.source_pose_gt;
  const PoseScore pose = evaluate_pose(result.estimates, gt);
  ev["translation_error"] = pose.translation_error;
  ev["rotation_error"] = pose.rotation_error;
  for (std::size_t n : {1, 3, 5}) ev["success_top" + std::to_string(n)] = pose.success_at(n);

  std::vector<Correspondence> truth;
  for (std::size_t k = 0; k < obs.objects.size(); ++k) {
    const auto& id = obs.objects[k].gt_map_id;
    if (!id) continue;
    if (const auto m = map.index_of(*id)) truth.push_back({static_cast<int>(*m), static_cast<int>(k), 0.0});
  }
  if (!truth.empty() && !result.estimates.empty()) {
    const MatchingScore m = evaluate_matching(result.estimates.front().inliers, truth);
    ev["precision"] = m.precision;
    ev["recall"] = m.recall;
  }
  return ev;
}

int run_localize(const std::string& map_path, const std::string& obs_path, const std::string& emb_path,
                 const PipelineConfig& config, const std::string& out, const std::string& dump) {
  std::vector<std::string> warnings;
  const ObjectMap map = io::load_map(map_path, &warnings);
  const ObservationSet obs = io::load_observation(obs_path, &warnings);
  print_warnings(warnings);
  const EmbeddingTable embeddings = emb_path.empty() ? EmbeddingTable{} : io::load_embeddings(emb_path);

  const LocalizationResult result = localize(map, obs, embeddings, config);
  for (const auto& d : result.diagnostics) std::cerr << "note: " << d << '\n';
  if (!dump.empty()) io::write_file(dump, io::hypotheses_to_json(result.hypotheses, result.candidates));

  nlohmann::json doc = nlohmann::json::parse(io::to_json(result, map, obs));
  if (obs.source_pose_gt) doc["evaluation"] = evaluation_json(result, obs, map);
  write_output(out, doc.dump(2) + "\n");
  return kOk;
}

template <typename T, typename Parse>
std::vector<T> parse_all(const std::vector<std::string>& names, Parse parse) {
  std::vector<T> out;
  for (const auto& n : names) out.push_back(parse(n));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Object-map global localization with maximal-clique inlier extraction"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "write a synthetic scene (map, observation, embeddings)");
  std::string suite = "noiseless";
  std::uint64_t synth_seed = 0;
  int index = 0, landmarks = 0;
  std::string synth_out = "scene";
  synth->add_option("--suite", suite)->check(CLI::IsMember(suite_names()));
  synth->add_option("--seed", synth_seed);
  synth->add_option("--index", index, "scene number within the suite")->check(CLI::NonNegativeNumber);
  synth->add_option("--landmarks", landmarks, "override the landmark count")->check(CLI::NonNegativeNumber);
  synth->add_option("--out", synth_out, "output directory");

  // localize
  auto* loc = app.add_subcommand("localize", "localize an observation against a map");
  std::string map_path, obs_path, emb_path, loc_out, dump;
  PipelineFlags loc_flags;
  loc->add_option("--map", map_path)->required()->check(CLI::ExistingFile);
  loc->add_option("--obs", obs_path)->required()->check(CLI::ExistingFile);
  loc->add_option("--embeddings", emb_path, "embedding header (.json)")->check(CLI::ExistingFile);
  loc->add_option("--out", loc_out, "result JSON (default stdout)");
  loc->add_option("--dump-hypotheses", dump, "write ranked clique hypotheses to this file");
  loc_flags.add(loc);

  // ablate
  auto* ablate = app.add_subcommand("ablate", "run an ablation grid on synthetic suites");
  AblationGrid grid;
  std::vector<std::string> extractors{"clique"}, weights{"both"}, matchings{"adaptive"};
  std::string ablate_out;
  PipelineFlags ablate_flags;
  ablate->add_option("--suites", grid.suites)->check(CLI::IsMember(suite_names()));
  ablate->add_option("--alphas", grid.alphas)->check(CLI::Range(0.0, 1.0));
  ablate->add_option("--extractors", extractors)->check(CLI::IsMember({"clique", "ransac", "prosac"}));
  ablate->add_option("--weight-modes", weights)->check(CLI::IsMember({"none", "sim", "com", "both"}));
  ablate->add_option("--matchings", matchings)->check(CLI::IsMember({"one_to_one", "knn", "adaptive"}));
  ablate->add_option("--scenes", grid.scenes)->check(CLI::PositiveNumber);
  ablate->add_option("--stochastic-trials", grid.stochastic_trials)->check(CLI::PositiveNumber);
  ablate->add_option("--outlier-rate", grid.candidate_outlier_rate, "replace matching by contaminated ground truth")
      ->check(CLI::Range(0.0, 0.95));
  ablate->add_option("--out", ablate_out, "CSV output (table goes to stdout)");
  ablate_flags.add(ablate);

  // bench
  auto* bench = app.add_subcommand("bench", "latency against map size on duplicated scenes");
  std::vector<int> sizes{50, 100, 200, 300, 400};
  int repeats = 5;
  std::uint64_t bench_seed = 0;
  std::string bench_out;
  PipelineFlags bench_flags;
  bench->add_option("--sizes", sizes)->check(CLI::PositiveNumber);
  bench->add_option("--repeats", repeats)->check(CLI::PositiveNumber);
  bench->add_option("--scene-seed", bench_seed);
  bench->add_option("--out", bench_out, "CSV output (table goes to stdout)");
  bench_flags.add(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*synth) return run_synth(suite, synth_seed, index, landmarks, synth_out);
    if (*loc) {
      set_num_threads(loc_flags.threads);
      return run_localize(map_path, obs_path, emb_path, loc_flags.resolve(), loc_out, dump);
    }
    if (*ablate) {
      set_num_threads(ablate_flags.threads);
      grid.seed = ablate_flags.config.seed;
      grid.extractors = parse_all<Extractor>(extractors, parse_extractor);
      grid.weights = parse_all<WeightMode>(weights, parse_weight_mode);
      grid.matchings = parse_all<MatchingStrategy>(matchings, parse_matching_strategy);
      const auto rows = run_ablation(grid, ablate_flags.resolve());
      std::cout << ablation_table(rows);
      if (!ablate_out.empty()) io::write_file(ablate_out, ablation_csv(rows));
      return kOk;
    }
    if (*bench) {
      set_num_threads(bench_flags.threads);
      SceneSpec spec = suite_spec("noiseless");
      spec.rng_seed = bench_seed;
      const auto rows = benchmark_scalability(sizes, spec, bench_flags.resolve(), repeats);
      std::cout << scalability_csv(rows);
      if (rows.size() >= 3) {
        const GrowthFit fit = fit_growth(rows);
        std::cout << "r2_linear," << fit.r2_linear << "\nr2_quadratic," << fit.r2_quadratic << '\n';
      }
      if (!bench_out.empty()) io::write_file(bench_out, scalability_csv(rows));
      return kOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const MissingEmbedding& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const EmptyHypothesisSet& e) {
    std::cerr << "no solution: " << e.what() << '\n';
    return kNoSolution;
  } catch (const NoSolvableHypothesis& e) {
    std::cerr << "no solution: " << e.what() << '\n';
    return kNoSolution;
  } catch (const NoConsensus& e) {
    std::cerr << "no solution: " << e.what() << '\n';
    return kNoSolution;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}
