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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cliqueloc/errors.hpp"
#include "cliqueloc/harness.hpp"
#include "cliqueloc/io.hpp"
#include "cliqueloc/parallel.hpp"
#include "cliqueloc/pipeline.hpp"

namespace py = pybind11;
using namespace cliqueloc;

namespace {

std::vector<Eigen::Vector3d> rows_to_points(const Eigen::Ref<const Eigen::MatrixXd>& points) {
  if (points.cols() != 3) throw std::invalid_argument("points must have shape (n, 3)");
  std::vector<Eigen::Vector3d> out;
  out.reserve(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) out.emplace_back(points.row(i).transpose());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "cliqueloc core bindings";
  m.attr("__version__") = "0.1.0";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DegenerateCloud>(m, "DegenerateCloud", error);
  py::register_exception<DegenerateGeometry>(m, "DegenerateGeometry", error);
  py::register_exception<InsufficientPairs>(m, "InsufficientPairs", error);
  py::register_exception<EmptyHypothesisSet>(m, "EmptyHypothesisSet", error);
  py::register_exception<NoSolvableHypothesis>(m, "NoSolvableHypothesis", error);
  py::register_exception<NoConsensus>(m, "NoConsensus", error);
  py::register_exception<MissingEmbedding>(m, "MissingEmbedding", error);
  py::register_exception<ParseError>(m, "ParseError", error);

  py::class_<Pose>(m, "Pose")
      .def(py::init<>())
      .def(py::init([](const Eigen::Matrix3d& r, const Eigen::Vector3d& t) { return Pose{r, t}; }),
           py::arg("rotation"), py::arg("translation"))
      .def_readwrite("rotation", &Pose::rotation)
      .def_readwrite("translation", &Pose::translation)
      .def("inverse", &Pose::inverse)
      .def("apply", [](const Pose& p, const Eigen::Vector3d& x) { return Eigen::Vector3d(p * x); })
      .def("__mul__", [](const Pose& a, const Pose& b) { return a * b; });

  py::class_<EllipsoidLandmark>(m, "EllipsoidLandmark")
      .def(py::init<>())
      .def_readwrite("id", &EllipsoidLandmark::id)
      .def_readwrite("position", &EllipsoidLandmark::position)
      .def_readwrite("orientation", &EllipsoidLandmark::orientation)
      .def_readwrite("axis_lengths", &EllipsoidLandmark::axis_lengths)
      .def_readwrite("class_id", &EllipsoidLandmark::class_id)
      .def_readwrite("text_label", &EllipsoidLandmark::text_label)
      .def_readwrite("embedding_id", &EllipsoidLandmark::embedding_id)
      .def_readwrite("gt_map_id", &EllipsoidLandmark::gt_map_id);

  py::class_<ObjectMap>(m, "ObjectMap")
      .def(py::init<>())
      .def_readwrite("frame_id", &ObjectMap::frame_id)
      .def_readwrite("landmarks", &ObjectMap::landmarks)
      .def("__len__", &ObjectMap::size);

  py::class_<ObservationSet>(m, "ObservationSet")
      .def(py::init<>())
      .def_readwrite("frame_id", &ObservationSet::frame_id)
      .def_readwrite("objects", &ObservationSet::objects)
      .def_readwrite("source_pose_gt", &ObservationSet::source_pose_gt)
      .def("__len__", &ObservationSet::size);

  py::class_<EmbeddingTable>(m, "EmbeddingTable")
      .def(py::init<>())
      .def(py::init<int, std::vector<std::string>, std::vector<float>>(), py::arg("dim"), py::arg("ids"),
           py::arg("data"))
      .def_static("normalized", &EmbeddingTable::normalized, py::arg("dim"), py::arg("ids"), py::arg("data"))
      .def_property_readonly("dim", &EmbeddingTable::dim)
      .def_property_readonly("ids", &EmbeddingTable::ids)
      .def("__len__", &EmbeddingTable::size)
      .def("vector", [](const EmbeddingTable& t, const std::string& id) -> std::optional<std::vector<float>> {
        const auto row = t.find(id);
        if (!row) return std::nullopt;
        return std::vector<float>(row->begin(), row->end());
      });

  m.def("fit_ellipsoid",
        [](const Eigen::Ref<const Eigen::MatrixXd>& points) { return fit_ellipsoid(rows_to_points(points)); },
        py::arg("points"), "Oriented ellipsoid fitted to an (n, 3) point array.");

  py::class_<SemanticHistogram>(m, "SemanticHistogram")
      .def_readonly("num_classes", &SemanticHistogram::num_classes)
      .def_readonly("steps", &SemanticHistogram::steps)
      .def_readonly("bins", &SemanticHistogram::bins)
      .def("dense", &SemanticHistogram::dense)
      .def("dot", &SemanticHistogram::dot);

  m.def(
      "semantic_histograms",
      [](const std::vector<EllipsoidLandmark>& landmarks, double d_adj, int steps, int num_classes,
         bool simple_paths) {
        HistogramParams params;
        params.steps = steps;
        params.num_classes = num_classes;
        params.mode = simple_paths ? WalkMode::kSimplePaths : WalkMode::kWalks;
        return semantic_histograms(build_semantic_graph(landmarks, d_adj), params);
      },
      py::arg("landmarks"), py::arg("d_adj") = kDefaultAdjacencyDistance,
      py::arg("steps") = kDefaultHistogramSteps, py::arg("num_classes"), py::arg("simple_paths") = false);

  py::class_<Correspondence>(m, "Correspondence")
      .def(py::init([](int map_index, int obs_index, double similarity) {
             return Correspondence{map_index, obs_index, similarity};
           }),
           py::arg("map_index"), py::arg("obs_index"), py::arg("similarity") = 0.0)
      .def_readwrite("map_index", &Correspondence::map_index)
      .def_readwrite("obs_index", &Correspondence::obs_index)
      .def_readwrite("similarity", &Correspondence::similarity)
      .def("__eq__", [](const Correspondence& a, const Correspondence& b) { return a == b; })
      .def("__repr__", [](const Correspondence& c) {
        return "Correspondence(" + std::to_string(c.map_index) + ", " + std::to_string(c.obs_index) + ", " +
               std::to_string(c.similarity) + ")";
      });

  auto matrix = [](const Eigen::Ref<const Eigen::MatrixXd>& s) {
    SimilarityMatrix out;
    out.values = s;
    return out;
  };
  m.def("match_one_to_one", [matrix](const Eigen::MatrixXd& s) { return match_one_to_one(matrix(s)); },
        py::arg("similarity"));
  m.def("match_knn", [matrix](const Eigen::MatrixXd& s, int k) { return match_knn(matrix(s), k); },
        py::arg("similarity"), py::arg("k") = kDefaultKnn);
  m.def("match_adaptive", [matrix](const Eigen::MatrixXd& s, int top_m) { return match_adaptive(matrix(s), top_m); },
        py::arg("similarity"), py::arg("top_m"));

  py::class_<CliqueHypothesis>(m, "CliqueHypothesis")
      .def_readonly("members", &CliqueHypothesis::members)
      .def_readonly("score", &CliqueHypothesis::score);

  m.def(
      "maximal_cliques",
      [](std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
         std::optional<std::vector<double>> scores, std::size_t max_cliques) {
        CompatibilityGraph g(n);
        for (const auto& [i, j] : edges) {
          if (i >= n || j >= n) throw std::invalid_argument("edge endpoint out of range");
          g.connect(i, j);
        }
        const std::vector<double> s = scores ? *scores : std::vector<double>(n, 1.0);
        if (s.size() != n) throw std::invalid_argument("need one score per node");
        const CliqueEnumeration e = enumerate_maximal_cliques(g, s, max_cliques);
        return py::make_tuple(e.cliques, e.limit_exceeded);
      },
      py::arg("n"), py::arg("edges"), py::arg("scores") = py::none(), py::arg("max_cliques") = kDefaultMaxCliques,
      "Ranked maximal cliques of an undirected graph and the truncation flag.");

  py::class_<PoseEstimate>(m, "PoseEstimate")
      .def_readonly("pose", &PoseEstimate::pose)
      .def_readonly("weighted_rms_residual", &PoseEstimate::weighted_rms_residual)
      .def_readonly("hypothesis_score", &PoseEstimate::hypothesis_score)
      .def_readonly("inliers", &PoseEstimate::inliers);

  m.def(
      "solve_weighted_pose",
      [](const Eigen::Ref<const Eigen::MatrixXd>& map_points, const Eigen::Ref<const Eigen::MatrixXd>& obs_points,
         std::optional<std::vector<double>> weights) {
        const auto a = rows_to_points(map_points);
        const auto b = rows_to_points(obs_points);
        if (a.size() != b.size()) throw std::invalid_argument("point arrays differ in length");
        if (weights && weights->size() != a.size()) throw std::invalid_argument("need one weight per pair");
        std::vector<WeightedPair> pairs;
        for (std::size_t i = 0; i < a.size(); ++i) pairs.push_back({a[i], b[i], weights ? (*weights)[i] : 1.0, 1.0});
        return solve_weighted_pose(pairs);
      },
      py::arg("map_points"), py::arg("obs_points"), py::arg("weights") = py::none(),
      "Pose with map = R obs + t minimizing the weighted squared residual.");

  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_readwrite("d_adj", &PipelineConfig::d_adj)
      .def_readwrite("d_comp", &PipelineConfig::d_comp)
      .def_readwrite("alpha", &PipelineConfig::alpha)
      .def_readwrite("steps", &PipelineConfig::steps)
      .def_readwrite("num_classes", &PipelineConfig::num_classes)
      .def_readwrite("top_n", &PipelineConfig::top_n)
      .def_readwrite("max_cliques", &PipelineConfig::max_cliques)
      .def_readwrite("seed", &PipelineConfig::seed)
      .def_property(
          "matching", [](const PipelineConfig& c) { return std::string(to_string(c.matching.strategy)); },
          [](PipelineConfig& c, const std::string& s) { c.matching.strategy = parse_matching_strategy(s); })
      .def_property(
          "k", [](const PipelineConfig& c) { return c.matching.k; }, [](PipelineConfig& c, int k) { c.matching.k = k; })
      .def_property(
          "top_m", [](const PipelineConfig& c) { return c.matching.top_m; },
          [](PipelineConfig& c, int v) { c.matching.top_m = v; })
      .def_property(
          "extractor", [](const PipelineConfig& c) { return std::string(to_string(c.extractor)); },
          [](PipelineConfig& c, const std::string& s) { c.extractor = parse_extractor(s); })
      .def_property(
          "weights", [](const PipelineConfig& c) { return std::string(to_string(c.weights)); },
          [](PipelineConfig& c, const std::string& s) { c.weights = parse_weight_mode(s); });

  py::class_<LocalizationResult>(m, "LocalizationResult")
      .def_readonly("estimates", &LocalizationResult::estimates)
      .def_readonly("candidates", &LocalizationResult::candidates)
      .def_readonly("hypotheses", &LocalizationResult::hypotheses)
      .def_readonly("num_cliques", &LocalizationResult::num_cliques)
      .def_readonly("clique_limit_exceeded", &LocalizationResult::clique_limit_exceeded)
      .def_readonly("missing_embedding_pairs", &LocalizationResult::missing_embedding_pairs)
      .def_readonly("diagnostics", &LocalizationResult::diagnostics)
      .def_readonly("latency_seconds", &LocalizationResult::latency_seconds);

  m.def("localize", &localize, py::arg("map"), py::arg("observation"), py::arg("embeddings") = EmbeddingTable{},
        py::arg("config") = PipelineConfig{}, py::call_guard<py::gil_scoped_release>());

  py::class_<Scene>(m, "Scene")
      .def_readonly("map", &Scene::map)
      .def_readonly("observation", &Scene::observation)
      .def_readonly("embeddings", &Scene::embeddings)
      .def_readonly("ground_truth", &Scene::ground_truth)
      .def_readonly("gt_pose", &Scene::gt_pose)
      .def_readonly("alternate_pose", &Scene::alternate_pose);

  m.def("suite_names", &suite_names);
  m.def("suite_scene", &suite_scene, py::arg("suite"), py::arg("seed"), py::arg("index"),
        "Synthetic scene number `index` of a named suite.");

  py::class_<MatchingScore>(m, "MatchingScore")
      .def_readonly("precision", &MatchingScore::precision)
      .def_readonly("recall", &MatchingScore::recall)
      .def_readonly("empty_prediction", &MatchingScore::empty_prediction);
  m.def("evaluate_matching", [](const std::vector<Correspondence>& p, const std::vector<Correspondence>& g) {
    return evaluate_matching(p, g);
  });
  m.def("rotation_error", &rotation_error);

  m.def("set_num_threads", &set_num_threads);
  m.def("num_threads", &num_threads);

  auto io_mod = m.def_submodule("io", "file formats");
  io_mod.def("load_map", [](const std::filesystem::path& p) { return io::load_map(p); });
  io_mod.def("load_observation", [](const std::filesystem::path& p) { return io::load_observation(p); });
  io_mod.def("load_embeddings", &io::load_embeddings);
  io_mod.def("save_map", &io::save_map);
  io_mod.def("save_observation", &io::save_observation);
  io_mod.def("save_embeddings", &io::save_embeddings);
  io_mod.def("result_json", [](const LocalizationResult& r, const ObjectMap& map, const ObservationSet& obs) {
    return io::to_json(r, map, obs);
  });
}
