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

#include "cliqueloc/io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <Eigen/SVD>

#include "cliqueloc/errors.hpp"
#include "json.hpp"

namespace cliqueloc::io {
namespace {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "embedding payload I/O assumes little endian");

// Rotations typed by hand rarely hold 1e-9 orthonormality; up to this
// deviation they are projected back onto SO(3) with a warning.
constexpr double kRepairableRotation = 1e-6;

class Reader {
 public:
  Reader(std::string source, std::vector<std::string>* warnings)
      : source_(std::move(source)), warnings_(warnings) {}

  [[noreturn]] void fail(const std::string& field, const std::string& what) const {
    throw ParseError(source_ + ":" + field, what);
  }

  void warn(const std::string& message) const {
    if (warnings_) warnings_->push_back(source_ + ": " + message);
  }

  void check_keys(const json& object, const std::string& field, std::initializer_list<std::string_view> known) const {
    for (const auto& [key, value] : object.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        warn("ignoring unknown field '" + (field.empty() ? key : field + "." + key) + "'");
      }
    }
  }

  const json& require(const json& object, const std::string& field, const char* key) const {
    if (!object.is_object()) fail(field, "expected an object");
    const auto it = object.find(key);
    if (it == object.end()) fail(field + "." + key, "missing required field");
    return *it;
  }

  double number(const json& value, const std::string& field) const {
    if (!value.is_number()) fail(field, "expected a number");
    const double d = value.get<double>();
    if (!std::isfinite(d)) fail(field, "non-finite number");
    return d;
  }

  std::int64_t integer(const json& value, const std::string& field) const {
    if (!value.is_number_integer()) fail(field, "expected an integer");
    return value.get<std::int64_t>();
  }

  std::string string(const json& value, const std::string& field) const {
    if (!value.is_string()) fail(field, "expected a string");
    return value.get<std::string>();
  }

  template <int N>
  Eigen::Matrix<double, N, 1> vector(const json& value, const std::string& field) const {
    if (!value.is_array() || value.size() != N) fail(field, "expected an array of " + std::to_string(N) + " numbers");
    Eigen::Matrix<double, N, 1> v;
    for (int i = 0; i < N; ++i) v[i] = number(value[i], field + "[" + std::to_string(i) + "]");
    return v;
  }

  Eigen::Matrix3d rotation(const json& value, const std::string& field) const {
    const Eigen::Matrix<double, 9, 1> flat = vector<9>(value, field);
    Eigen::Matrix3d r;
    r << flat[0], flat[1], flat[2], flat[3], flat[4], flat[5], flat[6], flat[7], flat[8];
    if (is_rotation(r)) return r;
    if (!is_rotation(r, kRepairableRotation)) fail(field, "not a rotation matrix");
    const Eigen::JacobiSVD<Eigen::Matrix3d> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    warn(field + " re-orthonormalized");
    return svd.matrixU() * svd.matrixV().transpose();
  }

  EllipsoidLandmark landmark(const json& value, const std::string& field) const {
    if (!value.is_object()) fail(field, "expected an object");
    check_keys(value, field,
               {"id", "position", "orientation", "axis_lengths", "class_id", "text_label", "embedding_id",
                "gt_map_id"});
    EllipsoidLandmark lm;
    lm.id = integer(require(value, field, "id"), field + ".id");
    lm.position = vector<3>(require(value, field, "position"), field + ".position");
    lm.orientation = rotation(require(value, field, "orientation"), field + ".orientation");
    lm.axis_lengths = vector<3>(require(value, field, "axis_lengths"), field + ".axis_lengths");
    if ((lm.axis_lengths.array() <= 0.0).any()) fail(field + ".axis_lengths", "must be strictly positive");
    const std::int64_t cls = integer(require(value, field, "class_id"), field + ".class_id");
    if (cls < 0 || cls > std::numeric_limits<int>::max()) fail(field + ".class_id", "out of range");
    lm.class_id = static_cast<int>(cls);
    if (const auto it = value.find("text_label"); it != value.end() && !it->is_null()) {
      lm.text_label = string(*it, field + ".text_label");
    }
    if (const auto it = value.find("embedding_id"); it != value.end() && !it->is_null()) {
      lm.embedding_id = string(*it, field + ".embedding_id");
    }
    if (const auto it = value.find("gt_map_id"); it != value.end() && !it->is_null()) {
      lm.gt_map_id = integer(*it, field + ".gt_map_id");
    }
    return lm;
  }

  std::vector<EllipsoidLandmark> landmarks(const json& root) const {
    const json& list = require(root, "", "landmarks");
    if (!list.is_array()) fail("landmarks", "expected an array");
    std::vector<EllipsoidLandmark> out;
    std::set<std::int64_t> seen;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string field = "landmarks[" + std::to_string(i) + "]";
      out.push_back(landmark(list[i], field));
      if (!seen.insert(out.back().id).second) fail(field + ".id", "duplicate id " + std::to_string(out.back().id));
    }
    return out;
  }

  json parse(std::string_view text) const {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      const auto upto = std::min<std::size_t>(e.byte, text.size());
      const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
      fail("line " + std::to_string(line), e.what());
    }
  }

 private:
  std::string source_;
  std::vector<std::string>* warnings_;
};

json rotation_json(const Eigen::Matrix3d& r) {
  json a = json::array();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) a.push_back(r(i, j));
  }
  return a;
}

json vector_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

json landmark_json(const EllipsoidLandmark& lm) {
  json j;
  j["id"] = lm.id;
  j["position"] = vector_json(lm.position);
  j["orientation"] = rotation_json(lm.orientation);
  j["axis_lengths"] = vector_json(lm.axis_lengths);
  j["class_id"] = lm.class_id;
  if (lm.text_label) j["text_label"] = *lm.text_label;
  if (lm.embedding_id) j["embedding_id"] = *lm.embedding_id;
  if (lm.gt_map_id) j["gt_map_id"] = *lm.gt_map_id;
  return j;
}

json landmarks_json(const std::vector<EllipsoidLandmark>& landmarks) {
  json a = json::array();
  for (const auto& lm : landmarks) a.push_back(landmark_json(lm));
  return a;
}

json correspondence_json(const Correspondence& c, const ObjectMap& map, const ObservationSet& obs) {
  return {{"map_index", c.map_index},
          {"obs_index", c.obs_index},
          {"map_id", map.landmarks[static_cast<std::size_t>(c.map_index)].id},
          {"obs_id", obs.objects[static_cast<std::size_t>(c.obs_index)].id},
          {"similarity", c.similarity}};
}

}  // namespace

ObjectMap parse_map(std::string_view text, const std::string& source, std::vector<std::string>* warnings) {
  const Reader reader(source, warnings);
  const json root = reader.parse(text);
  if (!root.is_object()) reader.fail("", "expected a JSON object");
  reader.check_keys(root, "", {"frame_id", "landmarks"});
  ObjectMap map;
  map.frame_id = reader.string(reader.require(root, "", "frame_id"), "frame_id");
  map.landmarks = reader.landmarks(root);
  return map;
}

ObservationSet parse_observation(std::string_view text, const std::string& source,
                                 std::vector<std::string>* warnings) {
  const Reader reader(source, warnings);
  const json root = reader.parse(text);
  if (!root.is_object()) reader.fail("", "expected a JSON object");
  reader.check_keys(root, "", {"frame_id", "landmarks", "gt_pose"});
  ObservationSet obs;
  obs.frame_id = reader.string(reader.require(root, "", "frame_id"), "frame_id");
  obs.objects = reader.landmarks(root);
  if (const auto it = root.find("gt_pose"); it != root.end() && !it->is_null()) {
    reader.check_keys(*it, "gt_pose", {"rotation", "translation"});
    Pose pose;
    pose.rotation = reader.rotation(reader.require(*it, "gt_pose", "rotation"), "gt_pose.rotation");
    pose.translation = reader.vector<3>(reader.require(*it, "gt_pose", "translation"), "gt_pose.translation");
    obs.source_pose_gt = pose;
  }
  return obs;
}

std::string to_json(const ObjectMap& map) {
  json root;
  root["frame_id"] = map.frame_id;
  root["landmarks"] = landmarks_json(map.landmarks);
  return root.dump(2) + "\n";
}

std::string to_json(const ObservationSet& obs) {
  json root;
  root["frame_id"] = obs.frame_id;
  root["landmarks"] = landmarks_json(obs.objects);
  if (obs.source_pose_gt) {
    root["gt_pose"] = {{"rotation", rotation_json(obs.source_pose_gt->rotation)},
                       {"translation", vector_json(obs.source_pose_gt->translation)}};
  }
  return root.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

ObjectMap load_map(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  return parse_map(read_file(path), path.string(), warnings);
}

ObservationSet load_observation(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  return parse_observation(read_file(path), path.string(), warnings);
}

void save_map(const std::filesystem::path& path, const ObjectMap& map) { write_file(path, to_json(map)); }

void save_observation(const std::filesystem::path& path, const ObservationSet& obs) {
  write_file(path, to_json(obs));
}

std::filesystem::path embedding_payload_path(const std::filesystem::path& header) {
  std::filesystem::path payload = header;
  payload.replace_extension(".bin");
  return payload;
}

EmbeddingTable load_embeddings(const std::filesystem::path& header) {
  const Reader reader(header.string(), nullptr);
  const json root = reader.parse(read_file(header));
  const std::int64_t dim = reader.integer(reader.require(root, "", "dim"), "dim");
  const std::int64_t count = reader.integer(reader.require(root, "", "count"), "count");
  const json& id_list = reader.require(root, "", "ids");
  if (dim < 1) reader.fail("dim", "must be positive");
  if (count < 0) reader.fail("count", "must be non-negative");
  if (!id_list.is_array() || static_cast<std::int64_t>(id_list.size()) != count) {
    reader.fail("ids", "expected an array of `count` ids");
  }
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < id_list.size(); ++i) {
    const std::string field = "ids[" + std::to_string(i) + "]";
    // Numeric ids are accepted and keyed by their decimal form.
    ids.push_back(id_list[i].is_number_integer() ? std::to_string(id_list[i].get<std::int64_t>())
                                                 : reader.string(id_list[i], field));
  }

  const std::filesystem::path payload_path = embedding_payload_path(header);
  const std::string payload = read_file(payload_path);
  const std::size_t expected = static_cast<std::size_t>(count) * static_cast<std::size_t>(dim) * sizeof(float);
  if (payload.size() != expected) {
    throw ParseError(payload_path.string(), "payload has " + std::to_string(payload.size()) +
                                                " bytes, expected " + std::to_string(expected));
  }
  std::vector<float> data(static_cast<std::size_t>(count) * static_cast<std::size_t>(dim));
  std::memcpy(data.data(), payload.data(), expected);
  try {
    return EmbeddingTable(static_cast<int>(dim), std::move(ids), std::move(data));
  } catch (const std::invalid_argument& e) {
    throw ParseError(header.string(), e.what());
  }
}

void save_embeddings(const std::filesystem::path& header, const EmbeddingTable& table) {
  json root;
  root["dim"] = table.dim();
  root["count"] = table.size();
  root["ids"] = table.ids();
  write_file(header, root.dump(2) + "\n");
  const auto& data = table.data();
  write_file(embedding_payload_path(header),
             std::string_view(reinterpret_cast<const char*>(data.data()), data.size() * sizeof(float)));
}

std::string to_json(const LocalizationResult& result, const ObjectMap& map, const ObservationSet& obs) {
  json estimates = json::array();
  for (std::size_t r = 0; r < result.estimates.size(); ++r) {
    const auto& e = result.estimates[r];
    json inliers = json::array();
    for (const auto& c : e.inliers) inliers.push_back(correspondence_json(c, map, obs));
    estimates.push_back({{"rank", r + 1},
                         {"rotation", rotation_json(e.pose.rotation)},
                         {"translation", vector_json(e.pose.translation)},
                         {"residual", e.weighted_rms_residual},
                         {"score", e.hypothesis_score},
                         {"inliers", inliers}});
  }
  json root;
  root["estimates"] = estimates;
  root["num_candidates"] = result.candidates.size();
  root["num_cliques"] = result.num_cliques;
  root["clique_limit_exceeded"] = result.clique_limit_exceeded;
  root["missing_embedding_pairs"] = result.missing_embedding_pairs;
  root["diagnostics"] = result.diagnostics;
  return root.dump(2) + "\n";
}

std::string hypotheses_to_json(std::span<const CliqueHypothesis> hypotheses,
                               std::span<const Correspondence> candidates) {
  json list = json::array();
  for (const auto& h : hypotheses) {
    json members = json::array();
    for (const int i : h.members) {
      const auto& c = candidates[static_cast<std::size_t>(i)];
      members.push_back({{"candidate", i},
                         {"map_index", c.map_index},
                         {"obs_index", c.obs_index},
                         {"similarity", c.similarity}});
    }
    list.push_back({{"score", h.score}, {"size", h.members.size()}, {"members", members}});
  }
  return json({{"hypotheses", list}}).dump(2) + "\n";
}

}  // namespace cliqueloc::io
