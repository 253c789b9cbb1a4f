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

#include <filesystem>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cliqueloc/errors.hpp"
#include "cliqueloc/harness.hpp"
#include "cliqueloc/io.hpp"

#ifndef CLIQUELOC_FIXTURE_DIR
#error "CLIQUELOC_FIXTURE_DIR must be defined"
#endif

using namespace cliqueloc;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cliqueloc_io_" + name);
  fs::create_directories(p);
  return p;
}

void expect_same(const EllipsoidLandmark& a, const EllipsoidLandmark& b) {
  EXPECT_EQ(a.id, b.id);
  EXPECT_EQ(a.position, b.position);
  EXPECT_EQ(a.orientation, b.orientation);
  EXPECT_EQ(a.axis_lengths, b.axis_lengths);
  EXPECT_EQ(a.class_id, b.class_id);
  EXPECT_EQ(a.text_label, b.text_label);
  EXPECT_EQ(a.embedding_id, b.embedding_id);
  EXPECT_EQ(a.gt_map_id, b.gt_map_id);
}

const char* kMinimalMap = R"({
  "frame_id": "map",
  "landmarks": [
    {"id": 1, "position": [0, 0, 0], "orientation": [1,0,0, 0,1,0, 0,0,1],
     "axis_lengths": [0.5, 0.5, 0.5], "class_id": 2, "text_label": "chair"}
  ]
})";

}  // namespace

TEST(Io, MapRoundTripFieldForField) {
  const Scene s = suite_scene("partial", 4, 2);
  const ObjectMap parsed = io::parse_map(io::to_json(s.map));
  ASSERT_EQ(parsed.size(), s.map.size());
  EXPECT_EQ(parsed.frame_id, s.map.frame_id);
  for (std::size_t i = 0; i < parsed.size(); ++i) expect_same(parsed.landmarks[i], s.map.landmarks[i]);
  EXPECT_EQ(io::to_json(parsed), io::to_json(s.map));
}

TEST(Io, ObservationRoundTripWithGroundTruth) {
  const Scene s = suite_scene("noisy", 4, 2);
  const ObservationSet parsed = io::parse_observation(io::to_json(s.observation));
  ASSERT_EQ(parsed.size(), s.observation.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) expect_same(parsed.objects[i], s.observation.objects[i]);
  ASSERT_TRUE(parsed.source_pose_gt);
  EXPECT_EQ(parsed.source_pose_gt->rotation, s.gt_pose.rotation);
  EXPECT_EQ(parsed.source_pose_gt->translation, s.gt_pose.translation);
}

TEST(Io, ObservationWithoutGroundTruth) {
  const ObservationSet o = io::parse_observation(kMinimalMap);
  EXPECT_FALSE(o.source_pose_gt.has_value());
  EXPECT_EQ(o.objects.size(), 1u);
}

TEST(Io, UnknownFieldsWarn) {
  std::string text = kMinimalMap;
  text.insert(text.find("\"frame_id\""), "\"version\": 3, ");
  text.insert(text.find("\"class_id\""), "\"color\": \"red\", ");
  std::vector<std::string> warnings;
  const ObjectMap m = io::parse_map(text, "m.json", &warnings);
  EXPECT_EQ(m.size(), 1u);
  ASSERT_EQ(warnings.size(), 2u);
  EXPECT_NE(warnings[0].find("version"), std::string::npos);
  EXPECT_NE(warnings[1].find("landmarks[0].color"), std::string::npos);
}

TEST(Io, MalformedInputs) {
  try {
    io::parse_map("{\n  \"frame_id\": \"map\",\n  \"landmarks\": [\n  }", "bad.json");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(e.where().find("line 4"), std::string::npos) << e.what();
  }
  std::string missing = kMinimalMap;
  missing.replace(missing.find("\"class_id\": 2, "), 15, "");
  try {
    io::parse_map(missing, "m.json");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(e.where().find("landmarks[0].class_id"), std::string::npos) << e.what();
  }
  std::string bad_rot = kMinimalMap;
  bad_rot.replace(bad_rot.find("[1,0,0, 0,1,0, 0,0,1]"), 21, "[1,0,0, 0,1,0, 0,0,2]");
  EXPECT_THROW(io::parse_map(bad_rot), ParseError);
  std::string neg_axis = kMinimalMap;
  neg_axis.replace(neg_axis.find("[0.5, 0.5, 0.5]"), 15, "[0.5, -0.5, 0.5]");
  EXPECT_THROW(io::parse_map(neg_axis), ParseError);
  const std::string dup = R"({"frame_id": "map", "landmarks": [
    {"id": 1, "position": [0,0,0], "orientation": [1,0,0,0,1,0,0,0,1], "axis_lengths": [1,1,1], "class_id": 0},
    {"id": 1, "position": [1,0,0], "orientation": [1,0,0,0,1,0,0,0,1], "axis_lengths": [1,1,1], "class_id": 0}]})";
  EXPECT_THROW(io::parse_map(dup), ParseError);
}

TEST(Io, NearRotationIsRepairedWithWarning) {
  std::string text = kMinimalMap;
  text.replace(text.find("[1,0,0, 0,1,0, 0,0,1]"), 21, "[1.0000002,0,0, 0,1,0, 0,0,1]");
  std::vector<std::string> warnings;
  const ObjectMap m = io::parse_map(text, "m.json", &warnings);
  EXPECT_TRUE(is_rotation(m.landmarks[0].orientation));
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("re-orthonormalized"), std::string::npos);
}

TEST(Io, FileRoundTrip) {
  const Scene s = suite_scene("noiseless", 1, 0);
  const fs::path dir = temp_dir("files");
  io::save_map(dir / "map.json", s.map);
  io::save_observation(dir / "obs.json", s.observation);
  io::save_embeddings(dir / "emb.json", s.embeddings);
  EXPECT_TRUE(fs::exists(dir / "emb.bin"));
  EXPECT_EQ(io::to_json(io::load_map(dir / "map.json")), io::to_json(s.map));
  EXPECT_EQ(io::to_json(io::load_observation(dir / "obs.json")), io::to_json(s.observation));
  const EmbeddingTable e = io::load_embeddings(dir / "emb.json");
  EXPECT_EQ(e.ids(), s.embeddings.ids());
  EXPECT_EQ(e.data(), s.embeddings.data());
  EXPECT_THROW(io::load_map(dir / "absent.json"), ParseError);
}

TEST(Io, EmbeddingFixtureParses) {
  const fs::path header = fs::path(CLIQUELOC_FIXTURE_DIR) / "embeds.json";
  const EmbeddingTable t = io::load_embeddings(header);
  EXPECT_EQ(t.dim(), 16);
  ASSERT_EQ(t.size(), 4u);
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(embedding_dot(t.row(i), t.row(i)), 1.0, 1e-6);
  // Repeated text gives an identical row.
  const auto duck = *t.find("text/a yellow toy duck");
  const auto again = *t.find("text/a yellow toy duck#1");
  EXPECT_TRUE(std::equal(duck.begin(), duck.end(), again.begin()));
  const auto crop = *t.find("image/frame0001_obj3");
  EXPECT_GT(embedding_dot(crop, duck), embedding_dot(crop, *t.find("text/a purple office chair")));
}

TEST(Io, EmbeddingPayloadErrors) {
  const fs::path dir = temp_dir("payload");
  io::write_file(dir / "e.json", R"({"dim": 2, "count": 1, "ids": ["a"]})");
  const float bad[2] = {1.0f, 1.0f};
  io::write_file(dir / "e.bin", std::string_view(reinterpret_cast<const char*>(bad), sizeof bad));
  EXPECT_THROW(io::load_embeddings(dir / "e.json"), ParseError);  // not unit norm
  io::write_file(dir / "e.bin", "abc");
  EXPECT_THROW(io::load_embeddings(dir / "e.json"), ParseError);  // wrong size
  io::write_file(dir / "e.json", R"({"dim": 2, "count": 2, "ids": ["a"]})");
  EXPECT_THROW(io::load_embeddings(dir / "e.json"), ParseError);
  io::write_file(dir / "n.json", R"({"dim": 2, "count": 1, "ids": [7]})");
  const float ok[2] = {0.0f, 1.0f};
  io::write_file(dir / "n.bin", std::string_view(reinterpret_cast<const char*>(ok), sizeof ok));
  EXPECT_TRUE(io::load_embeddings(dir / "n.json").find("7").has_value());
}

TEST(Io, ResultJsonHasNoTiming) {
  const Scene s = suite_scene("noiseless", 1, 1);
  const LocalizationResult r = localize(s.map, s.observation, s.embeddings, {});
  const std::string text = io::to_json(r, s.map, s.observation);
  EXPECT_EQ(text.find("latency"), std::string::npos);
  EXPECT_NE(text.find("\"estimates\""), std::string::npos);
  EXPECT_NE(io::hypotheses_to_json(r.hypotheses, r.candidates).find("members"), std::string::npos);
}
