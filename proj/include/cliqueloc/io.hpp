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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cliqueloc/descriptors.hpp"
#include "cliqueloc/inlier_extraction.hpp"
#include "cliqueloc/pipeline.hpp"
#include "cliqueloc/scene_model.hpp"

namespace cliqueloc::io {

/// Map file:
///   {"frame_id": str,
///    "landmarks": [{"id": int, "position": [3], "orientation": [9, row-major],
///                   "axis_lengths": [3], "class_id": int, "text_label"?: str,
///                   "embedding_id"?: str}]}
/// Observation files use the same layout, plus an optional
///   "gt_pose": {"rotation": [9], "translation": [3]}
/// and an optional per-landmark "gt_map_id": int.
///
/// Unknown keys are skipped and reported through `warnings`. Malformed input
/// throws ParseError naming `source` and the line or field at fault.
ObjectMap parse_map(std::string_view text, const std::string& source = "<map>",
                    std::vector<std::string>* warnings = nullptr);
ObservationSet parse_observation(std::string_view text, const std::string& source = "<observation>",
                                 std::vector<std::string>* warnings = nullptr);

std::string to_json(const ObjectMap& map);
std::string to_json(const ObservationSet& obs);

ObjectMap load_map(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);
ObservationSet load_observation(const std::filesystem::path& path,
                                std::vector<std::string>* warnings = nullptr);
void save_map(const std::filesystem::path& path, const ObjectMap& map);
void save_observation(const std::filesystem::path& path, const ObservationSet& obs);

/// Embedding files come in pairs: a JSON header {"dim", "count", "ids"} and a
/// sidecar with the same stem and a ".bin" extension holding count x dim
/// little-endian float32 values in id order.
std::filesystem::path embedding_payload_path(const std::filesystem::path& header);
EmbeddingTable load_embeddings(const std::filesystem::path& header);
void save_embeddings(const std::filesystem::path& header, const EmbeddingTable& table);

/// Localization output: ranked estimates (rotation row-major, translation,
/// residual, score, inliers) and pipeline statistics. Timing is left out so
/// the text is reproducible.
std::string to_json(const LocalizationResult& result, const ObjectMap& map, const ObservationSet& obs);

/// Debug dump of ranked clique hypotheses with their correspondences.
std::string hypotheses_to_json(std::span<const CliqueHypothesis> hypotheses,
                               std::span<const Correspondence> candidates);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

}  // namespace cliqueloc::io
