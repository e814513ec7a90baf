// Copyright 2026 The JPT Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "jpt/model.hpp"

namespace jpt {

inline constexpr int kModelFormatVersion = 1;

/// Serialises a model as a single JSON document:
///
///   {"version": 1, "schema": [...], "hyperparameters": {...},
///    "nodes": [...], "leaves": [...]}
///
/// Nodes are in pre-order and reference children by index. Numbers are
/// written in shortest round-trip form, so load(save(m)) is bit-exact.
std::string model_to_json(const JptModel& model);

/// Inverse of model_to_json. Throws FormatError naming the section that
/// failed ("schema", "nodes", "leaves", ...) on malformed, truncated or
/// invariant-violating input, and on a version mismatch.
JptModel model_from_json(std::string_view text);

void save_model(const JptModel& model, const std::filesystem::path& path);
JptModel load_model(const std::filesystem::path& path);

/// Graphviz digraph of the tree: decision nodes show their criterion, edges
/// are labelled true/false, leaves show prior, sample weight and a
/// per-variable summary (expectation or most probable value).
std::string export_dot(const JptModel& model);

}  // namespace jpt
