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
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "jpt/data.hpp"

namespace jpt {

/// Column kind overrides keyed by column name.
using SchemaOverride = std::map<std::string, VariableKind>;

/// Reads a headed, comma-separated file and infers the schema: a column whose
/// cells all parse as numbers is numeric, anything else is symbolic with its
/// sorted distinct values as the domain. Overrides win over inference.
Dataset ingest_csv(const std::filesystem::path& path, const SchemaOverride& overrides = {});
Dataset ingest_csv(std::istream& in, const SchemaOverride& overrides = {});

/// Reads a file against a fixed schema (e.g. the schema of a trained model).
/// Columns are matched by name; extra columns are an error.
Dataset ingest_csv_with_schema(const std::filesystem::path& path, const Schema& schema);
Dataset ingest_csv_with_schema(std::istream& in, const Schema& schema);

/// Writes a header plus one line per row; numbers use round-trip precision.
void write_csv(std::ostream& out, const Dataset& data);

/// Loads a sidecar {"column": "numeric"|"symbolic"} JSON map.
SchemaOverride load_schema_override(const std::filesystem::path& path);

/// Splits a CSV record; exposed for tests.
std::vector<std::string> split_csv_record(const std::string& line, std::size_t line_number);

}  // namespace jpt
