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

#include "jpt/csv.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include <json.hpp>

#include "jpt/error.hpp"

namespace jpt {

namespace {

std::string line_ref(std::size_t line_number) { return "line " + std::to_string(line_number); }

// Reads one logical record, honouring quoted fields that span lines.
bool read_record(std::istream& in, std::string& record, std::size_t& line_number) {
  record.clear();
  std::string line;
  bool in_quotes = false;
  bool any = false;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (any) record.push_back('\n');
    record += line;
    any = true;
    for (char c : line) {
      if (c == '"') in_quotes = !in_quotes;
    }
    if (!in_quotes) return true;
  }
  if (any && in_quotes) throw DataError("unterminated quoted field at end of input (" + line_ref(line_number) + ")");
  return any;
}

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
};

RawTable read_table(std::istream& in) {
  if (!in) throw DataError("cannot read CSV input");
  RawTable table;
  std::string record;
  std::size_t line_number = 0;
  if (!read_record(in, record, line_number)) throw DataError("CSV input is empty (no header)");
  if (record.size() >= 3 && record.compare(0, 3, "\xEF\xBB\xBF") == 0) record.erase(0, 3);
  table.header = split_csv_record(record, line_number);
  std::set<std::string> names;
  for (const auto& name : table.header) {
    if (name.empty()) throw DataError("empty column name in header");
    if (!names.insert(name).second) throw DataError("duplicate column name '" + name + "' in header");
  }
  while (read_record(in, record, line_number)) {
    if (record.empty()) continue;
    auto cells = split_csv_record(record, line_number);
    if (cells.size() != table.header.size()) {
      throw DataError("ragged row at " + line_ref(line_number) + ": expected " + std::to_string(table.header.size()) +
                      " cells, got " + std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c].empty()) {
        throw DataError("missing value in column '" + table.header[c] + "' at " + line_ref(line_number));
      }
    }
    table.rows.push_back(std::move(cells));
    table.line_numbers.push_back(line_number);
  }
  if (table.rows.empty()) throw DataError("CSV input has a header but no rows");
  return table;
}

std::ifstream open_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

std::string escape_cell(const std::string& cell) {
  const bool needs_quotes = cell.find_first_of(",\"\n\r") != std::string::npos || cell.empty() ||
                            cell.front() == ' ' || cell.back() == ' ';
  if (!needs_quotes) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::vector<std::string> split_csv_record(const std::string& line, std::size_t line_number) {
  std::vector<std::string> cells;
  std::string cell;
  bool in_quotes = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      if (!cell.empty()) throw DataError("stray quote inside unquoted field at " + line_ref(line_number));
      in_quotes = true;
      was_quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
      was_quoted = false;
    } else {
      if (was_quoted) throw DataError("text after closing quote at " + line_ref(line_number));
      cell.push_back(c);
    }
  }
  if (in_quotes) throw DataError("unterminated quoted field at " + line_ref(line_number));
  cells.push_back(std::move(cell));
  return cells;
}

Dataset ingest_csv(std::istream& in, const SchemaOverride& overrides) {
  const RawTable table = read_table(in);
  for (const auto& [name, kind] : overrides) {
    if (std::find(table.header.begin(), table.header.end(), name) == table.header.end()) {
      throw DataError("schema override names unknown column '" + name + "'");
    }
  }

  const std::size_t columns = table.header.size();
  Schema schema;
  std::vector<std::vector<double>> numeric_cells(columns);
  for (std::size_t c = 0; c < columns; ++c) {
    const std::string& name = table.header[c];
    const auto forced = overrides.find(name);
    bool numeric = true;
    std::vector<double> values;
    values.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto value = parse_number(table.rows[r][c]);
      if (!value) {
        if (forced != overrides.end() && forced->second == VariableKind::Numeric) {
          throw DataError("unparseable numeric cell '" + table.rows[r][c] + "' in column '" + name + "' at " +
                          line_ref(table.line_numbers[r]));
        }
        numeric = false;
        break;
      }
      values.push_back(*value);
    }
    if (forced != overrides.end()) numeric = forced->second == VariableKind::Numeric;
    if (numeric) {
      schema.push_back(Variable::numeric(name));
      numeric_cells[c] = std::move(values);
    } else {
      std::set<std::string> distinct;
      for (const auto& row : table.rows) distinct.insert(row[c]);
      schema.push_back(Variable::symbolic(name, {distinct.begin(), distinct.end()}));
    }
  }

  Dataset data(schema);
  std::vector<double> row(columns);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t c = 0; c < columns; ++c) {
      row[c] = schema[c].is_numeric() ? numeric_cells[c][r] : static_cast<double>(*schema[c].index_of(table.rows[r][c]));
    }
    data.add_row(row);
  }
  return data;
}

Dataset ingest_csv(const std::filesystem::path& path, const SchemaOverride& overrides) {
  auto in = open_file(path);
  return ingest_csv(in, overrides);
}

Dataset ingest_csv_with_schema(std::istream& in, const Schema& schema) {
  const RawTable table = read_table(in);
  std::vector<std::size_t> column_of(schema.size());
  if (table.header.size() != schema.size()) {
    throw DataError("CSV has " + std::to_string(table.header.size()) + " columns, schema has " +
                    std::to_string(schema.size()) + " variables");
  }
  for (std::size_t v = 0; v < schema.size(); ++v) {
    const auto it = std::find(table.header.begin(), table.header.end(), schema[v].name());
    if (it == table.header.end()) throw DataError("CSV lacks column '" + schema[v].name() + "'");
    column_of[v] = static_cast<std::size_t>(it - table.header.begin());
  }

  Dataset data(schema);
  std::vector<double> row(schema.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t v = 0; v < schema.size(); ++v) {
      const std::string& cell = table.rows[r][column_of[v]];
      if (schema[v].is_numeric()) {
        const auto value = parse_number(cell);
        if (!value) {
          throw DataError("unparseable numeric cell '" + cell + "' in column '" + schema[v].name() + "' at " +
                          line_ref(table.line_numbers[r]));
        }
        row[v] = *value;
      } else {
        const auto index = schema[v].index_of(cell);
        if (!index) {
          throw DataError("value '" + cell + "' is not in the domain of '" + schema[v].name() + "' at " +
                          line_ref(table.line_numbers[r]));
        }
        row[v] = static_cast<double>(*index);
      }
    }
    data.add_row(row);
  }
  return data;
}

Dataset ingest_csv_with_schema(const std::filesystem::path& path, const Schema& schema) {
  auto in = open_file(path);
  return ingest_csv_with_schema(in, schema);
}

void write_csv(std::ostream& out, const Dataset& data) {
  const Schema& schema = data.schema();
  for (std::size_t v = 0; v < schema.size(); ++v) {
    if (v) out << ',';
    out << escape_cell(schema[v].name());
  }
  out << '\n';
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::size_t v = 0; v < schema.size(); ++v) {
      if (v) out << ',';
      const double cell = data.at(r, v);
      if (schema[v].is_numeric()) {
        out << format_number(cell);
      } else {
        out << escape_cell(schema[v].domain()[static_cast<std::size_t>(cell)]);
      }
    }
    out << '\n';
  }
}

SchemaOverride load_schema_override(const std::filesystem::path& path) {
  auto in = open_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("schema override '" + path.string() + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw DataError("schema override must be a JSON object of column kinds");
  SchemaOverride result;
  for (const auto& [name, kind] : doc.items()) {
    if (kind == "numeric") {
      result[name] = VariableKind::Numeric;
    } else if (kind == "symbolic") {
      result[name] = VariableKind::Symbolic;
    } else {
      throw DataError("schema override for '" + name + "' must be \"numeric\" or \"symbolic\"");
    }
  }
  return result;
}

}  // namespace jpt
