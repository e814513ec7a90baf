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

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace jpt {

enum class VariableKind { Symbolic, Numeric };

/// A named random variable. Symbolic variables own an ordered label domain;
/// a label's position in the domain is the value stored in dataset cells.
class Variable {
 public:
  static Variable numeric(std::string name);
  /// Throws DataError when the domain is empty or holds duplicates.
  static Variable symbolic(std::string name, std::vector<std::string> domain);

  const std::string& name() const { return name_; }
  VariableKind kind() const { return kind_; }
  bool is_numeric() const { return kind_ == VariableKind::Numeric; }
  bool is_symbolic() const { return kind_ == VariableKind::Symbolic; }
  const std::vector<std::string>& domain() const { return domain_; }
  std::size_t domain_size() const { return domain_.size(); }

  std::optional<std::size_t> index_of(std::string_view label) const;

  bool operator==(const Variable&) const = default;

 private:
  Variable(std::string name, VariableKind kind, std::vector<std::string> domain)
      : name_(std::move(name)), kind_(kind), domain_(std::move(domain)) {}

  std::string name_;
  VariableKind kind_;
  std::vector<std::string> domain_;
};

using Schema = std::vector<Variable>;

/// Position of the variable called `name`, if any.
std::optional<std::size_t> find_variable(const Schema& schema, std::string_view name);

/// Row-major table of complete observations. Symbolic cells hold the domain
/// index as a double; numeric cells hold finite reals.
class Dataset {
 public:
  explicit Dataset(Schema schema) : schema_(std::move(schema)) {}

  const Schema& schema() const { return schema_; }
  std::size_t num_variables() const { return schema_.size(); }
  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }

  std::span<const double> row(std::size_t r) const {
    return {cells_.data() + r * schema_.size(), schema_.size()};
  }
  double at(std::size_t r, std::size_t v) const { return cells_[r * schema_.size() + v]; }
  double weight(std::size_t r) const { return weights_[r]; }
  double total_weight() const;

  /// Validates the row against the schema; throws DataError on violation.
  void add_row(std::span<const double> values, double weight = 1.0);

  /// Rows selected by `indices`, in that order.
  Dataset subset(std::span<const std::size_t> indices) const;

 private:
  Schema schema_;
  std::vector<double> cells_;
  std::vector<double> weights_;
};

/// Closed interval [lower, upper] constraint on a numeric variable. A point
/// constraint has lower == upper.
struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  bool is_point() const { return lower == upper; }
  bool contains(double x) const { return lower <= x && x <= upper; }
  bool operator==(const Interval&) const = default;
};

/// Admissible subset of a symbolic domain, stored as sorted unique indices.
struct ValueSet {
  std::vector<std::size_t> values;

  bool contains(std::size_t v) const;
  bool operator==(const ValueSet&) const = default;
};

using Constraint = std::variant<Interval, ValueSet>;

/// Per-variable constraints used both as evidence and as query. Variables
/// without an entry are unconstrained.
class Assignment {
 public:
  Assignment() = default;

  void set(std::size_t variable, Constraint constraint);
  const Constraint* find(std::size_t variable) const;
  bool contains(std::size_t variable) const { return constraints_.count(variable) != 0; }
  bool empty() const { return constraints_.empty(); }
  std::size_t size() const { return constraints_.size(); }

  auto begin() const { return constraints_.begin(); }
  auto end() const { return constraints_.end(); }

  /// True when every constrained variable of a complete row is satisfied.
  bool satisfied_by(std::span<const double> row) const;

  bool operator==(const Assignment&) const = default;

 private:
  std::map<std::size_t, Constraint> constraints_;
};

/// Parses `stmt (';' stmt)*` where
///   stmt := name '=' value | name 'in' '[' num ',' num ']'
///         | name 'in' '{' value (',' value)* '}'
/// Values may be double-quoted. Throws DataError naming the offending token.
Assignment parse_assignment(std::string_view text, const Schema& schema);

/// Renders an assignment back into the grammar accepted by parse_assignment.
std::string format_assignment(const Assignment& assignment, const Schema& schema);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);

/// Full-string decimal parse; nullopt on trailing garbage or non-finite values.
std::optional<double> parse_number(std::string_view text);

}  // namespace jpt
