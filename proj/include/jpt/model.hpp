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
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "jpt/data.hpp"
#include "jpt/multinomial.hpp"
#include "jpt/quantile.hpp"

namespace jpt {

/// Per-variable leaf distribution.
using Distribution = std::variant<NumericDistribution, Multinomial>;

/// Binary decision: `x <= threshold` or `x == value` sends a row left.
struct SplitCriterion {
  enum class Kind { Threshold, Equals };

  std::size_t variable = 0;
  Kind kind = Kind::Threshold;
  double threshold = 0.0;
  std::size_t value = 0;

  static SplitCriterion numeric(std::size_t variable, double threshold) {
    return {variable, Kind::Threshold, threshold, 0};
  }
  static SplitCriterion symbolic(std::size_t variable, std::size_t value) {
    return {variable, Kind::Equals, 0.0, value};
  }

  bool goes_left(double cell) const {
    return kind == Kind::Threshold ? cell <= threshold : static_cast<std::size_t>(cell) == value;
  }
  bool goes_left(std::span<const double> row) const { return goes_left(row[variable]); }

  /// "x <= 2.31" / "color = Red" (negated: "x > 2.31" / "color != Red").
  std::string describe(const Schema& schema, bool negated = false) const;

  bool operator==(const SplitCriterion&) const = default;
};

/// Region (lower, upper] accumulated from threshold splits along a path.
struct NumericRegion {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return x > lower && x <= upper; }
  bool operator==(const NumericRegion&) const = default;
};

/// Conjunction of the split constraints from the root to a node. Variables
/// without an entry are unconstrained.
class PathCondition {
 public:
  void restrict(const SplitCriterion& split, bool left, const Schema& schema);

  bool accepts(std::span<const double> row) const;
  /// True when no world satisfies both the path and `evidence`.
  bool contradicts(const Assignment& evidence) const;
  /// True when `value` is still admissible for symbolic `variable`.
  bool admits(std::size_t variable, std::size_t value) const;

  const std::map<std::size_t, NumericRegion>& numeric() const { return numeric_; }
  const std::map<std::size_t, std::vector<bool>>& symbolic() const { return symbolic_; }

  bool operator==(const PathCondition&) const = default;

 private:
  std::map<std::size_t, NumericRegion> numeric_;
  std::map<std::size_t, std::vector<bool>> symbolic_;
};

struct Leaf {
  double prior = 0.0;
  double weight = 0.0;
  std::vector<Distribution> distributions;
  PathCondition path;

  const NumericDistribution& numeric(std::size_t v) const { return std::get<NumericDistribution>(distributions[v]); }
  const Multinomial& symbolic(std::size_t v) const { return std::get<Multinomial>(distributions[v]); }
};

/// Pre-order tree node. Decision nodes reference children by node index,
/// leaf nodes reference an entry of JptModel::leaves().
struct TreeNode {
  bool is_leaf = true;
  std::size_t leaf = 0;
  SplitCriterion split;
  std::size_t left = 0;
  std::size_t right = 0;

  bool operator==(const TreeNode&) const = default;
};

/// Minimum leaf size, either a fraction of the training weight or a count.
struct MinSamplesLeaf {
  double value = 1.0;
  bool fraction = false;

  /// Ceiling-rounded weight threshold for a training set of `total` weight.
  double resolve(double total) const;
  /// "0.9" is a fraction, "25" a count; throws ConfigError otherwise.
  static MinSamplesLeaf parse(const std::string& text);

  bool operator==(const MinSamplesLeaf&) const = default;
};

struct LearnerConfig {
  MinSamplesLeaf min_samples_leaf;
  double min_impurity_improvement = 0.0;
  double epsilon = 0.05;
  /// Non-empty selects discriminative learning over these variables.
  std::vector<std::string> targets;
  std::optional<std::size_t> max_depth;

  /// Throws ConfigError on out-of-range values.
  void validate() const;

  bool operator==(const LearnerConfig&) const = default;
};

/// A joint probability tree: a partition of the world space whose leaves hold
/// a prior and independent per-variable distributions.
class JptModel {
 public:
  /// Checks the structural invariants and derives every leaf's path.
  /// Throws FormatError when they do not hold.
  JptModel(Schema schema, std::vector<TreeNode> nodes, std::vector<Leaf> leaves, LearnerConfig config);

  const Schema& schema() const { return schema_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const std::vector<Leaf>& leaves() const { return leaves_; }
  const LearnerConfig& config() const { return config_; }

  /// The unique leaf reached by descending the tree with a complete row.
  std::size_t leaf_of(std::span<const double> row) const;
  /// Hinges plus histogram bins across all leaves.
  std::size_t parameter_count() const;

 private:
  void derive_paths();

  Schema schema_;
  std::vector<TreeNode> nodes_;
  std::vector<Leaf> leaves_;
  LearnerConfig config_;
};

}  // namespace jpt
