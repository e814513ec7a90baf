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

#include "jpt/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "jpt/error.hpp"

namespace jpt {

std::string SplitCriterion::describe(const Schema& schema, bool negated) const {
  const Variable& var = schema.at(variable);
  if (kind == Kind::Threshold) {
    return var.name() + (negated ? " > " : " <= ") + format_number(threshold);
  }
  return var.name() + (negated ? " != " : " = ") + var.domain().at(value);
}

void PathCondition::restrict(const SplitCriterion& split, bool left, const Schema& schema) {
  if (split.kind == SplitCriterion::Kind::Threshold) {
    NumericRegion& region = numeric_[split.variable];
    if (left) {
      region.upper = std::min(region.upper, split.threshold);
    } else {
      region.lower = std::max(region.lower, split.threshold);
    }
    return;
  }
  auto [it, inserted] = symbolic_.try_emplace(split.variable, schema.at(split.variable).domain_size(), true);
  std::vector<bool>& mask = it->second;
  if (left) {
    for (std::size_t v = 0; v < mask.size(); ++v) mask[v] = mask[v] && v == split.value;
  } else {
    mask[split.value] = false;
  }
}

bool PathCondition::accepts(std::span<const double> row) const {
  for (const auto& [variable, region] : numeric_) {
    if (!region.contains(row[variable])) return false;
  }
  for (const auto& [variable, mask] : symbolic_) {
    if (!mask[static_cast<std::size_t>(row[variable])]) return false;
  }
  return true;
}

bool PathCondition::admits(std::size_t variable, std::size_t value) const {
  const auto it = symbolic_.find(variable);
  return it == symbolic_.end() || it->second[value];
}

bool PathCondition::contradicts(const Assignment& evidence) const {
  for (const auto& [variable, constraint] : evidence) {
    if (const auto* interval = std::get_if<Interval>(&constraint)) {
      const auto it = numeric_.find(variable);
      if (it != numeric_.end() && (interval->upper <= it->second.lower || interval->lower > it->second.upper)) {
        return true;
      }
    } else {
      const auto it = symbolic_.find(variable);
      if (it == symbolic_.end()) continue;
      const auto& values = std::get<ValueSet>(constraint).values;
      if (std::none_of(values.begin(), values.end(), [&](std::size_t v) { return v < it->second.size() && it->second[v]; })) {
        return true;
      }
    }
  }
  return false;
}

double MinSamplesLeaf::resolve(double total) const {
  if (!fraction) return value;
  const double raw = value * total;
  const double nearest = std::round(raw);
  // 0.1 * 150 is 15.000000000000002; treat representation noise as exact.
  if (std::abs(raw - nearest) <= 1e-9 * std::max(1.0, raw)) return std::max(1.0, nearest);
  return std::max(1.0, std::ceil(raw));
}

MinSamplesLeaf MinSamplesLeaf::parse(const std::string& text) {
  const bool looks_fractional = text.find_first_of(".eE") != std::string::npos;
  if (looks_fractional) {
    const auto value = parse_number(text);
    if (!value || !(*value > 0.0 && *value <= 1.0)) {
      throw ConfigError("min-samples-leaf fraction must lie in (0, 1], got '" + text + "'");
    }
    return {*value, true};
  }
  std::uint64_t count = 0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), count);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size() || count == 0) {
    throw ConfigError("min-samples-leaf must be a fraction in (0, 1] or a positive count, got '" + text + "'");
  }
  return {static_cast<double>(count), false};
}

void LearnerConfig::validate() const {
  if (min_samples_leaf.fraction) {
    if (!(min_samples_leaf.value > 0.0 && min_samples_leaf.value <= 1.0)) {
      throw ConfigError("min_samples_leaf fraction must lie in (0, 1]");
    }
  } else if (!(min_samples_leaf.value >= 1.0) || min_samples_leaf.value != std::floor(min_samples_leaf.value)) {
    throw ConfigError("min_samples_leaf count must be a positive integer");
  }
  if (!(min_impurity_improvement >= 0.0)) throw ConfigError("min_impurity_improvement must be non-negative");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be a non-negative number");
}

JptModel::JptModel(Schema schema, std::vector<TreeNode> nodes, std::vector<Leaf> leaves, LearnerConfig config)
    : schema_(std::move(schema)), nodes_(std::move(nodes)), leaves_(std::move(leaves)), config_(std::move(config)) {
  if (schema_.empty()) throw FormatError("schema: model has no variables");
  if (nodes_.empty()) throw FormatError("nodes: model has no nodes");
  if (leaves_.empty()) throw FormatError("leaves: model has no leaves");

  std::vector<int> leaf_refs(leaves_.size(), 0);
  std::vector<int> node_refs(nodes_.size(), 0);
  node_refs[0] = 1;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& node = nodes_[i];
    if (node.is_leaf) {
      if (node.leaf >= leaves_.size()) throw FormatError("nodes: node " + std::to_string(i) + " references a missing leaf");
      ++leaf_refs[node.leaf];
      continue;
    }
    if (node.left <= i || node.right <= i || node.left >= nodes_.size() || node.right >= nodes_.size() ||
        node.left == node.right) {
      throw FormatError("nodes: node " + std::to_string(i) + " has invalid child indices");
    }
    ++node_refs[node.left];
    ++node_refs[node.right];
    const SplitCriterion& split = node.split;
    if (split.variable >= schema_.size()) throw FormatError("nodes: node " + std::to_string(i) + " splits an unknown variable");
    const Variable& var = schema_[split.variable];
    if (split.kind == SplitCriterion::Kind::Threshold) {
      if (!var.is_numeric() || !std::isfinite(split.threshold)) {
        throw FormatError("nodes: node " + std::to_string(i) + " has an invalid threshold split");
      }
    } else if (!var.is_symbolic() || split.value >= var.domain_size()) {
      throw FormatError("nodes: node " + std::to_string(i) + " has an invalid equality split");
    }
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (node_refs[i] != 1) throw FormatError("nodes: node " + std::to_string(i) + " is not referenced exactly once");
  }
  for (std::size_t k = 0; k < leaves_.size(); ++k) {
    if (leaf_refs[k] != 1) throw FormatError("leaves: leaf " + std::to_string(k) + " is not referenced exactly once");
  }

  double prior_sum = 0.0;
  for (std::size_t k = 0; k < leaves_.size(); ++k) {
    const Leaf& leaf = leaves_[k];
    const std::string where = "leaves: leaf " + std::to_string(k);
    if (!(leaf.prior > 0.0 && leaf.prior <= 1.0)) throw FormatError(where + " has a prior outside (0, 1]");
    if (!(leaf.weight > 0.0)) throw FormatError(where + " has a non-positive sample weight");
    prior_sum += leaf.prior;
    if (leaf.distributions.size() != schema_.size()) throw FormatError(where + " does not cover every variable");
    for (std::size_t v = 0; v < schema_.size(); ++v) {
      const Variable& var = schema_[v];
      if (var.is_numeric() != std::holds_alternative<NumericDistribution>(leaf.distributions[v])) {
        throw FormatError(where + " has a distribution of the wrong kind for '" + var.name() + "'");
      }
      if (var.is_symbolic() && leaf.symbolic(v).size() != var.domain_size()) {
        throw FormatError(where + " has a histogram that does not match the domain of '" + var.name() + "'");
      }
    }
  }
  if (std::abs(prior_sum - 1.0) > 1e-9) {
    throw FormatError("leaves: leaf priors sum to " + format_number(prior_sum) + ", not 1");
  }
  derive_paths();
}

void JptModel::derive_paths() {
  std::vector<std::pair<std::size_t, PathCondition>> stack{{0, PathCondition{}}};
  while (!stack.empty()) {
    auto [index, path] = std::move(stack.back());
    stack.pop_back();
    const TreeNode& node = nodes_[index];
    if (node.is_leaf) {
      leaves_[node.leaf].path = std::move(path);
      continue;
    }
    PathCondition left = path;
    left.restrict(node.split, true, schema_);
    path.restrict(node.split, false, schema_);
    stack.emplace_back(node.right, std::move(path));
    stack.emplace_back(node.left, std::move(left));
  }
}

std::size_t JptModel::leaf_of(std::span<const double> row) const {
  std::size_t index = 0;
  while (!nodes_[index].is_leaf) {
    const TreeNode& node = nodes_[index];
    index = node.split.goes_left(row) ? node.left : node.right;
  }
  return nodes_[index].leaf;
}

std::size_t JptModel::parameter_count() const {
  std::size_t total = 0;
  for (const Leaf& leaf : leaves_) {
    for (const Distribution& d : leaf.distributions) {
      if (const auto* numeric = std::get_if<NumericDistribution>(&d)) {
        total += numeric->parameter_count();
      } else {
        total += std::get<Multinomial>(d).size();
      }
    }
  }
  return total;
}

}  // namespace jpt
