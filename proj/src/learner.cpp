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

#include "jpt/learner.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "jpt/error.hpp"

namespace jpt {

ImpurityScope ImpurityScope::of(const Schema& schema, std::span<const std::size_t> variables) {
  ImpurityScope scope;
  for (std::size_t v : variables) {
    (schema.at(v).is_numeric() ? scope.numeric : scope.symbolic).push_back(v);
  }
  return scope;
}

ImpurityScope ImpurityScope::all(const Schema& schema) {
  std::vector<std::size_t> variables(schema.size());
  std::iota(variables.begin(), variables.end(), std::size_t{0});
  return of(schema, variables);
}

namespace {

double class_weight(std::size_t n) { return n == 0 ? 0.0 : 1.0 / static_cast<double>(n * n); }

double weighted_mse(const Dataset& data, std::span<const std::size_t> rows, std::size_t v) {
  double w = 0.0;
  double mean = 0.0;
  for (std::size_t r : rows) {
    w += data.weight(r);
    mean += data.weight(r) * data.at(r, v);
  }
  mean /= w;
  double sse = 0.0;
  for (std::size_t r : rows) {
    const double d = data.at(r, v) - mean;
    sse += data.weight(r) * d * d;
  }
  return sse / w;
}

double weighted_entropy_rel(const Dataset& data, std::span<const std::size_t> rows, std::size_t v) {
  std::vector<double> counts(data.schema()[v].domain_size(), 0.0);
  for (std::size_t r : rows) counts[static_cast<std::size_t>(data.at(r, v))] += data.weight(r);
  return relative_entropy(counts);
}

double total_weight(const Dataset& data, std::span<const std::size_t> rows) {
  double w = 0.0;
  for (std::size_t r : rows) w += data.weight(r);
  return w;
}

bool constant_column(const Dataset& data, std::span<const std::size_t> rows, std::size_t v) {
  for (std::size_t r : rows) {
    if (data.at(r, v) != data.at(rows.front(), v)) return false;
  }
  return true;
}

}  // namespace

double impurity_improvement(const Dataset& data, std::span<const std::size_t> rows, const SplitCriterion& candidate,
                            const ImpurityScope& scope) {
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
  for (std::size_t r : rows) (candidate.goes_left(data.row(r)) ? left : right).push_back(r);
  if (left.empty() || right.empty()) throw ConfigError("split candidate leaves one side empty");

  const double w = total_weight(data, rows);
  const double wl = total_weight(data, left);
  const double wr = total_weight(data, right);

  double symbolic = 0.0;
  for (std::size_t v : scope.symbolic) {
    const double parent = weighted_entropy_rel(data, rows, v);
    const double children = (wl * weighted_entropy_rel(data, left, v) + wr * weighted_entropy_rel(data, right, v)) / w;
    symbolic += parent - children;
  }
  double numeric = 0.0;
  for (std::size_t v : scope.numeric) {
    if (constant_column(data, rows, v)) continue;
    const double parent = weighted_mse(data, rows, v);
    if (!(parent > 0.0)) continue;
    const double children = (wl * weighted_mse(data, left, v) + wr * weighted_mse(data, right, v)) / w;
    numeric += (parent - children) / parent;
  }
  return class_weight(scope.symbolic.size()) * symbolic + class_weight(scope.numeric.size()) * numeric;
}

double impurity_improvement(const Dataset& data, const SplitCriterion& candidate, const ImpurityScope& scope) {
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return impurity_improvement(data, rows, candidate, scope);
}

namespace {

// Sufficient statistics of the scope variables over a set of rows. Numeric
// moments are taken about the parent mean to limit cancellation.
struct ScopeStats {
  double weight = 0.0;
  std::vector<double> sum;
  std::vector<double> sum_sq;
  std::vector<double> counts;

  ScopeStats(std::size_t numeric, std::size_t count_slots)
      : sum(numeric, 0.0), sum_sq(numeric, 0.0), counts(count_slots, 0.0) {}

  void subtract_from(const ScopeStats& total, ScopeStats& out) const {
    out.weight = total.weight - weight;
    for (std::size_t j = 0; j < sum.size(); ++j) {
      out.sum[j] = total.sum[j] - sum[j];
      out.sum_sq[j] = total.sum_sq[j] - sum_sq[j];
    }
    for (std::size_t j = 0; j < counts.size(); ++j) out.counts[j] = std::max(0.0, total.counts[j] - counts[j]);
  }
};

class SplitSearch {
 public:
  SplitSearch(const Dataset& data, std::span<const std::size_t> rows, const ImpurityScope& scope)
      : data_(data), rows_(rows), scope_(scope) {
    std::size_t slots = 0;
    for (std::size_t v : scope_.symbolic) {
      offsets_.push_back(slots);
      slots += data_.schema()[v].domain_size();
    }
    count_slots_ = slots;

    means_.assign(scope_.numeric.size(), 0.0);
    double w = 0.0;
    for (std::size_t r : rows_) {
      w += data_.weight(r);
      for (std::size_t j = 0; j < scope_.numeric.size(); ++j) {
        means_[j] += data_.weight(r) * data_.at(r, scope_.numeric[j]);
      }
    }
    for (double& m : means_) m /= w;

    parent_ = std::make_unique<ScopeStats>(empty_stats());
    for (std::size_t r : rows_) add(*parent_, r);

    parent_mse_.assign(scope_.numeric.size(), 0.0);
    for (std::size_t j = 0; j < scope_.numeric.size(); ++j) {
      if (!constant_column(data_, rows_, scope_.numeric[j])) parent_mse_[j] = mse(*parent_, j);
    }
    parent_entropy_.assign(scope_.symbolic.size(), 0.0);
    for (std::size_t j = 0; j < scope_.symbolic.size(); ++j) parent_entropy_[j] = entropy(*parent_, j);
  }

  bool pure() const {
    return std::all_of(parent_mse_.begin(), parent_mse_.end(), [](double m) { return !(m > 0.0); }) &&
           std::all_of(parent_entropy_.begin(), parent_entropy_.end(), [](double h) { return !(h > 0.0); });
  }

  ScopeStats empty_stats() const { return ScopeStats(scope_.numeric.size(), count_slots_); }

  void add(ScopeStats& stats, std::size_t r) const {
    const double w = data_.weight(r);
    stats.weight += w;
    for (std::size_t j = 0; j < scope_.numeric.size(); ++j) {
      const double d = data_.at(r, scope_.numeric[j]) - means_[j];
      stats.sum[j] += w * d;
      stats.sum_sq[j] += w * d * d;
    }
    for (std::size_t j = 0; j < scope_.symbolic.size(); ++j) {
      stats.counts[offsets_[j] + static_cast<std::size_t>(data_.at(r, scope_.symbolic[j]))] += w;
    }
  }

  double improvement(const ScopeStats& left, ScopeStats& right_buffer) const {
    left.subtract_from(*parent_, right_buffer);
    const ScopeStats& right = right_buffer;
    const double w = parent_->weight;

    double symbolic = 0.0;
    for (std::size_t j = 0; j < scope_.symbolic.size(); ++j) {
      if (!(parent_entropy_[j] > 0.0)) continue;
      const double children = (left.weight * entropy(left, j) + right.weight * entropy(right, j)) / w;
      symbolic += parent_entropy_[j] - children;
    }
    double numeric = 0.0;
    for (std::size_t j = 0; j < scope_.numeric.size(); ++j) {
      if (!(parent_mse_[j] > 0.0)) continue;
      const double children = (left.weight * mse(left, j) + right.weight * mse(right, j)) / w;
      numeric += (parent_mse_[j] - children) / parent_mse_[j];
    }
    return class_weight(scope_.symbolic.size()) * symbolic + class_weight(scope_.numeric.size()) * numeric;
  }

  double parent_weight() const { return parent_->weight; }

 private:
  static double mse(const ScopeStats& stats, std::size_t j) {
    if (!(stats.weight > 0.0)) return 0.0;
    const double mean = stats.sum[j] / stats.weight;
    return std::max(0.0, stats.sum_sq[j] / stats.weight - mean * mean);
  }

  double entropy(const ScopeStats& stats, std::size_t j) const {
    const std::size_t size = data_.schema()[scope_.symbolic[j]].domain_size();
    return relative_entropy(std::span<const double>(stats.counts).subspan(offsets_[j], size));
  }

  const Dataset& data_;
  std::span<const std::size_t> rows_;
  const ImpurityScope& scope_;
  std::vector<std::size_t> offsets_;
  std::size_t count_slots_ = 0;
  std::vector<double> means_;
  std::unique_ptr<ScopeStats> parent_;
  std::vector<double> parent_mse_;
  std::vector<double> parent_entropy_;
};

std::optional<SplitCandidate> search(const SplitSearch& search, const Dataset& data, std::span<const std::size_t> rows,
                                     std::span<const std::size_t> features, double min_leaf_weight,
                                     const PathCondition& path) {
  std::optional<SplitCandidate> best;
  auto offer = [&](const SplitCriterion& criterion, double improvement) {
    if (!best || improvement > best->improvement) best = SplitCandidate{criterion, improvement};
  };
  ScopeStats right = search.empty_stats();
  const double total = search.parent_weight();

  for (std::size_t f : features) {
    const Variable& var = data.schema()[f];
    if (var.is_numeric()) {
      std::vector<std::size_t> order(rows.begin(), rows.end());
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return data.at(a, f) < data.at(b, f); });
      ScopeStats left = search.empty_stats();
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        search.add(left, order[k]);
        const double here = data.at(order[k], f);
        const double next = data.at(order[k + 1], f);
        if (here == next) continue;
        if (left.weight < min_leaf_weight || total - left.weight < min_leaf_weight) continue;
        double threshold = here + (next - here) / 2.0;
        if (!(threshold >= here && threshold < next)) threshold = here;
        offer(SplitCriterion::numeric(f, threshold), search.improvement(left, right));
      }
    } else {
      std::vector<ScopeStats> groups(var.domain_size(), search.empty_stats());
      for (std::size_t r : rows) search.add(groups[static_cast<std::size_t>(data.at(r, f))], r);
      for (std::size_t v = 0; v < var.domain_size(); ++v) {
        const ScopeStats& left = groups[v];
        if (!path.admits(f, v) || !(left.weight > 0.0) || !(total - left.weight > 0.0)) continue;
        // Guard against weights that differ only by summation order.
        if (left.weight == total) continue;
        if (left.weight < min_leaf_weight || total - left.weight < min_leaf_weight) continue;
        offer(SplitCriterion::symbolic(f, v), search.improvement(left, right));
      }
    }
  }
  return best;
}

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, const LearnerConfig& config) : data_(data), config_(config) {
    config_.validate();
    if (data_.empty()) throw ConfigError("cannot learn from an empty dataset");
    const Schema& schema = data_.schema();

    std::vector<std::size_t> targets;
    for (const auto& name : config_.targets) {
      const auto index = find_variable(schema, name);
      if (!index) throw ConfigError("target variable '" + name + "' is not in the schema");
      targets.push_back(*index);
    }
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    for (std::size_t v = 0; v < schema.size(); ++v) {
      if (targets.empty() || !std::binary_search(targets.begin(), targets.end(), v)) features_.push_back(v);
    }
    scope_ = targets.empty() ? ImpurityScope::all(schema) : ImpurityScope::of(schema, targets);

    total_weight_ = data_.total_weight();
    min_leaf_weight_ = config_.min_samples_leaf.resolve(total_weight_);
    if (total_weight_ < min_leaf_weight_) {
      throw ConfigError("dataset weight " + format_number(total_weight_) + " is smaller than one minimum leaf (" +
                        format_number(min_leaf_weight_) + ")");
    }
  }

  JptModel build() {
    std::vector<std::size_t> rows(data_.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    grow(rows, 0, PathCondition{});
    return JptModel(data_.schema(), std::move(nodes_), std::move(leaves_), config_);
  }

 private:
  std::size_t grow(const std::vector<std::size_t>& rows, std::size_t depth, const PathCondition& path) {
    const std::size_t index = nodes_.size();
    nodes_.emplace_back();

    std::optional<SplitCandidate> best;
    const double weight = total_weight(data_, rows);
    const bool depth_exhausted = config_.max_depth && depth >= *config_.max_depth;
    if (!depth_exhausted && weight >= 2.0 * min_leaf_weight_) {
      const SplitSearch stats(data_, rows, scope_);
      if (!stats.pure()) best = search(stats, data_, rows, features_, min_leaf_weight_, path);
    }
    if (!best || !(best->improvement > config_.min_impurity_improvement)) {
      nodes_[index].is_leaf = true;
      nodes_[index].leaf = leaves_.size();
      leaves_.push_back(make_leaf(rows, weight));
      return index;
    }

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t r : rows) (best->criterion.goes_left(data_.row(r)) ? left : right).push_back(r);

    PathCondition left_path = path;
    left_path.restrict(best->criterion, true, data_.schema());
    PathCondition right_path = path;
    right_path.restrict(best->criterion, false, data_.schema());

    const std::size_t left_index = grow(left, depth + 1, left_path);
    const std::size_t right_index = grow(right, depth + 1, right_path);
    TreeNode& node = nodes_[index];
    node.is_leaf = false;
    node.split = best->criterion;
    node.left = left_index;
    node.right = right_index;
    return index;
  }

  Leaf make_leaf(const std::vector<std::size_t>& rows, double weight) const {
    Leaf leaf;
    leaf.weight = weight;
    leaf.prior = weight / total_weight_;
    std::vector<double> values(rows.size());
    std::vector<double> weights(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) weights[i] = data_.weight(rows[i]);
    for (std::size_t v = 0; v < data_.num_variables(); ++v) {
      const Variable& var = data_.schema()[v];
      if (var.is_numeric()) {
        for (std::size_t i = 0; i < rows.size(); ++i) values[i] = data_.at(rows[i], v);
        leaf.distributions.emplace_back(NumericDistribution::fit(values, weights, config_.epsilon));
      } else {
        std::vector<double> counts(var.domain_size(), 0.0);
        for (std::size_t i = 0; i < rows.size(); ++i) counts[static_cast<std::size_t>(data_.at(rows[i], v))] += weights[i];
        leaf.distributions.emplace_back(Multinomial::fit(counts));
      }
    }
    return leaf;
  }

  const Dataset& data_;
  LearnerConfig config_;
  ImpurityScope scope_;
  std::vector<std::size_t> features_;
  double total_weight_ = 0.0;
  double min_leaf_weight_ = 1.0;
  std::vector<TreeNode> nodes_;
  std::vector<Leaf> leaves_;
};

}  // namespace

std::optional<SplitCandidate> find_best_split(const Dataset& data, std::span<const std::size_t> rows,
                                              const ImpurityScope& scope, std::span<const std::size_t> features,
                                              double min_leaf_weight, const PathCondition& path) {
  if (rows.empty()) return std::nullopt;
  const SplitSearch stats(data, rows, scope);
  if (stats.pure()) return std::nullopt;
  return search(stats, data, rows, features, min_leaf_weight, path);
}

JptModel learn(const Dataset& data, const LearnerConfig& config) { return TreeBuilder(data, config).build(); }

}  // namespace jpt
