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
#include <optional>
#include <span>
#include <vector>

#include "jpt/data.hpp"
#include "jpt/model.hpp"

namespace jpt {

/// Variables whose impurity a split is scored against, partitioned by kind.
struct ImpurityScope {
  std::vector<std::size_t> symbolic;
  std::vector<std::size_t> numeric;

  static ImpurityScope of(const Schema& schema, std::span<const std::size_t> variables);
  static ImpurityScope all(const Schema& schema);
};

/// Combined relative impurity improvement of splitting `rows` by `candidate`:
///
///   I = 1/|S|^2 * sum_{j in S} dH_rel(X_j) + 1/|N|^2 * sum_{j in N} MSE_rel(X_j)
///
/// where each term is the parent impurity minus the weight-averaged child
/// impurities (numeric terms divided by the parent MSE). Pure variables and
/// empty kind classes contribute 0. Throws ConfigError if a side is empty.
///
/// This is the direct two-pass evaluation; the learner uses running sums.
double impurity_improvement(const Dataset& data, std::span<const std::size_t> rows, const SplitCriterion& candidate,
                            const ImpurityScope& scope);
double impurity_improvement(const Dataset& data, const SplitCriterion& candidate, const ImpurityScope& scope);

struct SplitCandidate {
  SplitCriterion criterion;
  double improvement = 0.0;
};

/// Highest-improvement legal split of `rows` over the `features`, keeping at
/// least `min_leaf_weight` on both sides. Ties go to the lowest variable index,
/// then the lowest threshold or value index.
std::optional<SplitCandidate> find_best_split(const Dataset& data, std::span<const std::size_t> rows,
                                              const ImpurityScope& scope, std::span<const std::size_t> features,
                                              double min_leaf_weight, const PathCondition& path = {});

/// Induces a tree. Without targets every variable is both feature and scope
/// (generative); with targets, splits come from the remaining variables and
/// are scored on the targets only (discriminative, i.e. CART).
JptModel learn(const Dataset& data, const LearnerConfig& config);

}  // namespace jpt
