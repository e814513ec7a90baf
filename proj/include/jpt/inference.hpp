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
#include <vector>

#include "jpt/data.hpp"
#include "jpt/model.hpp"
#include "jpt/random.hpp"

namespace jpt {

/// Throws DataError unless every constraint matches its variable's kind and
/// domain and numeric intervals are finite and ordered.
void validate_assignment(const Assignment& assignment, const Schema& schema);

/// P(e | leaf) as the product of per-variable factors: interval mass for
/// interval evidence, density for point evidence, histogram mass for value
/// sets. 1 for empty evidence.
double evidence_likelihood(const Leaf& leaf, const Assignment& evidence);

/// P(leaf | e) for every leaf, by Bayes' rule over the leaf priors. With
/// `prune`, leaves whose path condition contradicts the evidence are skipped
/// without evaluating their distributions. Throws ZeroProbabilityError, with
/// the offending constraints named, when the evidence has probability 0.
std::vector<double> leaf_posterior(const JptModel& model, const Assignment& evidence, bool prune = true);

/// P(q | e) = sum over leaves of P(leaf | e) * prod_i P(q_i | leaf, e_i).
double event_probability(const JptModel& model, const Assignment& query, const Assignment& evidence);

/// Posterior of every variable given `evidence`: numeric variables as one
/// exact mixture PLF (or Dirac), symbolic variables as mixed histograms.
std::vector<Distribution> posterior_distributions(const JptModel& model, const Assignment& evidence);

struct ExpectationResult {
  double mean;
  double lower;
  double upper;
};

/// Posterior expectation of a numeric variable with a confidence interval at
/// level `theta`. Throws ConfigError for a symbolic target.
ExpectationResult expectation_query(const JptModel& model, std::size_t target, const Assignment& evidence,
                                    double theta);

struct MpeResult {
  /// One value per variable (domain index for symbolic variables).
  std::vector<double> world;
  /// Mixed mass/density score; only comparable under the same evidence.
  double score;
  std::size_t leaf;
};

/// Most probable explanation. Leaves have disjoint supports, so the best world
/// is the best per-leaf factorised maximiser; ties go to the lowest leaf.
MpeResult mpe(const JptModel& model, const Assignment& evidence);

struct LikelihoodReport {
  /// Mean log-likelihood over rows with positive likelihood; empty if none.
  std::optional<double> average;
  double zero_fraction = 0.0;
  std::size_t rows = 0;
  std::size_t zero_rows = 0;
};

/// log P(row) under the leaf the row descends to; -inf for zero likelihood.
double row_log_likelihood(const JptModel& model, std::span<const double> row);

/// Average log-likelihood over the rows, counting zero-likelihood rows (e.g.
/// outside the convex hull of their leaf's data) separately.
LikelihoodReport log_likelihood(const JptModel& model, const Dataset& data);

/// Draws a leaf from P(leaf | e), then every variable independently from the
/// leaf's distribution conditioned on e. Throws ConfigError for n = 0.
Dataset sample(const JptModel& model, std::size_t n, RandomStream& rng, const Assignment& evidence = {});

}  // namespace jpt
