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

#include "jpt/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "jpt/error.hpp"

namespace jpt {

void validate_assignment(const Assignment& assignment, const Schema& schema) {
  for (const auto& [index, constraint] : assignment) {
    if (index >= schema.size()) throw DataError("constraint on unknown variable index " + std::to_string(index));
    const Variable& var = schema[index];
    if (const auto* interval = std::get_if<Interval>(&constraint)) {
      if (!var.is_numeric()) throw DataError("interval constraint on symbolic variable '" + var.name() + "'");
      if (!std::isfinite(interval->lower) || !std::isfinite(interval->upper) || interval->lower > interval->upper) {
        throw DataError("interval constraint on '" + var.name() + "' must be finite and ordered");
      }
    } else {
      if (!var.is_symbolic()) throw DataError("value-set constraint on numeric variable '" + var.name() + "'");
      const auto& values = std::get<ValueSet>(constraint).values;
      if (values.empty()) throw DataError("empty value set for variable '" + var.name() + "'");
      for (std::size_t v : values) {
        if (v >= var.domain_size()) throw DataError("value index out of the domain of '" + var.name() + "'");
      }
    }
  }
}

namespace {

double constraint_factor(const Distribution& distribution, const Constraint& constraint) {
  if (const auto* interval = std::get_if<Interval>(&constraint)) {
    return std::get<NumericDistribution>(distribution).evidence_factor(*interval);
  }
  return std::get<Multinomial>(distribution).event_probability(std::get<ValueSet>(constraint));
}

Distribution condition_on(const Distribution& distribution, const Constraint* constraint) {
  if (constraint == nullptr) return distribution;
  if (const auto* interval = std::get_if<Interval>(constraint)) {
    return std::get<NumericDistribution>(distribution).condition(*interval);
  }
  return std::get<Multinomial>(distribution).condition(std::get<ValueSet>(*constraint));
}

[[noreturn]] void throw_zero_evidence(const JptModel& model, const Assignment& evidence) {
  std::string impossible;
  for (const auto& [index, constraint] : evidence) {
    double mass = 0.0;
    for (const Leaf& leaf : model.leaves()) mass += leaf.prior * constraint_factor(leaf.distributions[index], constraint);
    if (mass > 0.0) continue;
    Assignment single;
    single.set(index, constraint);
    if (!impossible.empty()) impossible += ", ";
    impossible += "'" + format_assignment(single, model.schema()) + "'";
  }
  if (!impossible.empty()) {
    throw ZeroProbabilityError("evidence has zero probability: " + impossible +
                               " is pruned to zero in every leaf");
  }
  throw ZeroProbabilityError("evidence has zero probability: each constraint is possible on its own, but no leaf "
                             "supports all of them jointly ('" + format_assignment(evidence, model.schema()) + "')");
}

}  // namespace

double evidence_likelihood(const Leaf& leaf, const Assignment& evidence) {
  double likelihood = 1.0;
  for (const auto& [index, constraint] : evidence) {
    likelihood *= constraint_factor(leaf.distributions[index], constraint);
    if (likelihood == 0.0) break;
  }
  return likelihood;
}

std::vector<double> leaf_posterior(const JptModel& model, const Assignment& evidence, bool prune) {
  validate_assignment(evidence, model.schema());
  const auto& leaves = model.leaves();
  std::vector<double> posterior(leaves.size(), 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    if (prune && leaves[k].path.contradicts(evidence)) continue;
    posterior[k] = leaves[k].prior * evidence_likelihood(leaves[k], evidence);
    total += posterior[k];
  }
  if (!(total > 0.0) || !std::isfinite(total)) throw_zero_evidence(model, evidence);
  for (double& p : posterior) p /= total;
  return posterior;
}

double event_probability(const JptModel& model, const Assignment& query, const Assignment& evidence) {
  validate_assignment(query, model.schema());
  const auto posterior = leaf_posterior(model, evidence);
  const auto& leaves = model.leaves();
  double probability = 0.0;
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    if (posterior[k] == 0.0) continue;
    double factor = posterior[k];
    for (const auto& [index, constraint] : query) {
      const Distribution conditioned = condition_on(leaves[k].distributions[index], evidence.find(index));
      factor *= constraint_factor(conditioned, constraint);
      if (factor == 0.0) break;
    }
    probability += factor;
  }
  return std::clamp(probability, 0.0, 1.0);
}

namespace {

NumericDistribution numeric_posterior(const JptModel& model, const std::vector<double>& posterior, std::size_t variable,
                                      const Assignment& evidence) {
  const Constraint* constraint = evidence.find(variable);
  std::vector<NumericDistribution> conditioned;
  std::vector<double> weights;
  const auto& leaves = model.leaves();
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    if (posterior[k] == 0.0) continue;
    const NumericDistribution& dist = leaves[k].numeric(variable);
    conditioned.push_back(constraint ? dist.condition(std::get<Interval>(*constraint)) : dist);
    weights.push_back(posterior[k]);
  }
  if (conditioned.size() == 1) return conditioned.front();
  std::vector<std::pair<double, const NumericDistribution*>> components;
  for (std::size_t i = 0; i < conditioned.size(); ++i) components.emplace_back(weights[i], &conditioned[i]);
  return mix(components);
}

Multinomial symbolic_posterior(const JptModel& model, const std::vector<double>& posterior, std::size_t variable,
                               const Assignment& evidence) {
  const Constraint* constraint = evidence.find(variable);
  std::vector<double> mixed(model.schema()[variable].domain_size(), 0.0);
  const auto& leaves = model.leaves();
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    if (posterior[k] == 0.0) continue;
    const Multinomial& dist = leaves[k].symbolic(variable);
    const Multinomial conditioned = constraint ? dist.condition(std::get<ValueSet>(*constraint)) : dist;
    for (std::size_t v = 0; v < mixed.size(); ++v) mixed[v] += posterior[k] * conditioned[v];
  }
  return Multinomial::fit(mixed);
}

}  // namespace

std::vector<Distribution> posterior_distributions(const JptModel& model, const Assignment& evidence) {
  const auto posterior = leaf_posterior(model, evidence);
  std::vector<Distribution> result;
  for (std::size_t v = 0; v < model.schema().size(); ++v) {
    if (model.schema()[v].is_numeric()) {
      result.emplace_back(numeric_posterior(model, posterior, v, evidence));
    } else {
      result.emplace_back(symbolic_posterior(model, posterior, v, evidence));
    }
  }
  return result;
}

ExpectationResult expectation_query(const JptModel& model, std::size_t target, const Assignment& evidence,
                                    double theta) {
  if (target >= model.schema().size()) throw ConfigError("expectation target is not a model variable");
  if (!model.schema()[target].is_numeric()) {
    throw ConfigError("expectation target '" + model.schema()[target].name() +
                      "' is symbolic; query its posterior distribution instead");
  }
  if (!(theta >= 0.0 && theta <= 1.0)) throw ConfigError("confidence level must lie in [0, 1]");
  const auto posterior = leaf_posterior(model, evidence);
  const NumericDistribution dist = numeric_posterior(model, posterior, target, evidence);
  const ConfidenceInterval interval = dist.confidence_interval(theta);
  return {dist.expectation(), interval.lower, interval.upper};
}

MpeResult mpe(const JptModel& model, const Assignment& evidence) {
  const auto posterior = leaf_posterior(model, evidence);
  const auto& leaves = model.leaves();
  const std::size_t width = model.schema().size();
  MpeResult best{std::vector<double>(width, 0.0), -1.0, 0};
  std::vector<double> world(width);
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    if (posterior[k] == 0.0) continue;
    double score = posterior[k];
    for (std::size_t v = 0; v < width; ++v) {
      const Distribution conditioned = condition_on(leaves[k].distributions[v], evidence.find(v));
      if (const auto* numeric = std::get_if<NumericDistribution>(&conditioned)) {
        const Mode mode = numeric->mode();
        world[v] = mode.value;
        score *= mode.density;
      } else {
        const auto& hist = std::get<Multinomial>(conditioned);
        const std::size_t arg = hist.argmax();
        world[v] = static_cast<double>(arg);
        score *= hist[arg];
      }
    }
    if (score > best.score) best = {world, score, k};
  }
  return best;
}

double row_log_likelihood(const JptModel& model, std::span<const double> row) {
  const Leaf& leaf = model.leaves()[model.leaf_of(row)];
  double total = std::log(leaf.prior);
  for (std::size_t v = 0; v < row.size(); ++v) {
    double factor = 0.0;
    if (const auto* numeric = std::get_if<NumericDistribution>(&leaf.distributions[v])) {
      factor = numeric->likelihood(row[v]);
    } else {
      factor = std::get<Multinomial>(leaf.distributions[v])[static_cast<std::size_t>(row[v])];
    }
    if (!(factor > 0.0)) return -std::numeric_limits<double>::infinity();
    total += std::log(factor);
  }
  return total;
}

LikelihoodReport log_likelihood(const JptModel& model, const Dataset& data) {
  if (data.schema() != model.schema()) throw DataError("dataset schema does not match the model schema");
  LikelihoodReport report;
  report.rows = data.size();
  double sum = 0.0;
  for (std::size_t r = 0; r < data.size(); ++r) {
    const double ll = row_log_likelihood(model, data.row(r));
    if (std::isfinite(ll)) {
      sum += ll;
    } else {
      ++report.zero_rows;
    }
  }
  const std::size_t positive = report.rows - report.zero_rows;
  if (positive > 0) report.average = sum / static_cast<double>(positive);
  report.zero_fraction = report.rows == 0 ? 0.0 : static_cast<double>(report.zero_rows) / static_cast<double>(report.rows);
  return report;
}

Dataset sample(const JptModel& model, std::size_t n, RandomStream& rng, const Assignment& evidence) {
  if (n == 0) throw ConfigError("sample count must be at least 1");
  const auto posterior = leaf_posterior(model, evidence);
  const auto& leaves = model.leaves();
  const std::size_t width = model.schema().size();

  std::vector<std::vector<Distribution>> conditioned(leaves.size());
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    if (posterior[k] == 0.0) continue;
    for (std::size_t v = 0; v < width; ++v) {
      conditioned[k].push_back(condition_on(leaves[k].distributions[v], evidence.find(v)));
    }
  }
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    if (posterior[k] > 0.0) last_positive = k;
  }

  Dataset out(model.schema());
  std::vector<double> row(width);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    double cumulative = 0.0;
    std::size_t chosen = last_positive;
    for (std::size_t k = 0; k < leaves.size(); ++k) {
      if (posterior[k] == 0.0) continue;
      cumulative += posterior[k];
      if (u < cumulative) {
        chosen = k;
        break;
      }
    }
    for (std::size_t v = 0; v < width; ++v) {
      const Distribution& dist = conditioned[chosen][v];
      if (const auto* numeric = std::get_if<NumericDistribution>(&dist)) {
        row[v] = numeric->sample(rng);
      } else {
        row[v] = static_cast<double>(std::get<Multinomial>(dist).sample(rng));
      }
    }
    out.add_row(row);
  }
  return out;
}

}  // namespace jpt
