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

#include "jpt/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <json.hpp>

#include "jpt/error.hpp"
#include "jpt/inference.hpp"
#include "jpt/learner.hpp"
#include "jpt/random.hpp"

namespace jpt {

using nlohmann::json;

namespace {

LearnerConfig fraction_config(double fraction, double epsilon, std::vector<std::string> targets = {}) {
  LearnerConfig config;
  config.min_samples_leaf = {fraction, true};
  config.epsilon = epsilon;
  config.targets = std::move(targets);
  return config;
}

json optional_number(const std::optional<double>& value) { return value ? json(*value) : json(nullptr); }

}  // namespace

std::vector<GaussianCluster> default_toy_clusters() {
  return {
      {"Red", 0.6, {2.0, 3.0}, {1.0, 0.5, 0.5, 1.0}},
      {"Blue", 0.4, {6.0, 1.0}, {1.5, -0.3, -0.3, 0.8}},
  };
}

Dataset gen_gaussian_toy(std::size_t n, std::uint64_t seed, const std::vector<GaussianCluster>& clusters) {
  if (n < 2) throw ConfigError("toy data needs at least 2 rows");
  if (clusters.empty()) throw ConfigError("toy data needs at least one cluster");
  std::vector<std::string> labels;
  double total = 0.0;
  for (const auto& c : clusters) {
    labels.push_back(c.label);
    total += c.weight;
  }
  Dataset data({Variable::numeric("X"), Variable::numeric("Y"), Variable::symbolic("color", labels)});
  RandomStream rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform() * total;
    std::size_t k = 0;
    double cumulative = clusters[0].weight;
    while (k + 1 < clusters.size() && u >= cumulative) cumulative += clusters[++k].weight;
    const GaussianCluster& c = clusters[k];
    // Cholesky factor of the 2x2 covariance.
    const double l11 = std::sqrt(c.covariance[0]);
    const double l21 = c.covariance[2] / l11;
    const double l22 = std::sqrt(c.covariance[3] - l21 * l21);
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    const double row[3] = {c.mean[0] + l11 * z1, c.mean[1] + l21 * z1 + l22 * z2, static_cast<double>(k)};
    data.add_row(row);
  }
  return data;
}

ToyReport run_toy_experiment(std::size_t n, std::uint64_t seed, double min_samples_leaf) {
  Dataset data = gen_gaussian_toy(n, seed);
  JptModel model = learn(data, fraction_config(min_samples_leaf, 0.01));
  std::size_t red = 0;
  for (std::size_t r = 0; r < data.size(); ++r) red += data.at(r, 2) == 0.0 ? 1 : 0;
  Assignment query;
  query.set(2, ValueSet{{0}});
  const double p_red = event_probability(model, query, {});
  const std::size_t leaves = model.leaves().size();
  return {n, seed, min_samples_leaf, leaves, static_cast<double>(red) / static_cast<double>(n), p_red,
          std::move(data), std::move(model)};
}

RegressionReport run_regression_experiment(const RegressionConfig& config) {
  if (config.n < 2 || config.grid_points < 1) throw ConfigError("regression experiment needs n >= 2 and a grid");
  Dataset train({Variable::numeric("x"), Variable::numeric("y")});
  RandomStream rng(config.seed);
  for (std::size_t i = 0; i < config.n; ++i) {
    const double x = rng.uniform(config.x_min, config.x_max);
    const double row[2] = {x, x * std::sin(x) + rng.normal(0.0, config.noise_sigma)};
    train.add_row(row);
  }

  // Evenly spaced grid kept one window inside the sampled range.
  const double lo = config.x_min + config.window;
  const double hi = config.x_max - config.window;
  std::vector<double> grid(config.grid_points);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid[k] = grid.size() == 1 ? (lo + hi) / 2 : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(grid.size() - 1);
  }

  const auto mae = [&](const JptModel& model) {
    double total = 0.0;
    for (double x0 : grid) {
      double delta = config.window;
      for (;;) {
        Assignment evidence;
        evidence.set(0, Interval{x0 - delta, x0 + delta});
        try {
          total += std::abs(expectation_query(model, 1, evidence, 0.95).mean - x0 * std::sin(x0));
          break;
        } catch (const ZeroProbabilityError&) {
          delta *= 2.0;
        }
      }
    }
    return total / static_cast<double>(grid.size());
  };

  RegressionReport report{config, train, {}};
  for (double fraction : config.fractions) {
    JptModel jpt = learn(train, fraction_config(fraction, config.epsilon));
    JptModel cart = learn(train, fraction_config(fraction, config.epsilon, {"y"}));
    const double jpt_mae = mae(jpt);
    const double cart_mae = mae(cart);
    report.points.push_back({fraction, jpt_mae, cart_mae, std::move(jpt), std::move(cart)});
  }
  return report;
}

SweepReport run_likelihood_sweep(const Dataset& data, const SweepConfig& config) {
  if (data.size() < 2) throw ConfigError("likelihood sweep needs at least 2 rows");
  if (!(config.train_share > 0.0 && config.train_share < 1.0)) throw ConfigError("train share must lie in (0, 1)");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  RandomStream rng(config.seed);
  for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng.index(i + 1)]);
  const auto cut = static_cast<std::size_t>(std::ceil(config.train_share * static_cast<double>(data.size())));
  const std::size_t train_rows = std::clamp<std::size_t>(cut, 1, data.size() - 1);
  const std::span<const std::size_t> all(order);
  Dataset train = data.subset(all.first(train_rows));
  Dataset test = data.subset(all.subspan(train_rows));

  SweepReport report{config, train, test, {}};
  for (double fraction : config.fractions) {
    JptModel model = learn(train, fraction_config(fraction, config.epsilon));
    const LikelihoodReport on_train = log_likelihood(model, train);
    const LikelihoodReport on_test = log_likelihood(model, test);
    report.points.push_back({fraction, model.leaves().size(), model.parameter_count(), on_train.average,
                             on_test.average, on_test.zero_fraction, std::move(model)});
  }
  return report;
}

MixtureReport run_mixture_experiment(const MixtureConfig& config) {
  if (config.components.empty()) throw ConfigError("mixture needs at least one component");
  double total = 0.0;
  for (const auto& c : config.components) total += c.weight;
  RandomStream rng(config.seed);
  const auto draw = [&] {
    const double u = rng.uniform() * total;
    std::size_t k = 0;
    double cumulative = config.components[0].weight;
    while (k + 1 < config.components.size() && u >= cumulative) cumulative += config.components[++k].weight;
    return rng.normal(config.components[k].mean, config.components[k].sd);
  };
  const auto truth_density = [&](double x) {
    double density = 0.0;
    for (const auto& c : config.components) {
      const double z = (x - c.mean) / c.sd;
      density += c.weight / total * std::exp(-0.5 * z * z) / (c.sd * std::sqrt(2.0 * std::numbers::pi));
    }
    return density;
  };

  const Schema schema{Variable::numeric("x")};
  Dataset train(schema);
  for (std::size_t i = 0; i < config.train_size; ++i) {
    const double x = draw();
    train.add_row(std::span<const double>(&x, 1));
  }
  std::vector<double> test(config.test_size);
  for (double& x : test) x = draw();

  std::vector<JptModel> models;
  for (double epsilon : config.epsilons) models.push_back(learn(train, fraction_config(1.0, epsilon)));

  std::vector<bool> common(test.size(), true);
  std::vector<std::vector<double>> lls(models.size(), std::vector<double>(test.size()));
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (std::size_t i = 0; i < test.size(); ++i) {
      lls[m][i] = row_log_likelihood(models[m], std::span<const double>(&test[i], 1));
      if (!std::isfinite(lls[m][i])) common[i] = false;
    }
  }
  const auto common_rows = static_cast<std::size_t>(std::count(common.begin(), common.end(), true));
  const auto average = [&](auto&& ll) {
    double sum = 0.0;
    for (std::size_t i = 0; i < test.size(); ++i) {
      if (common[i]) sum += ll(i);
    }
    return common_rows == 0 ? 0.0 : sum / static_cast<double>(common_rows);
  };

  MixtureReport report{config, train, average([&](std::size_t i) { return std::log(truth_density(test[i])); }), common_rows,
                       {}};
  for (std::size_t m = 0; m < models.size(); ++m) {
    const auto zero = static_cast<std::size_t>(
        std::count_if(lls[m].begin(), lls[m].end(), [](double ll) { return !std::isfinite(ll); }));
    const std::size_t hinges = models[m].leaves()[0].numeric(0).parameter_count();
    const double ll = average([&](std::size_t i) { return lls[m][i]; });
    report.points.push_back({config.epsilons[m], hinges, ll, zero, std::move(models[m])});
  }
  return report;
}

std::string to_json(const ToyReport& report) {
  json doc = {
      {"experiment", "toy"},
      {"n", report.n},
      {"seed", report.seed},
      {"min_samples_leaf", report.min_samples_leaf},
      {"leaves", report.leaves},
      {"red_fraction_data", report.red_fraction_data},
      {"red_probability_model", report.red_probability_model},
  };
  return doc.dump(2) + "\n";
}

std::string to_json(const RegressionReport& report) {
  const RegressionConfig& c = report.config;
  json points = json::array();
  for (const auto& p : report.points) {
    points.push_back({{"fraction", p.fraction},
                      {"jpt_mae", p.jpt_mae},
                      {"cart_mae", p.cart_mae},
                      {"jpt_leaves", p.jpt.leaves().size()},
                      {"cart_leaves", p.cart.leaves().size()}});
  }
  json doc = {
      {"experiment", "regression"},
      {"function", "x*sin(x)"},
      {"n", c.n},
      {"noise_sigma", c.noise_sigma},
      {"x_range", {c.x_min, c.x_max}},
      {"seed", c.seed},
      {"grid_points", c.grid_points},
      {"window", c.window},
      {"epsilon", c.epsilon},
      {"target", "noise-free f(x)"},
      {"results", std::move(points)},
  };
  return doc.dump(2) + "\n";
}

std::string to_json(const SweepReport& report) {
  json points = json::array();
  for (const auto& p : report.points) {
    points.push_back({{"fraction", p.fraction},
                      {"leaves", p.leaves},
                      {"parameters", p.parameters},
                      {"train_ll", optional_number(p.train_ll)},
                      {"test_ll", optional_number(p.test_ll)},
                      {"test_zero_fraction", p.test_zero_fraction}});
  }
  json doc = {
      {"experiment", "uci"},
      {"seed", report.config.seed},
      {"train_rows", report.train.size()},
      {"test_rows", report.test.size()},
      {"epsilon", report.config.epsilon},
      {"results", std::move(points)},
  };
  return doc.dump(2) + "\n";
}

std::string to_json(const MixtureReport& report) {
  json components = json::array();
  for (const auto& c : report.config.components) {
    components.push_back({{"weight", c.weight}, {"mean", c.mean}, {"sd", c.sd}});
  }
  json points = json::array();
  for (const auto& p : report.points) {
    points.push_back({{"epsilon", p.epsilon}, {"hinges", p.hinges}, {"test_ll", p.test_ll}, {"zero_rows", p.zero_rows}});
  }
  json doc = {
      {"experiment", "mixture"},
      {"seed", report.config.seed},
      {"components", std::move(components)},
      {"train_size", report.config.train_size},
      {"test_size", report.config.test_size},
      {"common_rows", report.common_rows},
      {"truth_test_ll", report.truth_test_ll},
      {"results", std::move(points)},
  };
  return doc.dump(2) + "\n";
}

}  // namespace jpt
