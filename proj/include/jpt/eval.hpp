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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jpt/data.hpp"
#include "jpt/model.hpp"

namespace jpt {

// ---------------------------------------------------------------------------
// Toy clusters

struct GaussianCluster {
  std::string label;
  double weight;
  std::array<double, 2> mean;
  /// Row-major 2x2 covariance.
  std::array<double, 4> covariance;
};

/// Two clusters labelled Red and Blue.
std::vector<GaussianCluster> default_toy_clusters();

/// Rows (X, Y, color) drawn from the mixture of `clusters`. Throws
/// ConfigError for n < 2.
Dataset gen_gaussian_toy(std::size_t n, std::uint64_t seed,
                         const std::vector<GaussianCluster>& clusters = default_toy_clusters());

struct ToyReport {
  std::size_t n;
  std::uint64_t seed;
  double min_samples_leaf;
  std::size_t leaves;
  double red_fraction_data;
  double red_probability_model;
  Dataset data;
  JptModel model;
};

ToyReport run_toy_experiment(std::size_t n, std::uint64_t seed, double min_samples_leaf = 0.05);

// ---------------------------------------------------------------------------
// x sin x regression, generative JPT against CART

struct RegressionConfig {
  std::size_t n = 1000;
  double noise_sigma = 1.0;
  double x_min = 0.0;
  double x_max = 10.0;
  std::vector<double> fractions{0.20, 0.10, 0.05, 0.02, 0.01};
  std::uint64_t seed = 0;
  std::size_t grid_points = 200;
  /// Half-width of the evidence window x in [x0 - delta, x0 + delta].
  double window = 0.1;
  double epsilon = 0.01;
};

struct RegressionPoint {
  double fraction;
  double jpt_mae;
  double cart_mae;
  JptModel jpt;
  JptModel cart;
};

struct RegressionReport {
  RegressionConfig config;
  Dataset train;
  std::vector<RegressionPoint> points;
};

/// Samples x uniformly, y = x sin x + N(0, sigma^2), trains both learners at
/// each fraction and scores E(y | x in window) against the noise-free curve
/// on an evenly spaced grid inside the x range.
RegressionReport run_regression_experiment(const RegressionConfig& config);

// ---------------------------------------------------------------------------
// Likelihood sweep

struct SweepConfig {
  std::vector<double> fractions{0.9, 0.4, 0.2, 0.1};
  std::uint64_t seed = 0;
  double train_share = 0.9;
  double epsilon = 0.01;
};

struct SweepPoint {
  double fraction;
  std::size_t leaves;
  std::size_t parameters;
  std::optional<double> train_ll;
  std::optional<double> test_ll;
  double test_zero_fraction;
  JptModel model;
};

struct SweepReport {
  SweepConfig config;
  Dataset train;
  Dataset test;
  std::vector<SweepPoint> points;
};

/// Seeded shuffle into train/test, then one model per fraction.
SweepReport run_likelihood_sweep(const Dataset& data, const SweepConfig& config);

// ---------------------------------------------------------------------------
// Piecewise-linear CDF against a known Gaussian mixture

struct Gaussian1d {
  double weight;
  double mean;
  double sd;
};

struct MixtureConfig {
  std::vector<Gaussian1d> components{{0.3, -3.0, 1.0}, {0.5, 1.0, 0.6}, {0.2, 4.0, 1.5}};
  std::size_t train_size = 1000;
  std::size_t test_size = 1000;
  std::vector<double> epsilons{0.05, 0.01};
  std::uint64_t seed = 0;
};

struct MixturePoint {
  double epsilon;
  std::size_t hinges;
  /// Average held-out log-likelihood over the common positive rows.
  double test_ll;
  std::size_t zero_rows;
  JptModel model;
};

struct MixtureReport {
  MixtureConfig config;
  Dataset train;
  double truth_test_ll;
  /// Held-out rows with positive likelihood under every fitted model.
  std::size_t common_rows;
  std::vector<MixturePoint> points;
};

/// Fits one single-leaf model per epsilon to the training draws and compares
/// held-out log-likelihood against the generating mixture.
MixtureReport run_mixture_experiment(const MixtureConfig& config);

/// Deterministic JSON renderings of the reports (models excluded).
std::string to_json(const ToyReport& report);
std::string to_json(const RegressionReport& report);
std::string to_json(const SweepReport& report);
std::string to_json(const MixtureReport& report);

}  // namespace jpt
