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

#include <gtest/gtest.h>

#include <cmath>

#include "jpt/csv.hpp"
#include "jpt/error.hpp"
#include "jpt/eval.hpp"

namespace jpt {
namespace {

bool regions_disjoint(const PathCondition& a, const PathCondition& b) {
  for (const auto& [v, ra] : a.numeric()) {
    const auto it = b.numeric().find(v);
    if (it == b.numeric().end()) continue;
    const NumericRegion& rb = it->second;
    if (ra.upper <= rb.lower || rb.upper <= ra.lower) return true;
  }
  for (const auto& [v, sa] : a.symbolic()) {
    const auto it = b.symbolic().find(v);
    if (it == b.symbolic().end()) continue;
    bool shared = false;
    for (std::size_t i = 0; i < sa.size(); ++i) shared = shared || (sa[i] && it->second[i]);
    if (!shared) return true;
  }
  return false;
}

TEST(ToyDataTest, MatchesTheGeneratingClusters) {
  constexpr std::size_t kRows = 20000;
  const Dataset data = gen_gaussian_toy(kRows, 7);
  ASSERT_EQ(data.num_variables(), 3u);
  EXPECT_TRUE(data.schema()[0].is_numeric());
  EXPECT_TRUE(data.schema()[1].is_numeric());
  EXPECT_EQ(data.schema()[2].domain(), (std::vector<std::string>{"Red", "Blue"}));

  const auto clusters = default_toy_clusters();
  std::vector<double> n(2, 0.0);
  std::vector<std::array<double, 2>> sum(2, {0.0, 0.0});
  for (std::size_t r = 0; r < data.size(); ++r) {
    const auto k = static_cast<std::size_t>(data.at(r, 2));
    n[k] += 1;
    sum[k][0] += data.at(r, 0);
    sum[k][1] += data.at(r, 1);
  }
  const double p = clusters[0].weight;
  EXPECT_NEAR(n[0] / kRows, p, 3 * std::sqrt(p * (1 - p) / kRows));
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t d = 0; d < 2; ++d) {
      const double se = std::sqrt(clusters[k].covariance[3 * d] / n[k]);
      EXPECT_NEAR(sum[k][d] / n[k], clusters[k].mean[d], 4 * se) << "cluster " << k << " dim " << d;
    }
  }
  EXPECT_THROW(gen_gaussian_toy(1, 0), ConfigError);
}

TEST(ToyExperimentTest, LeavesPartitionTheSpace) {
  const ToyReport report = run_toy_experiment(1000, 3);
  EXPECT_NEAR(report.red_probability_model, report.red_fraction_data, 1e-9);
  const auto& leaves = report.model.leaves();
  EXPECT_GT(leaves.size(), 1u);
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    for (std::size_t j = i + 1; j < leaves.size(); ++j) {
      EXPECT_TRUE(regions_disjoint(leaves[i].path, leaves[j].path)) << i << " vs " << j;
    }
  }
  EXPECT_EQ(to_json(report), to_json(run_toy_experiment(1000, 3)));
}

TEST(RegressionExperimentTest, SmallRunIsDeterministic) {
  RegressionConfig config;
  config.n = 300;
  config.grid_points = 25;
  config.fractions = {0.2, 0.05};
  const RegressionReport a = run_regression_experiment(config);
  ASSERT_EQ(a.points.size(), 2u);
  for (const auto& p : a.points) {
    EXPECT_GT(p.jpt_mae, 0.0);
    EXPECT_GT(p.cart_mae, 0.0);
  }
  EXPECT_LT(a.points[1].jpt_mae, a.points[0].jpt_mae);
  EXPECT_EQ(to_json(a), to_json(run_regression_experiment(config)));
}

TEST(SweepTest, SplitsAndScores) {
  const Dataset data = ingest_csv(std::filesystem::path(JPT_SOURCE_DIR) / "data" / "iris.csv");
  SweepConfig config;
  config.fractions = {0.9, 0.1};
  const SweepReport report = run_likelihood_sweep(data, config);
  EXPECT_EQ(report.train.size(), 135u);
  EXPECT_EQ(report.test.size(), 15u);
  ASSERT_EQ(report.points.size(), 2u);
  EXPECT_EQ(report.points[0].leaves, 1u);
  EXPECT_GT(report.points[1].leaves, 1u);
  EXPECT_GT(*report.points[1].train_ll, *report.points[0].train_ll);
  EXPECT_EQ(to_json(report), to_json(run_likelihood_sweep(data, config)));
  config.train_share = 1.0;
  EXPECT_THROW(run_likelihood_sweep(data, config), ConfigError);
}

TEST(MixtureExperimentTest, FinerEpsilonUsesMoreHinges) {
  MixtureConfig config;
  config.epsilons = {0.5, 0.05, 0.001};
  const MixtureReport report = run_mixture_experiment(config);
  ASSERT_EQ(report.points.size(), 3u);
  EXPECT_EQ(report.train.size(), config.train_size);
  EXPECT_LE(report.points[0].hinges, report.points[1].hinges);
  EXPECT_LE(report.points[1].hinges, report.points[2].hinges);
  EXPECT_LE(report.common_rows, config.test_size);
  EXPECT_GT(report.common_rows, config.test_size * 9 / 10);
  EXPECT_EQ(to_json(report), to_json(run_mixture_experiment(config)));
}

}  // namespace
}  // namespace jpt
