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

// Acceptance suite: one PASS/FAIL line per criterion.
//
//   jpt_acceptance            run every criterion
//   jpt_acceptance 3 7        run a subset
//
// Exit status is 0 only if every selected criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "jpt/csv.hpp"
#include "jpt/error.hpp"
#include "jpt/eval.hpp"
#include "jpt/inference.hpp"
#include "jpt/learner.hpp"
#include "jpt/model_io.hpp"
#include "test_support.hpp"

namespace {

using namespace jpt;
using jpt::testing::brute_force_probability;
using jpt::testing::enumerate_joint;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double time_limit;
  std::function<Outcome()> run;
};

std::string fmt(const char* format, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, format, value);
  return buffer;
}

LearnerConfig count_config(std::size_t min_leaf) {
  LearnerConfig config;
  config.min_samples_leaf = {static_cast<double>(min_leaf), false};
  return config;
}

// 1 ---------------------------------------------------------------------------

Outcome oracle_equivalence() {
  RandomStream rng(1001);
  std::size_t datasets = 0;
  std::size_t pairs = 0;
  std::size_t zero_evidence = 0;
  double worst = 0.0;
  for (; datasets < 60; ++datasets) {
    const std::size_t variables = 1 + rng.index(4);
    const std::size_t rows = 10 + rng.index(191);
    const Dataset data = jpt::testing::random_discrete_dataset(rng, variables, 4, rows);
    const JptModel model = learn(data, count_config(1 + rng.index(10)));
    const auto worlds = enumerate_joint(model);
    for (int k = 0; k < 25; ++k) {
      const Assignment q = jpt::testing::random_assignment(rng, data, 0.6);
      const Assignment e = jpt::testing::random_assignment(rng, data, 0.5);
      const auto expected = brute_force_probability(worlds, q, e);
      ++pairs;
      if (!expected) {
        ++zero_evidence;
        try {
          event_probability(model, q, e);
          return {false, "zero-probability evidence was not rejected"};
        } catch (const ZeroProbabilityError&) {
        }
        continue;
      }
      const double actual = event_probability(model, q, e);
      worst = std::max(worst, std::abs(actual - *expected));
    }
  }
  return {worst <= 1e-9, std::to_string(datasets) + " datasets, " + std::to_string(pairs) + " q/e pairs (" +
                             std::to_string(zero_evidence) + " with P(e)=0), max |error| " + fmt("%.3g", worst)};
}

// 2 ---------------------------------------------------------------------------

Outcome cdf_interpolation() {
  RandomStream rng(2002);
  double worst = 0.0;
  std::size_t sets = 0;
  for (; sets < 100; ++sets) {
    const std::size_t n = 2 + rng.index(499);
    std::vector<double> samples(n);
    const int shape = static_cast<int>(rng.index(3));
    for (double& x : samples) {
      if (shape == 0) x = rng.normal(0.0, 1.0);
      if (shape == 1) x = rng.uniform(-3.0, 7.0);
      if (shape == 2) x = std::round(rng.normal(0.0, 4.0));  // heavy ties
    }
    const auto points = build_quantile_dataset(samples);
    const PiecewiseLinearCdf cdf = cdf_learn(points, 0.0);
    if (cdf.size() != points.size()) return {false, "set " + std::to_string(sets) + " lost a hinge"};
    for (const auto& p : points) worst = std::max(worst, std::abs(cdf.cdf(p.value) - p.quantile));
  }
  return {worst <= 1e-12, std::to_string(sets) + " sample sets, max residual " + fmt("%.3g", worst)};
}

// 3 ---------------------------------------------------------------------------

Outcome distribution_invariants() {
  RandomStream rng(3003);
  constexpr std::size_t kPlfs = 1000;
  constexpr std::size_t kDraws = 1000000;
  double worst_mass = 0.0;
  double worst_roundtrip = 0.0;
  double worst_crop = 0.0;
  double worst_z = 0.0;
  std::size_t beyond_3sigma = 0;
  bool monotone = true;
  for (std::size_t i = 0; i < kPlfs; ++i) {
    const PiecewiseLinearCdf plf = jpt::testing::random_plf(rng, 1 + rng.index(30));
    const auto& h = plf.hinges();

    // Monotone CDF on a dense grid across and beyond the support.
    double previous = -1.0;
    const double lo = plf.support_min() - 1.0;
    const double hi = plf.support_max() + 1.0;
    for (int k = 0; k <= 2000; ++k) {
      const double f = plf.cdf(lo + (hi - lo) * k / 2000.0);
      if (f < previous || f < 0.0 || f > 1.0) monotone = false;
      previous = f;
    }

    // Density integral by composite midpoint rule per piece.
    double mass = 0.0;
    for (std::size_t k = 0; k + 1 < h.size(); ++k) {
      const double width = (h[k + 1].x - h[k].x) / 16.0;
      for (int s = 0; s < 16; ++s) mass += plf.density(h[k].x + (s + 0.5) * width) * width;
    }
    worst_mass = std::max(worst_mass, std::abs(mass - 1.0));

    // ppf/cdf round trips.
    for (int k = 0; k < 20; ++k) {
      const double p = rng.uniform(1e-9, 1.0);
      worst_roundtrip = std::max(worst_roundtrip, std::abs(plf.cdf(plf.ppf(p)) - p));
      const std::size_t piece = rng.index(h.size() - 1);
      if (h[piece + 1].cdf > h[piece].cdf) {
        const double x = rng.uniform(h[piece].x, h[piece + 1].x);
        worst_roundtrip = std::max(worst_roundtrip, std::abs(plf.ppf(plf.cdf(x)) - x) / std::max(1.0, std::abs(x)));
      }
    }

    // Crop idempotence on a random interval with mass.
    for (;;) {
      double a = rng.uniform(lo, hi);
      double b = rng.uniform(lo, hi);
      if (a > b) std::swap(a, b);
      if (plf.interval_probability(a, b) <= 1e-6) continue;
      const PiecewiseLinearCdf once = plf.crop(a, b);
      const PiecewiseLinearCdf twice = once.crop(a, b);
      if (once.size() != twice.size()) return {false, "crop is not idempotent (hinge count)"};
      for (std::size_t k = 0; k < once.size(); ++k) {
        worst_crop = std::max(worst_crop, std::abs(once.hinges()[k].x - twice.hinges()[k].x));
        worst_crop = std::max(worst_crop, std::abs(once.hinges()[k].cdf - twice.hinges()[k].cdf));
      }
      break;
    }

    // Expectation against Monte Carlo; moments from the pieces as uniforms.
    double mean = 0.0;
    double second = 0.0;
    for (std::size_t k = 0; k + 1 < h.size(); ++k) {
      const double m = h[k + 1].cdf - h[k].cdf;
      const double a = h[k].x;
      const double b = h[k + 1].x;
      mean += m * (a + b) / 2.0;
      second += m * (a * a + a * b + b * b) / 3.0;
    }
    const double sd = std::sqrt(std::max(0.0, second - mean * mean));
    if (std::abs(plf.expectation() - mean) > 1e-9 * std::max(1.0, std::abs(mean))) {
      return {false, "expectation disagrees with the piecewise moment"};
    }
    double sum = 0.0;
    for (std::size_t d = 0; d < kDraws; ++d) sum += plf.sample(rng);
    const double z = (sum / kDraws - plf.expectation()) / (sd / std::sqrt(static_cast<double>(kDraws)));
    worst_z = std::max(worst_z, std::abs(z));
    if (std::abs(z) > 3.0) ++beyond_3sigma;
  }
  // 1000 independent 3-sigma checks fail about 2.7 times by chance; accept
  // counts up to the binomial 99.9% quantile (9) and no gross outlier.
  const bool mc_ok = beyond_3sigma <= 9 && worst_z < 5.0;
  const bool pass = monotone && worst_mass <= 1e-6 && worst_roundtrip <= 1e-9 && worst_crop <= 1e-12 && mc_ok;
  std::ostringstream detail;
  detail << kPlfs << " PLFs: monotone " << (monotone ? "yes" : "NO") << ", |1 - integral| " << fmt("%.2g", worst_mass)
         << ", round trip " << fmt("%.2g", worst_roundtrip) << ", crop drift " << fmt("%.2g", worst_crop)
         << ", MC beyond 3 sigma " << beyond_3sigma << "/" << kPlfs << " (chance ~2.7), max |z| "
         << fmt("%.2f", worst_z);
  return {pass, detail.str()};
}

// 4 ---------------------------------------------------------------------------

Outcome mixture_trend() {
  const MixtureReport r = run_mixture_experiment(MixtureConfig{});
  const double coarse = r.points[0].test_ll;
  const double fine = r.points[1].test_ll;
  const double gap = std::abs(fine - r.truth_test_ll) / std::abs(r.truth_test_ll);
  std::ostringstream detail;
  detail << "held-out LL truth " << fmt("%.4f", r.truth_test_ll) << ", eps=0.05 " << fmt("%.4f", coarse) << " ("
         << r.points[0].hinges << " hinges), eps=0.01 " << fmt("%.4f", fine) << " (" << r.points[1].hinges
         << " hinges), gap to truth " << fmt("%.1f%%", 100 * gap);
  return {fine > coarse && gap <= 0.10, detail.str()};
}

// 5 ---------------------------------------------------------------------------

Outcome regression_table() {
  const RegressionReport r = run_regression_experiment(RegressionConfig{});
  bool dominates = true;
  std::ostringstream detail;
  detail << "MAE jpt/cart:";
  for (const auto& p : r.points) {
    dominates = dominates && p.jpt_mae <= p.cart_mae;
    detail << " " << fmt("%.0f%%", 100 * p.fraction) << " " << fmt("%.3f", p.jpt_mae) << "/" << fmt("%.3f", p.cart_mae)
           << (p.jpt_mae <= p.cart_mae ? "" : "(!)");
  }
  const double finest = r.points.back().jpt_mae;
  detail << "; jpt@1% < 2.0: " << (finest < 2.0 ? "yes" : "NO");
  return {dominates && finest < 2.0, detail.str()};
}

// 6 ---------------------------------------------------------------------------

Dataset iris() { return ingest_csv(std::string(JPT_SOURCE_DIR) + "/data/iris.csv"); }

Outcome iris_sweep() {
  const SweepReport r = run_likelihood_sweep(iris(), SweepConfig{});
  bool increasing = true;
  std::ostringstream detail;
  detail << "train/test LL:";
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const auto& p = r.points[i];
    if (!p.train_ll || !p.test_ll) return {false, "a sweep point has no finite likelihood"};
    detail << " " << fmt("%.0f%%", 100 * p.fraction) << " " << fmt("%.2f", *p.train_ll) << "/" << fmt("%.2f", *p.test_ll);
    if (i > 0) {
      const auto& q = r.points[i - 1];
      increasing = increasing && *p.train_ll > *q.train_ll && *p.test_ll > *q.test_ll;
    }
  }
  const auto& first = r.points.front();
  const bool one_leaf = first.leaves == 1 && *first.train_ll >= -6.5 && *first.train_ll <= -4.5;
  detail << "; 90% leaves " << first.leaves;
  return {increasing && one_leaf, detail.str()};
}

// 7 ---------------------------------------------------------------------------

Outcome pruning_equivalence() {
  RandomStream rng(7007);
  std::size_t evidence_sets = 0;
  std::size_t pruned_leaves = 0;
  for (int m = 0; m < 100; ++m) {
    const Dataset data = jpt::testing::random_hybrid_dataset(rng, 40 + rng.index(300));
    const JptModel model = learn(data, count_config(2 + rng.index(15)));
    for (int k = 0; k < 20; ++k) {
      const Assignment e = jpt::testing::random_assignment(rng, data, 0.5, 0.2);
      ++evidence_sets;
      for (const Leaf& leaf : model.leaves()) pruned_leaves += leaf.path.contradicts(e) ? 1 : 0;
      std::vector<double> with;
      std::vector<double> without;
      bool with_zero = false;
      bool without_zero = false;
      try {
        with = leaf_posterior(model, e, true);
      } catch (const ZeroProbabilityError&) {
        with_zero = true;
      }
      try {
        without = leaf_posterior(model, e, false);
      } catch (const ZeroProbabilityError&) {
        without_zero = true;
      }
      if (with_zero != without_zero || with != without) {
        return {false, "posterior differs on model " + std::to_string(m) + ", evidence " +
                           format_assignment(e, model.schema())};
      }
    }
  }
  return {true, "100 models, " + std::to_string(evidence_sets) + " evidence sets, " + std::to_string(pruned_leaves) +
                    " leaf evaluations pruned, all posteriors bit-identical"};
}

// 8 ---------------------------------------------------------------------------

std::size_t partition_violations(const JptModel& model, const Dataset& data) {
  std::size_t bad = 0;
  for (std::size_t r = 0; r < data.size(); ++r) {
    const auto row = data.row(r);
    std::size_t accepting = 0;
    std::size_t which = 0;
    for (std::size_t k = 0; k < model.leaves().size(); ++k) {
      if (model.leaves()[k].path.accepts(row)) {
        ++accepting;
        which = k;
      }
    }
    if (accepting != 1 || which != model.leaf_of(row)) ++bad;
  }
  return bad;
}

Outcome partition_property() {
  std::size_t models = 0;
  std::size_t rows = 0;
  std::size_t bad = 0;
  const auto check = [&](const JptModel& model, const Dataset& data) {
    ++models;
    rows += data.size();
    bad += partition_violations(model, data);
  };
  const MixtureReport mixture = run_mixture_experiment(MixtureConfig{});
  for (const auto& p : mixture.points) check(p.model, mixture.train);
  const RegressionReport regression = run_regression_experiment(RegressionConfig{});
  for (const auto& p : regression.points) {
    check(p.jpt, regression.train);
    check(p.cart, regression.train);
  }
  const SweepReport sweep = run_likelihood_sweep(iris(), SweepConfig{});
  for (const auto& p : sweep.points) check(p.model, sweep.train);
  const ToyReport toy = run_toy_experiment(1000, 0);
  check(toy.model, toy.data);
  return {bad == 0, std::to_string(models) + " models, " + std::to_string(rows) + " training rows, " +
                        std::to_string(bad) + " rows not owned by exactly their descent leaf"};
}

// 9 ---------------------------------------------------------------------------

std::string fingerprint_4_to_6() {
  std::string out;
  const MixtureReport mixture = run_mixture_experiment(MixtureConfig{});
  out += to_json(mixture);
  for (const auto& p : mixture.points) out += model_to_json(p.model);
  const RegressionReport regression = run_regression_experiment(RegressionConfig{});
  out += to_json(regression);
  for (const auto& p : regression.points) out += model_to_json(p.jpt) + model_to_json(p.cart);
  const SweepReport sweep = run_likelihood_sweep(iris(), SweepConfig{});
  out += to_json(sweep);
  for (const auto& p : sweep.points) out += model_to_json(p.model);
  return out;
}

Outcome determinism() {
  const std::string first = fingerprint_4_to_6();
  const std::string second = fingerprint_4_to_6();
  return {first == second, "criteria 4-6 rerun: " + std::to_string(first.size()) + " bytes of reports and model files, " +
                               (first == second ? "byte-identical" : "DIFFERENT")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "oracle equivalence (discrete P(q|e) vs enumeration)", 30, oracle_equivalence},
      {2, "CDF-Learn interpolation at epsilon = 0", 10, cdf_interpolation},
      {3, "distribution invariant suite", 60, distribution_invariants},
      {4, "PLF vs Gaussian mixture likelihood trend", 10, mixture_trend},
      {5, "x sin x regression, JPT vs CART", 60, regression_table},
      {6, "IRIS likelihood sweep trend", 30, iris_sweep},
      {7, "pruning equivalence", 30, pruning_equivalence},
      {8, "partition property of trained models", 90, partition_property},
      {9, "determinism of criteria 4-6", 180, determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  bool all = true;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome{false, ""};
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.time_limit;
    const bool pass = outcome.pass && in_time;
    all = all && pass;
    std::printf("%s  [%d] %s: %s (%.2f s, limit %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.title,
                outcome.detail.c_str(), seconds, c.time_limit, in_time ? "" : ", EXCEEDED");
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
