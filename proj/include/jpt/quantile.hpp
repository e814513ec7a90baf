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
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "jpt/data.hpp"
#include "jpt/random.hpp"

namespace jpt {

/// An empirical quantile: `quantile` is the weight fraction of samples <= value.
struct QuantilePoint {
  double value;
  double quantile;

  bool operator==(const QuantilePoint&) const = default;
};

/// Sorts the samples, collapses duplicates and assigns each distinct value its
/// cumulative weight fraction. The last quantile is exactly 1. Weights default
/// to 1 when `weights` is empty.
std::vector<QuantilePoint> build_quantile_dataset(std::span<const double> samples,
                                                  std::span<const double> weights = {});

struct Hinge {
  double x;
  double cdf;

  bool operator==(const Hinge&) const = default;
};

struct ConfidenceInterval {
  double lower;
  double upper;
};

/// A point of maximal density together with that density.
struct Mode {
  double value;
  double density;
};

/// Continuous distribution given by a piecewise-linear CDF through a set of
/// hinges. F is 0 left of the first hinge and 1 from the last hinge on. The
/// first hinge may carry F > 0, which is a point mass at the support minimum
/// (quantile data always starts at 1/N). A single hinge is a pure point mass.
class PiecewiseLinearCdf {
 public:
  /// Throws ConfigError unless x is strictly increasing, F is non-decreasing
  /// within [0, 1] and the last F equals 1.
  explicit PiecewiseLinearCdf(std::vector<Hinge> hinges);

  static PiecewiseLinearCdf uniform(double lower, double upper);

  const std::vector<Hinge>& hinges() const { return hinges_; }
  std::size_t size() const { return hinges_.size(); }
  double support_min() const { return hinges_.front().x; }
  double support_max() const { return hinges_.back().x; }
  /// Probability mass sitting exactly on the first hinge.
  double point_mass() const { return hinges_.front().cdf; }

  double cdf(double x) const;
  /// Left limit F(x-), i.e. P(X < x).
  double cdf_below(double x) const;
  /// P(lower <= X <= upper). Throws ConfigError if lower > upper.
  double interval_probability(double lower, double upper) const;
  /// Leftmost x with F(x) >= p; ppf(1) is the last hinge.
  double ppf(double p) const;
  /// The distribution conditioned on [lower, upper], shifted and stretched so
  /// that it runs from 0 to 1 on the interval. Throws ZeroProbabilityError if
  /// the interval carries no mass.
  PiecewiseLinearCdf crop(double lower, double upper) const;
  double expectation() const;
  /// Slope of the active piece; right piece at a hinge, left piece at the
  /// last hinge, 0 outside the support.
  double density(double x) const;
  double sample(RandomStream& rng) const { return ppf(rng.uniform()); }
  /// Interval around the expectation carrying at least min(theta, 1) mass.
  ConfidenceInterval confidence_interval(double theta) const;
  /// Leftmost point of the steepest piece.
  Mode mode() const;

  bool operator==(const PiecewiseLinearCdf&) const = default;

 private:
  std::size_t piece_index(double x) const;

  std::vector<Hinge> hinges_;
};

/// Fits a piecewise-linear CDF to sorted quantile points by recursive
/// splitting. A subset stops splitting once the summed squared residuals of
/// the straight line through its end points drop below `epsilon`; with
/// epsilon = 0 every point becomes a hinge. Split points minimise the
/// size-weighted mean squared error of the two sides. Throws ConfigError on
/// negative epsilon or empty input.
PiecewiseLinearCdf cdf_learn(std::span<const QuantilePoint> points, double epsilon);

/// Squared residuals of `cdf` at the quantile points.
double sum_squared_residuals(const PiecewiseLinearCdf& cdf, std::span<const QuantilePoint> points);

/// All probability mass at a single value.
struct DiracDistribution {
  double value;

  bool operator==(const DiracDistribution&) const = default;
};

/// A numeric leaf distribution: either a learnt PLF or a Dirac for
/// populations with a single distinct value.
class NumericDistribution {
 public:
  NumericDistribution(PiecewiseLinearCdf cdf);  // NOLINT(google-explicit-constructor)
  NumericDistribution(DiracDistribution dirac) : repr_(dirac) {}  // NOLINT(google-explicit-constructor)

  /// Quantile data + cdf_learn, or a Dirac when there is one distinct value.
  static NumericDistribution fit(std::span<const double> samples, std::span<const double> weights, double epsilon);

  bool is_dirac() const { return std::holds_alternative<DiracDistribution>(repr_); }
  const PiecewiseLinearCdf* plf() const { return std::get_if<PiecewiseLinearCdf>(&repr_); }
  const DiracDistribution* dirac() const { return std::get_if<DiracDistribution>(&repr_); }

  double cdf(double x) const;
  double interval_probability(double lower, double upper) const;
  double interval_probability(const Interval& interval) const {
    return interval_probability(interval.lower, interval.upper);
  }
  /// Density for a PLF; 1 on the exact value and 0 elsewhere for a Dirac.
  double likelihood(double x) const;
  /// P(e | this): likelihood for point evidence, mass for interval evidence.
  double evidence_factor(const Interval& evidence) const {
    return evidence.is_point() ? likelihood(evidence.lower) : interval_probability(evidence);
  }
  /// Point evidence yields a Dirac, interval evidence a crop. Throws
  /// ZeroProbabilityError when the evidence has no support.
  NumericDistribution condition(const Interval& evidence) const;

  double expectation() const;
  double ppf(double p) const;
  double sample(RandomStream& rng) const;
  ConfidenceInterval confidence_interval(double theta) const;
  Mode mode() const;
  double support_min() const;
  double support_max() const;

  /// Hinge view; a Dirac is the single hinge (value, 1).
  std::vector<Hinge> hinges() const;
  /// Stored parameters: hinge count, or 1 for a Dirac.
  std::size_t parameter_count() const;

  bool operator==(const NumericDistribution&) const = default;

 private:
  std::variant<PiecewiseLinearCdf, DiracDistribution> repr_;
};

/// Exact mixture of numeric distributions, materialised as one PLF over the
/// union of hinge positions (a Dirac when everything sits on one point).
/// Jumps inside the support are represented by an extra hinge one ulp to
/// the left. Weights must be non-negative with a positive sum.
NumericDistribution mix(std::span<const std::pair<double, const NumericDistribution*>> components);

}  // namespace jpt
