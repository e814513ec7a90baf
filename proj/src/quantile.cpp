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

#include "jpt/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "jpt/error.hpp"

namespace jpt {

std::vector<QuantilePoint> build_quantile_dataset(std::span<const double> samples, std::span<const double> weights) {
  if (samples.empty()) throw ConfigError("quantile data needs at least one sample");
  if (!weights.empty() && weights.size() != samples.size()) {
    throw ConfigError("sample and weight counts differ");
  }
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (double s : samples) {
    if (!std::isfinite(s)) throw ConfigError("quantile data contains a non-finite sample");
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return samples[a] < samples[b]; });

  auto weight_of = [&](std::size_t i) { return weights.empty() ? 1.0 : weights[i]; };
  double total = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) total += weight_of(i);
  if (!(total > 0.0)) throw ConfigError("quantile data has zero total weight");

  std::vector<QuantilePoint> points;
  double cumulative = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t i = order[k];
    cumulative += weight_of(i);
    const bool last_of_run = k + 1 == order.size() || samples[order[k + 1]] != samples[i];
    if (last_of_run) points.push_back({samples[i], cumulative / total});
  }
  points.back().quantile = 1.0;
  return points;
}

PiecewiseLinearCdf::PiecewiseLinearCdf(std::vector<Hinge> hinges) : hinges_(std::move(hinges)) {
  if (hinges_.empty()) throw ConfigError("a piecewise linear CDF needs at least one hinge");
  for (std::size_t i = 0; i < hinges_.size(); ++i) {
    const Hinge& h = hinges_[i];
    if (!std::isfinite(h.x) || !std::isfinite(h.cdf) || h.cdf < 0.0 || h.cdf > 1.0) {
      throw ConfigError("hinge " + std::to_string(i) + " is outside [0, 1] or not finite");
    }
    if (i > 0 && !(h.x > hinges_[i - 1].x)) {
      throw ConfigError("hinge x positions must be strictly increasing (hinge " + std::to_string(i) + ")");
    }
    if (i > 0 && h.cdf < hinges_[i - 1].cdf) {
      throw ConfigError("hinge CDF values must be non-decreasing (hinge " + std::to_string(i) + ")");
    }
  }
  if (hinges_.back().cdf != 1.0) throw ConfigError("the last hinge must have CDF value 1");
}

PiecewiseLinearCdf PiecewiseLinearCdf::uniform(double lower, double upper) {
  return PiecewiseLinearCdf({{lower, 0.0}, {upper, 1.0}});
}

// Index k of the piece [x_k, x_{k+1}) containing x; requires x0 <= x < x_last.
std::size_t PiecewiseLinearCdf::piece_index(double x) const {
  const auto it = std::upper_bound(hinges_.begin(), hinges_.end(), x,
                                   [](double value, const Hinge& h) { return value < h.x; });
  return static_cast<std::size_t>(it - hinges_.begin()) - 1;
}

double PiecewiseLinearCdf::cdf(double x) const {
  if (x < hinges_.front().x) return 0.0;
  if (x >= hinges_.back().x) return 1.0;
  const std::size_t k = piece_index(x);
  const Hinge& a = hinges_[k];
  const Hinge& b = hinges_[k + 1];
  const double t = (x - a.x) / (b.x - a.x);
  return a.cdf + t * (b.cdf - a.cdf);
}

double PiecewiseLinearCdf::cdf_below(double x) const {
  if (x <= hinges_.front().x) return 0.0;
  return cdf(x);
}

double PiecewiseLinearCdf::interval_probability(double lower, double upper) const {
  if (lower > upper) throw ConfigError("interval lower bound exceeds upper bound");
  return std::clamp(cdf(upper) - cdf_below(lower), 0.0, 1.0);
}

double PiecewiseLinearCdf::ppf(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("ppf argument must lie in [0, 1]");
  if (p >= 1.0) return hinges_.back().x;
  if (p <= hinges_.front().cdf) return hinges_.front().x;
  const auto it = std::lower_bound(hinges_.begin(), hinges_.end(), p,
                                   [](const Hinge& h, double value) { return h.cdf < value; });
  const Hinge& b = *it;
  const Hinge& a = *(it - 1);
  const double t = (p - a.cdf) / (b.cdf - a.cdf);
  return a.x + t * (b.x - a.x);
}

PiecewiseLinearCdf PiecewiseLinearCdf::crop(double lower, double upper) const {
  const double mass = interval_probability(lower, upper);
  if (!(mass > 0.0)) throw ZeroProbabilityError("cannot condition on an interval with zero probability mass");
  const double base = cdf_below(lower);
  const double lo = std::max(lower, support_min());
  const double hi = std::min(upper, support_max());

  std::vector<Hinge> out;
  auto push = [&](double x, double value) {
    value = std::clamp(value, 0.0, 1.0);
    if (!out.empty()) value = std::max(value, out.back().cdf);
    out.push_back({x, value});
  };
  push(lo, (cdf(lo) - base) / mass);
  for (const Hinge& h : hinges_) {
    if (h.x > lo && h.x < hi) push(h.x, (h.cdf - base) / mass);
  }
  if (hi > lo) {
    out.push_back({hi, 1.0});
  } else {
    out.back().cdf = 1.0;
  }
  return PiecewiseLinearCdf(std::move(out));
}

double PiecewiseLinearCdf::expectation() const {
  double mean = hinges_.front().cdf * hinges_.front().x;
  for (std::size_t k = 0; k + 1 < hinges_.size(); ++k) {
    const Hinge& a = hinges_[k];
    const Hinge& b = hinges_[k + 1];
    mean += (b.cdf - a.cdf) * 0.5 * (a.x + b.x);
  }
  return mean;
}

double PiecewiseLinearCdf::density(double x) const {
  if (hinges_.size() < 2 || x < support_min() || x > support_max()) return 0.0;
  const std::size_t k = x == support_max() ? hinges_.size() - 2 : piece_index(x);
  const Hinge& a = hinges_[k];
  const Hinge& b = hinges_[k + 1];
  return (b.cdf - a.cdf) / (b.x - a.x);
}

ConfidenceInterval PiecewiseLinearCdf::confidence_interval(double theta) const {
  if (!(theta >= 0.0 && theta <= 1.0)) throw ConfigError("confidence level must lie in [0, 1]");
  const double mean = expectation();
  const double center = cdf(mean);
  double p_lo = center - theta / 2.0;
  double p_hi = center + theta / 2.0;
  // A window clipped at one end is shifted inward so it keeps theta mass.
  if (p_lo < 0.0) {
    p_hi = std::min(1.0, theta);
    p_lo = 0.0;
  } else if (p_hi > 1.0) {
    p_lo = std::max(0.0, 1.0 - theta);
    p_hi = 1.0;
  }
  return {std::min(ppf(p_lo), mean), std::max(ppf(p_hi), mean)};
}

Mode PiecewiseLinearCdf::mode() const {
  if (hinges_.size() < 2) return {hinges_.front().x, 0.0};
  Mode best{hinges_.front().x, -1.0};
  for (std::size_t k = 0; k + 1 < hinges_.size(); ++k) {
    const double slope = (hinges_[k + 1].cdf - hinges_[k].cdf) / (hinges_[k + 1].x - hinges_[k].x);
    if (slope > best.density) best = {hinges_[k].x, slope};
  }
  return best;
}

namespace {

// Running sums over a range anchored at one of its end points. With the line
// passing through the anchor, the residual of point k is b_k - s * a_k where
// (a_k, b_k) is the offset from the anchor.
struct AnchoredSums {
  double aa = 0.0;
  double ab = 0.0;
  double bb = 0.0;

  void add(double a, double b) {
    aa += a * a;
    ab += a * b;
    bb += b * b;
  }

  double sse(double slope) const { return std::max(0.0, bb - 2.0 * slope * ab + slope * slope * aa); }
};

double slope_between(const QuantilePoint& p, const QuantilePoint& q) {
  return (q.quantile - p.quantile) / (q.value - p.value);
}

double segment_sse(std::span<const QuantilePoint> points, std::size_t lo, std::size_t hi) {
  const double slope = slope_between(points[lo], points[hi]);
  AnchoredSums sums;
  for (std::size_t k = lo; k <= hi; ++k) {
    sums.add(points[k].value - points[lo].value, points[k].quantile - points[lo].quantile);
  }
  return sums.sse(slope);
}

// Interior index minimising the count-weighted mean of both sides' MSE. The
// split point belongs to both sides. Ties go to the smallest index.
std::size_t best_split(std::span<const QuantilePoint> points, std::size_t lo, std::size_t hi) {
  const std::size_t n = hi - lo + 1;
  std::vector<double> left_sse(n, 0.0);
  std::vector<double> right_sse(n, 0.0);

  // Left side [lo, i]: sums anchored at lo need only a prefix pass, but the
  // slope depends on i, so keep the moments per prefix.
  AnchoredSums prefix;
  for (std::size_t i = lo; i <= hi; ++i) {
    prefix.add(points[i].value - points[lo].value, points[i].quantile - points[lo].quantile);
    if (i > lo) left_sse[i - lo] = prefix.sse(slope_between(points[lo], points[i]));
  }
  AnchoredSums suffix;
  for (std::size_t i = hi + 1; i-- > lo;) {
    suffix.add(points[i].value - points[hi].value, points[i].quantile - points[hi].quantile);
    if (i < hi) right_sse[i - lo] = suffix.sse(slope_between(points[i], points[hi]));
  }

  std::size_t best = lo + 1;
  double best_error = std::numeric_limits<double>::infinity();
  for (std::size_t i = lo + 1; i < hi; ++i) {
    const double error = (left_sse[i - lo] + right_sse[i - lo]) / static_cast<double>(n + 1);
    if (error < best_error) {
      best_error = error;
      best = i;
    }
  }
  return best;
}

}  // namespace

PiecewiseLinearCdf cdf_learn(std::span<const QuantilePoint> points, double epsilon) {
  if (!(epsilon >= 0.0)) throw ConfigError("CDF-Learn epsilon must be non-negative");
  if (points.empty()) throw ConfigError("CDF-Learn needs at least one quantile point");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].value > points[i - 1].value)) throw ConfigError("quantile points must be strictly increasing");
  }

  std::vector<bool> is_hinge(points.size(), false);
  is_hinge.front() = true;
  is_hinge.back() = true;

  std::vector<std::pair<std::size_t, std::size_t>> pending{{0, points.size() - 1}};
  while (!pending.empty()) {
    const auto [lo, hi] = pending.back();
    pending.pop_back();
    if (hi - lo + 1 < 3) continue;
    // The bound applies to the summed squared residuals of the chord, so
    // larger populations are fitted more finely at the same epsilon.
    if (segment_sse(points, lo, hi) < epsilon) continue;
    const std::size_t split = best_split(points, lo, hi);
    is_hinge[split] = true;
    pending.emplace_back(split, hi);
    pending.emplace_back(lo, split);
  }

  std::vector<Hinge> hinges;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (is_hinge[i]) hinges.push_back({points[i].value, points[i].quantile});
  }
  hinges.back().cdf = 1.0;
  return PiecewiseLinearCdf(std::move(hinges));
}

double sum_squared_residuals(const PiecewiseLinearCdf& cdf, std::span<const QuantilePoint> points) {
  double total = 0.0;
  for (const auto& p : points) {
    const double r = cdf.cdf(p.value) - p.quantile;
    total += r * r;
  }
  return total;
}

namespace {

std::variant<PiecewiseLinearCdf, DiracDistribution> collapse_point_mass(PiecewiseLinearCdf cdf) {
  if (cdf.size() == 1) return DiracDistribution{cdf.support_min()};
  return cdf;
}

}  // namespace

NumericDistribution::NumericDistribution(PiecewiseLinearCdf cdf) : repr_(collapse_point_mass(std::move(cdf))) {}

NumericDistribution NumericDistribution::fit(std::span<const double> samples, std::span<const double> weights,
                                             double epsilon) {
  const auto points = build_quantile_dataset(samples, weights);
  if (points.size() == 1) return DiracDistribution{points.front().value};
  return cdf_learn(points, epsilon);
}

double NumericDistribution::cdf(double x) const {
  if (const auto* d = dirac()) return x >= d->value ? 1.0 : 0.0;
  return plf()->cdf(x);
}

double NumericDistribution::interval_probability(double lower, double upper) const {
  if (lower > upper) throw ConfigError("interval lower bound exceeds upper bound");
  if (const auto* d = dirac()) return lower <= d->value && d->value <= upper ? 1.0 : 0.0;
  return plf()->interval_probability(lower, upper);
}

double NumericDistribution::likelihood(double x) const {
  if (const auto* d = dirac()) return x == d->value ? 1.0 : 0.0;
  return plf()->density(x);
}

NumericDistribution NumericDistribution::condition(const Interval& evidence) const {
  if (evidence.is_point()) {
    if (!(likelihood(evidence.lower) > 0.0)) {
      throw ZeroProbabilityError("point evidence lies outside the distribution's support");
    }
    return DiracDistribution{evidence.lower};
  }
  if (const auto* d = dirac()) {
    if (!evidence.contains(d->value)) throw ZeroProbabilityError("interval evidence excludes the point mass");
    return *this;
  }
  return plf()->crop(evidence.lower, evidence.upper);
}

double NumericDistribution::expectation() const {
  if (const auto* d = dirac()) return d->value;
  return plf()->expectation();
}

double NumericDistribution::ppf(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("ppf argument must lie in [0, 1]");
  if (const auto* d = dirac()) return d->value;
  return plf()->ppf(p);
}

double NumericDistribution::sample(RandomStream& rng) const {
  if (const auto* d = dirac()) return d->value;
  return plf()->sample(rng);
}

ConfidenceInterval NumericDistribution::confidence_interval(double theta) const {
  if (!(theta >= 0.0 && theta <= 1.0)) throw ConfigError("confidence level must lie in [0, 1]");
  if (const auto* d = dirac()) return {d->value, d->value};
  return plf()->confidence_interval(theta);
}

Mode NumericDistribution::mode() const {
  if (const auto* d = dirac()) return {d->value, 1.0};
  return plf()->mode();
}

double NumericDistribution::support_min() const {
  if (const auto* d = dirac()) return d->value;
  return plf()->support_min();
}

double NumericDistribution::support_max() const {
  if (const auto* d = dirac()) return d->value;
  return plf()->support_max();
}

std::vector<Hinge> NumericDistribution::hinges() const {
  if (const auto* d = dirac()) return {{d->value, 1.0}};
  return plf()->hinges();
}

std::size_t NumericDistribution::parameter_count() const {
  if (dirac()) return 1;
  return plf()->size();
}

NumericDistribution mix(std::span<const std::pair<double, const NumericDistribution*>> components) {
  double total = 0.0;
  for (const auto& [w, dist] : components) {
    if (!(w >= 0.0)) throw ConfigError("mixture weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw ConfigError("mixture weights must have a positive sum");

  struct Knot {
    double x;
    bool left_limit;
  };
  std::vector<Knot> knots;
  std::vector<std::pair<double, std::vector<Hinge>>> parts;
  for (const auto& [w, dist] : components) {
    if (w == 0.0) continue;
    auto hinges = dist->hinges();
    for (const Hinge& h : hinges) knots.push_back({h.x, false});
    if (hinges.front().cdf > 0.0) {
      knots.push_back({std::nextafter(hinges.front().x, -std::numeric_limits<double>::infinity()), true});
    }
    parts.emplace_back(w / total, std::move(hinges));
  }
  std::sort(knots.begin(), knots.end(), [](const Knot& a, const Knot& b) {
    return a.x < b.x || (a.x == b.x && a.left_limit < b.left_limit);
  });
  // A position that is a real hinge of some component is never a left limit.
  std::vector<Knot> unique;
  for (const Knot& k : knots) {
    if (!unique.empty() && unique.back().x == k.x) continue;
    unique.push_back(k);
  }

  auto eval = [](const std::vector<Hinge>& hinges, double x) {
    if (x < hinges.front().x) return 0.0;
    if (x >= hinges.back().x) return 1.0;
    const auto it = std::upper_bound(hinges.begin(), hinges.end(), x,
                                     [](double value, const Hinge& h) { return value < h.x; });
    const Hinge& a = *(it - 1);
    const Hinge& b = *it;
    return a.cdf + (x - a.x) / (b.x - a.x) * (b.cdf - a.cdf);
  };

  std::vector<Hinge> merged;
  for (const Knot& k : unique) {
    double value = 0.0;
    for (const auto& [w, hinges] : parts) value += w * eval(hinges, k.x);
    value = std::clamp(value, 0.0, 1.0);
    // Leading left-limit knots would smear the first point mass.
    if (merged.empty() && k.left_limit && value == 0.0) continue;
    if (!merged.empty()) value = std::max(value, merged.back().cdf);
    merged.push_back({k.x, value});
  }
  merged.back().cdf = 1.0;
  return PiecewiseLinearCdf(std::move(merged));
}

}  // namespace jpt
