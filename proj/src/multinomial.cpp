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

#include "jpt/multinomial.hpp"

#include <cmath>
#include <string>

#include "jpt/error.hpp"

namespace jpt {

Multinomial::Multinomial(std::vector<double> probabilities) : probabilities_(std::move(probabilities)) {
  if (probabilities_.empty()) throw ConfigError("a multinomial needs a non-empty domain");
  double total = 0.0;
  for (double p : probabilities_) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("multinomial probabilities must lie in [0, 1]");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ConfigError("multinomial probabilities sum to " + std::to_string(total) + ", not 1");
  }
}

Multinomial Multinomial::fit(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ConfigError("histogram weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw ConfigError("histogram has zero total weight");
  std::vector<double> p(weights.begin(), weights.end());
  for (double& x : p) x /= total;
  return Multinomial(std::move(p));
}

Multinomial Multinomial::uniform(std::size_t domain_size) {
  return Multinomial(std::vector<double>(domain_size, 1.0 / static_cast<double>(domain_size)));
}

double relative_entropy(std::span<const double> counts) {
  if (counts.size() <= 1) return 0.0;
  double total = 0.0;
  for (double c : counts) total += c;
  if (!(total > 0.0)) return 0.0;
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) {
      const double p = c / total;
      h -= p * std::log(p);
    }
  }
  return std::max(0.0, h / std::log(static_cast<double>(counts.size())));
}

double Multinomial::entropy_rel() const { return relative_entropy(probabilities_); }

Multinomial Multinomial::condition(const ValueSet& admissible) const {
  if (admissible.values.empty()) throw ConfigError("admissible value set is empty");
  std::vector<double> p(probabilities_.size(), 0.0);
  double mass = 0.0;
  for (std::size_t v : admissible.values) {
    if (v >= p.size()) throw ConfigError("admissible value outside the domain");
    p[v] = probabilities_[v];
    mass += p[v];
  }
  if (!(mass > 0.0)) throw ZeroProbabilityError("admissible values carry no probability mass");
  for (double& x : p) x /= mass;
  return Multinomial(std::move(p));
}

double Multinomial::event_probability(const ValueSet& subset) const {
  double mass = 0.0;
  for (std::size_t v : subset.values) {
    if (v < probabilities_.size()) mass += probabilities_[v];
  }
  return std::min(mass, 1.0);
}

std::size_t Multinomial::sample(RandomStream& rng) const {
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t v = 0; v < probabilities_.size(); ++v) {
    if (probabilities_[v] <= 0.0) continue;
    cumulative += probabilities_[v];
    last_positive = v;
    if (u < cumulative) return v;
  }
  return last_positive;
}

std::size_t Multinomial::argmax() const {
  std::size_t best = 0;
  for (std::size_t v = 1; v < probabilities_.size(); ++v) {
    if (probabilities_[v] > probabilities_[best]) best = v;
  }
  return best;
}

}  // namespace jpt
