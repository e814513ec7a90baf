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
#include <vector>

#include "jpt/data.hpp"
#include "jpt/random.hpp"

namespace jpt {

/// Normalised histogram over a symbolic domain, aligned with the domain order.
class Multinomial {
 public:
  /// Throws ConfigError unless probabilities are in [0, 1] and sum to 1
  /// within 1e-9.
  explicit Multinomial(std::vector<double> probabilities);

  /// Normalised frequencies. Throws ConfigError on negative entries or a
  /// zero total.
  static Multinomial fit(std::span<const double> weights);
  static Multinomial uniform(std::size_t domain_size);

  const std::vector<double>& probabilities() const { return probabilities_; }
  std::size_t size() const { return probabilities_.size(); }
  double operator[](std::size_t v) const { return probabilities_[v]; }

  /// H(p) / log|domain|; 0 for a single-value domain.
  double entropy_rel() const;
  /// Zeroes inadmissible values and renormalises. Throws ZeroProbabilityError
  /// if the admissible values carry no mass.
  Multinomial condition(const ValueSet& admissible) const;
  double event_probability(const ValueSet& subset) const;
  std::size_t sample(RandomStream& rng) const;
  /// Most probable value; ties go to the lowest index.
  std::size_t argmax() const;

  bool operator==(const Multinomial&) const = default;

 private:
  std::vector<double> probabilities_;
};

/// Relative entropy of raw (unnormalised) counts; 0 for an empty population.
double relative_entropy(std::span<const double> counts);

}  // namespace jpt
