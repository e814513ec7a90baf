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

// Random fixtures and brute-force oracles shared by the unit tests and the
// acceptance binary. Nothing here calls the inference module.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "jpt/data.hpp"
#include "jpt/model.hpp"
#include "jpt/quantile.hpp"
#include "jpt/random.hpp"

namespace jpt::testing {

inline std::string label(std::size_t i) { return "v" + std::to_string(i); }

/// Symbolic dataset where every variable depends on the first one through
/// random conditional tables, so trees have something to split on.
inline Dataset random_discrete_dataset(RandomStream& rng, std::size_t variables, std::size_t max_domain,
                                       std::size_t rows) {
  Schema schema;
  std::vector<std::size_t> sizes;
  for (std::size_t v = 0; v < variables; ++v) {
    const std::size_t size = 2 + rng.index(max_domain - 1);
    std::vector<std::string> domain;
    for (std::size_t i = 0; i < size; ++i) domain.push_back(label(i));
    schema.push_back(Variable::symbolic("s" + std::to_string(v), domain));
    sizes.push_back(size);
  }
  // tables[v][parent][value], unnormalised.
  std::vector<std::vector<std::vector<double>>> tables(variables);
  for (std::size_t v = 0; v < variables; ++v) {
    tables[v].assign(sizes[0], std::vector<double>(sizes[v]));
    for (auto& row : tables[v]) {
      for (double& w : row) w = rng.uniform() * rng.uniform() + 0.01;
    }
  }
  const auto draw = [&](const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = rng.uniform() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (u < weights[i]) return i;
      u -= weights[i];
    }
    return weights.size() - 1;
  };
  Dataset data(schema);
  std::vector<double> row(variables);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t first = draw(tables[0][0]);
    row[0] = static_cast<double>(first);
    for (std::size_t v = 1; v < variables; ++v) row[v] = static_cast<double>(draw(tables[v][first]));
    data.add_row(row);
  }
  return data;
}

/// Two numeric and two symbolic variables with cluster structure and a few
/// repeated values.
inline Dataset random_hybrid_dataset(RandomStream& rng, std::size_t rows) {
  Schema schema{Variable::numeric("a"), Variable::symbolic("c", {"p", "q", "r"}), Variable::numeric("b"),
                Variable::symbolic("d", {"yes", "no"})};
  const std::size_t clusters = 1 + rng.index(3);
  std::vector<std::array<double, 4>> centres;
  for (std::size_t k = 0; k < clusters; ++k) {
    centres.push_back({rng.uniform(-5, 5), static_cast<double>(rng.index(3)), rng.uniform(-5, 5),
                       static_cast<double>(rng.index(2))});
  }
  Dataset data(schema);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& c = centres[rng.index(clusters)];
    double a = rng.normal(c[0], 1.0);
    if (rng.uniform() < 0.1) a = std::round(a);
    const double row[4] = {a, rng.uniform() < 0.8 ? c[1] : static_cast<double>(rng.index(3)), rng.normal(c[2], 0.5),
                           rng.uniform() < 0.8 ? c[3] : static_cast<double>(rng.index(2))};
    data.add_row(row);
  }
  return data;
}

/// Random non-empty value subset of a symbolic domain.
inline ValueSet random_value_set(RandomStream& rng, std::size_t domain_size) {
  ValueSet set;
  while (set.values.empty()) {
    for (std::size_t v = 0; v < domain_size; ++v) {
      if (rng.uniform() < 0.5) set.values.push_back(v);
    }
  }
  return set;
}

/// Each variable is constrained with probability `density`. Numeric
/// variables get an interval inside [lo - 1, hi + 1] of the column, or with
/// probability `point_share` a point taken from the data.
inline Assignment random_assignment(RandomStream& rng, const Dataset& data, double density, double point_share = 0.0) {
  Assignment out;
  const Schema& schema = data.schema();
  for (std::size_t v = 0; v < schema.size(); ++v) {
    if (rng.uniform() >= density) continue;
    if (schema[v].is_symbolic()) {
      out.set(v, random_value_set(rng, schema[v].domain_size()));
      continue;
    }
    double lo = data.at(0, v);
    double hi = lo;
    for (std::size_t r = 1; r < data.size(); ++r) {
      lo = std::min(lo, data.at(r, v));
      hi = std::max(hi, data.at(r, v));
    }
    if (rng.uniform() < point_share) {
      const double x = data.at(rng.index(data.size()), v);
      out.set(v, Interval{x, x});
    } else {
      double a = rng.uniform(lo - 1.0, hi + 1.0);
      double b = rng.uniform(lo - 1.0, hi + 1.0);
      if (a > b) std::swap(a, b);
      out.set(v, Interval{a, b});
    }
  }
  return out;
}

/// All complete worlds of a symbolic-only schema with their mixture mass
/// sum_leaf P(leaf) * prod_i P(x_i | leaf), read straight from the leaves.
struct World {
  std::vector<std::size_t> values;
  double mass;
};

inline std::vector<World> enumerate_joint(const JptModel& model) {
  const Schema& schema = model.schema();
  std::vector<World> worlds;
  std::vector<std::size_t> values(schema.size(), 0);
  for (;;) {
    double mass = 0.0;
    for (const Leaf& leaf : model.leaves()) {
      double term = leaf.prior;
      for (std::size_t v = 0; v < schema.size(); ++v) term *= leaf.symbolic(v).probabilities()[values[v]];
      mass += term;
    }
    worlds.push_back({values, mass});
    std::size_t v = 0;
    while (v < schema.size() && ++values[v] == schema[v].domain_size()) values[v++] = 0;
    if (v == schema.size()) break;
  }
  return worlds;
}

inline bool world_satisfies(const World& world, const Assignment& assignment) {
  for (const auto& [v, constraint] : assignment) {
    const auto& allowed = std::get<ValueSet>(constraint);
    if (!allowed.contains(world.values[v])) return false;
  }
  return true;
}

/// P(q | e) = P(q and e) / P(e) by enumeration; empty when P(e) = 0.
inline std::optional<double> brute_force_probability(const std::vector<World>& worlds, const Assignment& q,
                                                     const Assignment& e) {
  double joint = 0.0;
  double evidence = 0.0;
  for (const World& w : worlds) {
    if (!world_satisfies(w, e)) continue;
    evidence += w.mass;
    if (world_satisfies(w, q)) joint += w.mass;
  }
  if (evidence <= 0.0) return std::nullopt;
  return joint / evidence;
}

/// Continuous PLF (no atom) with `pieces` random pieces, some of them flat.
inline PiecewiseLinearCdf random_plf(RandomStream& rng, std::size_t pieces) {
  std::vector<Hinge> hinges;
  double x = rng.uniform(-10.0, 10.0);
  std::vector<double> increments(pieces);
  double total = 0.0;
  for (double& inc : increments) {
    inc = rng.uniform() < 0.1 ? 0.0 : rng.uniform(0.01, 1.0);
    total += inc;
  }
  if (total == 0.0) {
    increments.back() = 1.0;
    total = 1.0;
  }
  // Same summation order as `total`, so flat pieces stay exactly flat and the
  // last value is exactly 1.
  double cumulative = 0.0;
  hinges.push_back({x, 0.0});
  for (std::size_t k = 0; k < pieces; ++k) {
    x += rng.uniform(0.05, 3.0);
    cumulative += increments[k];
    hinges.push_back({x, cumulative / total});
  }
  return PiecewiseLinearCdf(std::move(hinges));
}

}  // namespace jpt::testing
