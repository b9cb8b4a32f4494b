/*
 * Copyright 2026 The kanova authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "kanova/errors.hpp"
#include "kanova/subset.hpp"

namespace kanova {

/// A compact interval [lower, upper] with lower < upper, both finite.
struct Interval {
  double lower = 0.0;
  double upper = 1.0;

  Interval() = default;
  Interval(double lo, double hi);

  double length() const { return upper - lower; }
  bool contains(double x) const { return x >= lower && x <= upper; }
  bool operator==(const Interval&) const = default;
};

/// Quadrature rule for a probability measure on an interval: weights sum to 1,
/// nodes are strictly increasing and lie inside the support.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule normalized to the uniform probability measure on the
/// interval: exact for polynomials of degree <= 2*order - 1.
QuadratureRule gauss_legendre(int order, const Interval& interval);

/// Sum of w_j * f(node_j). Non-finite values of f propagate to the result.
double integrate_1d(const std::function<double(double)>& f, const QuadratureRule& rule);

/// Per-coordinate probability measure on a compact interval. Only the uniform
/// kind is built in; other measures enter through explicit rule injection.
class Measure1D {
 public:
  enum class Kind { uniform };

  explicit Measure1D(Interval support = Interval(0.0, 1.0), int quadrature_order = 64);

  /// Wraps an externally supplied rule (nodes must lie in the support,
  /// weights must sum to 1 within 1e-12).
  static Measure1D with_rule(Interval support, QuadratureRule rule);

  const Interval& support() const { return support_; }
  Kind kind() const { return Kind::uniform; }
  int quadrature_order() const { return order_; }
  const QuadratureRule& rule() const { return rule_; }

 private:
  Measure1D(Interval support, int order, QuadratureRule rule);

  Interval support_;
  int order_;
  QuadratureRule rule_;
};

/// Product measure over d >= 1 coordinates.
class ProductMeasure {
 public:
  explicit ProductMeasure(std::vector<Measure1D> coordinates);

  /// d independent uniform coordinates on [0,1], all with the same order.
  static ProductMeasure uniform_unit(int d, int quadrature_order = 64);

  int dim() const { return static_cast<int>(coords_.size()); }
  const Measure1D& coordinate(int i) const { return coords_[static_cast<std::size_t>(i)]; }
  const std::vector<Measure1D>& coordinates() const { return coords_; }

 private:
  std::vector<Measure1D> coords_;
};

/// Tensor-product rule over the coordinates of a subset. Nodes are stored
/// row-major (one row per grid point, |subset| columns, ordered by increasing
/// coordinate index).
struct TensorRule {
  std::vector<int> active;          // 0-based coordinate indices, increasing
  std::vector<double> nodes;        // size() == weights.size() * active.size()
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  const double* node(std::size_t g) const { return nodes.data() + g * active.size(); }
};

inline constexpr std::size_t kDefaultNodeBudget = 1'000'000;

/// Tensor grid over the coordinates in `subset`; the empty subset yields a
/// single empty node with weight 1. Throws resource_limit_error when the
/// grid would exceed the node budget.
TensorRule tensor_rule(const ProductMeasure& measures, SubsetMask subset,
                       std::size_t node_budget = kDefaultNodeBudget);

}  // namespace kanova
