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

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "kanova/quadrature.hpp"
#include "kanova/subset.hpp"

namespace kanova {

using PointFn = std::function<double(std::span<const double>)>;

/// Full tensor-product quadrature grid over all coordinates, with the
/// per-dimension projection operators acting on arrays of grid values.
/// The discrete operators are exact quadrature on the grid; applying them
/// to sampled functions realizes effects and norms without extra error
/// beyond the grid quadrature itself.
class TensorGridData {
 public:
  TensorGridData(const ProductMeasure& measures, std::size_t node_budget = kDefaultNodeBudget);

  int dim() const { return static_cast<int>(sizes_.size()); }
  std::size_t size() const { return total_; }
  double node(std::size_t g, int axis) const {
    return axis_nodes_[static_cast<std::size_t>(axis)][(g / strides_[static_cast<std::size_t>(axis)]) %
                                                       sizes_[static_cast<std::size_t>(axis)]];
  }
  double weight(std::size_t g) const { return weights_[g]; }
  const std::vector<double>& weights() const { return weights_; }

  /// Coordinates of grid point g.
  std::vector<double> point(std::size_t g) const;

  std::vector<double> evaluate(const PointFn& f) const;

  double integrate(std::span<const double> values) const;
  double inner(std::span<const double> a, std::span<const double> b) const;

  /// Replaces values by their weighted mean along `axis` (projection onto
  /// functions constant in that coordinate).
  void project_constant(std::vector<double>& values, int axis) const;
  /// Subtracts the weighted mean along `axis`.
  void project_residual(std::vector<double>& values, int axis) const;

  /// Discrete effect extraction: residual projections along the coordinates
  /// of u, constant projections along the rest.
  std::vector<double> effect(std::span<const double> values, SubsetMask u) const;

 private:
  std::vector<std::vector<double>> axis_nodes_;
  std::vector<std::vector<double>> axis_weights_;
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> strides_;  // first axis fastest
  std::vector<double> weights_;
  std::size_t total_ = 0;
};

/// A square-integrable function together with the measure it decomposes
/// against and optional per-dimension quadrature orders for effect
/// computation.
struct GridFunction {
  PointFn evaluator;
  ProductMeasure measures;
  std::optional<std::vector<int>> effect_quadrature_order;  // per-dimension override

  GridFunction(PointFn f, ProductMeasure m,
               std::optional<std::vector<int>> orders = std::nullopt);

  /// Measures with the order override applied.
  ProductMeasure effective_measures() const;
};

/// An effect: depends only on the coordinates in `subset` and integrates to
/// zero over each of them.
struct EffectFunction {
  SubsetMask subset;
  PointFn evaluator;

  double operator()(std::span<const double> x) const { return evaluator(x); }
};

/// Effect of f for the subset u by the alternating sum over u' <= u of
/// partial tensor-quadrature integrals. Restricted to d <= 6.
EffectFunction fanova_effect(const GridFunction& f, SubsetMask u);

/// Max absolute deviation of the sum of all 2^d effects from f over a
/// deterministic set of probe points (d <= 4).
double reconstruct_check(const GridFunction& f, int n_probes = 32, std::uint64_t seed = 1);

struct SobolIndices {
  std::map<SubsetMask, double> values;  // u != empty
  double total_variance = 0.0;
};

/// Sobol' indices by discrete projection on the quadrature grid. Full
/// enumeration requires d <= 4; pass max_cardinality to truncate the index
/// set for larger d.
SobolIndices sobol_indices(const GridFunction& f,
                           std::optional<int> max_cardinality = std::nullopt);

}  // namespace kanova
