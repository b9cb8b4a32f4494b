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
#include "kanova/fanova.hpp"

#include <cmath>
#include <stdexcept>

#include "kanova/rng.hpp"

namespace kanova {

TensorGridData::TensorGridData(const ProductMeasure& measures, std::size_t node_budget) {
  const int d = measures.dim();
  sizes_.resize(static_cast<std::size_t>(d));
  strides_.resize(static_cast<std::size_t>(d));
  axis_nodes_.resize(static_cast<std::size_t>(d));
  axis_weights_.resize(static_cast<std::size_t>(d));
  total_ = 1;
  for (int i = 0; i < d; ++i) {
    const auto j = static_cast<std::size_t>(i);
    const QuadratureRule& r = measures.coordinate(i).rule();
    axis_nodes_[j] = r.nodes;
    axis_weights_[j] = r.weights;
    sizes_[j] = r.size();
    strides_[j] = total_;
    if (total_ > node_budget / r.size())
      throw resource_limit_error("TensorGridData: full grid over " + std::to_string(d) +
                                 " coordinates exceeds node budget");
    total_ *= r.size();
  }
  weights_.assign(total_, 1.0);
  for (std::size_t g = 0; g < total_; ++g) {
    double w = 1.0;
    for (int i = 0; i < d; ++i) {
      const auto j = static_cast<std::size_t>(i);
      w *= axis_weights_[j][(g / strides_[j]) % sizes_[j]];
    }
    weights_[g] = w;
  }
}

std::vector<double> TensorGridData::point(std::size_t g) const {
  std::vector<double> x(static_cast<std::size_t>(dim()));
  for (int i = 0; i < dim(); ++i) x[static_cast<std::size_t>(i)] = node(g, i);
  return x;
}

std::vector<double> TensorGridData::evaluate(const PointFn& f) const {
  std::vector<double> values(total_);
  std::vector<double> x(static_cast<std::size_t>(dim()));
  for (std::size_t g = 0; g < total_; ++g) {
    for (int i = 0; i < dim(); ++i) x[static_cast<std::size_t>(i)] = node(g, i);
    values[g] = f(x);
  }
  return values;
}

double TensorGridData::integrate(std::span<const double> values) const {
  double acc = 0.0;
  for (std::size_t g = 0; g < total_; ++g) acc += weights_[g] * values[g];
  return acc;
}

double TensorGridData::inner(std::span<const double> a, std::span<const double> b) const {
  double acc = 0.0;
  for (std::size_t g = 0; g < total_; ++g) acc += weights_[g] * a[g] * b[g];
  return acc;
}

void TensorGridData::project_constant(std::vector<double>& values, int axis) const {
  const auto j = static_cast<std::size_t>(axis);
  const std::size_t n = sizes_[j], stride = strides_[j];
  const std::vector<double>& w = axis_weights_[j];
  for (std::size_t outer = 0; outer < total_; outer += n * stride) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      const std::size_t base = outer + inner;
      double m = 0.0;
      for (std::size_t t = 0; t < n; ++t) m += w[t] * values[base + t * stride];
      for (std::size_t t = 0; t < n; ++t) values[base + t * stride] = m;
    }
  }
}

void TensorGridData::project_residual(std::vector<double>& values, int axis) const {
  const auto j = static_cast<std::size_t>(axis);
  const std::size_t n = sizes_[j], stride = strides_[j];
  const std::vector<double>& w = axis_weights_[j];
  for (std::size_t outer = 0; outer < total_; outer += n * stride) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      const std::size_t base = outer + inner;
      double m = 0.0;
      for (std::size_t t = 0; t < n; ++t) m += w[t] * values[base + t * stride];
      for (std::size_t t = 0; t < n; ++t) values[base + t * stride] -= m;
    }
  }
}

std::vector<double> TensorGridData::effect(std::span<const double> values, SubsetMask u) const {
  std::vector<double> out(values.begin(), values.end());
  for (int i = 0; i < dim(); ++i) {
    if (u.contains(i))
      project_residual(out, i);
    else
      project_constant(out, i);
  }
  return out;
}

GridFunction::GridFunction(PointFn f, ProductMeasure m, std::optional<std::vector<int>> orders)
    : evaluator(std::move(f)), measures(std::move(m)),
      effect_quadrature_order(std::move(orders)) {
  if (!evaluator) throw std::invalid_argument("GridFunction: null evaluator");
  if (effect_quadrature_order &&
      static_cast<int>(effect_quadrature_order->size()) != measures.dim())
    throw std::invalid_argument("GridFunction: order override must have one entry per dimension");
}

ProductMeasure GridFunction::effective_measures() const {
  if (!effect_quadrature_order) return measures;
  std::vector<Measure1D> coords;
  coords.reserve(static_cast<std::size_t>(measures.dim()));
  for (int i = 0; i < measures.dim(); ++i)
    coords.emplace_back(measures.coordinate(i).support(),
                        (*effect_quadrature_order)[static_cast<std::size_t>(i)]);
  return ProductMeasure(std::move(coords));
}

EffectFunction fanova_effect(const GridFunction& f, SubsetMask u) {
  const ProductMeasure measures = f.effective_measures();
  const int d = measures.dim();
  if (d > 6)
    throw resource_limit_error("fanova_effect: full tensor integrals restricted to d <= 6");
  if (!u.is_subset_of(SubsetMask::full_set(d)))
    throw std::invalid_argument("fanova_effect: subset exceeds dimension");

  // The u' = empty term is the full integral, constant in x: do it once.
  const TensorRule full_grid = tensor_rule(measures, SubsetMask::full_set(d));
  double full_integral = 0.0;
  {
    std::vector<double> x(static_cast<std::size_t>(d));
    for (std::size_t g = 0; g < full_grid.size(); ++g) {
      const double* nx = full_grid.node(g);
      for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] = nx[static_cast<std::size_t>(i)];
      full_integral += full_grid.weights[g] * f.evaluator(x);
    }
  }
  if (!std::isfinite(full_integral))
    throw evaluation_error("fanova_effect: non-finite integral of f");

  const double sign_empty = (u.cardinality() % 2 == 0) ? 1.0 : -1.0;
  PointFn eval = [f, measures, u, d, sign_empty, full_integral](std::span<const double> x) {
    double acc = sign_empty * full_integral;
    for_each_subset_of(u, [&](SubsetMask up) {
      if (up.empty()) return;
      const TensorRule grid = tensor_rule(measures, up.complement(d));
      const int parity = (u.cardinality() - up.cardinality()) % 2;
      const double sign = parity ? -1.0 : 1.0;
      std::vector<double> xx(x.begin(), x.end());
      double integral = 0.0;
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const double* nx = grid.node(g);
        for (std::size_t a = 0; a < grid.active.size(); ++a)
          xx[static_cast<std::size_t>(grid.active[a])] = nx[a];
        integral += grid.weights[g] * f.evaluator(xx);
      }
      acc += sign * integral;
    });
    return acc;
  };
  return EffectFunction{u, std::move(eval)};
}

double reconstruct_check(const GridFunction& f, int n_probes, std::uint64_t seed) {
  const ProductMeasure measures = f.effective_measures();
  const int d = measures.dim();
  if (d > 4) throw resource_limit_error("reconstruct_check: 2^d effects restricted to d <= 4");

  std::vector<EffectFunction> effects;
  for (const SubsetMask& u : all_subsets(d)) effects.push_back(fanova_effect(f, u));

  NormalSampler rng(seed);
  double worst = 0.0;
  std::vector<double> x(static_cast<std::size_t>(d));
  for (int p = 0; p < n_probes; ++p) {
    for (int i = 0; i < d; ++i) {
      const Interval& s = measures.coordinate(i).support();
      x[static_cast<std::size_t>(i)] = s.lower + s.length() * rng.uniform();
    }
    double sum = 0.0;
    for (const EffectFunction& e : effects) sum += e(x);
    worst = std::max(worst, std::abs(sum - f.evaluator(x)));
  }
  return worst;
}

SobolIndices sobol_indices(const GridFunction& f, std::optional<int> max_cardinality) {
  const ProductMeasure measures = f.effective_measures();
  const int d = measures.dim();
  if (!max_cardinality && d > 4)
    throw resource_limit_error(
        "sobol_indices: full enumeration restricted to d <= 4; pass max_cardinality");

  const TensorGridData grid(measures);
  const std::vector<double> values = grid.evaluate(f.evaluator);
  for (double v : values)
    if (!std::isfinite(v)) throw evaluation_error("sobol_indices: f not finite on the grid");

  const double mean = grid.integrate(values);
  std::vector<double> centred = values;
  for (double& v : centred) v -= mean;
  const double total_variance = grid.inner(centred, centred);
  if (total_variance <= 1e-14)
    throw degenerate_error("sobol_indices: total variance vanishes");

  const std::vector<SubsetMask> subsets =
      max_cardinality ? subsets_up_to_cardinality(d, *max_cardinality) : all_subsets(d);

  SobolIndices out;
  out.total_variance = total_variance;
  for (const SubsetMask& u : subsets) {
    if (u.empty()) continue;
    const std::vector<double> eff = grid.effect(values, u);
    out.values[u] = grid.inner(eff, eff) / total_variance;
  }
  return out;
}

}  // namespace kanova
