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
#include "kanova/product_kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kanova {

ProductKernel::ProductKernel(std::vector<Kernel1D> factors, ProductMeasure measures)
    : factors_(std::move(factors)), measures_(std::move(measures)) {
  if (factors_.empty()) throw std::invalid_argument("ProductKernel: need at least one factor");
  if (static_cast<int>(factors_.size()) != measures_.dim())
    throw std::invalid_argument("ProductKernel: factor count must match measure dimension");
  integrals_.reserve(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (!(factors_[i].domain() == measures_.coordinate(static_cast<int>(i)).support()))
      throw std::invalid_argument("ProductKernel: factor domain must match measure support");
    integrals_.emplace_back(factors_[i]);
  }
}

ProductKernel ProductKernel::iso(const Kernel1D& factor, int d, int quadrature_order) {
  std::vector<Kernel1D> factors(static_cast<std::size_t>(d), factor);
  std::vector<Measure1D> coords(static_cast<std::size_t>(d),
                                Measure1D(factor.domain(), quadrature_order));
  return ProductKernel(std::move(factors), ProductMeasure(std::move(coords)));
}

ProductKernel ProductKernel::anova_unit(std::vector<Kernel1D> factors, ProductMeasure measures) {
  ProductKernel pk(std::move(factors), std::move(measures));
  pk.anova_form_ = true;
  return pk;
}

ProductKernel ProductKernel::anova_unit_iso(const Kernel1D& factor, int d, int quadrature_order) {
  ProductKernel pk = iso(factor, d, quadrature_order);
  pk.anova_form_ = true;
  return pk;
}

double ProductKernel::factor_value(int i, double xi, double yi) const {
  if (!anova_form_) return factor(i)(xi, yi);
  const KernelIntegrals& gi = integrals(i);
  return 1.0 + factor(i)(xi, yi) - gi.mean_embedding(xi) - gi.mean_embedding(yi) +
         gi.double_integral();
}

void ProductKernel::check_point(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim())
    throw std::invalid_argument("ProductKernel: point has wrong dimension");
  for (int i = 0; i < dim(); ++i)
    if (!factors_[static_cast<std::size_t>(i)].domain().contains(x[static_cast<std::size_t>(i)]))
      throw std::invalid_argument("ProductKernel: coordinate " + std::to_string(i + 1) +
                                  " outside domain");
}

double ProductKernel::factor_centred(int i, double xi, double yi) const {
  return factor_value(i, xi, yi) - embedding(i, xi) - embedding(i, yi) +
         factor_double_integral(i);
}

double ProductKernel::eval_full(std::span<const double> x, std::span<const double> y) const {
  check_point(x);
  check_point(y);
  double prod = 1.0;
  for (int i = 0; i < dim(); ++i)
    prod *= factor_value(i, x[static_cast<std::size_t>(i)], y[static_cast<std::size_t>(i)]);
  return prod;
}

PointContext ProductKernel::make_context(std::span<const double> x) const {
  check_point(x);
  PointContext ctx;
  ctx.x.assign(x.begin(), x.end());
  ctx.embedding.resize(x.size());
  for (int i = 0; i < dim(); ++i)
    ctx.embedding[static_cast<std::size_t>(i)] = embedding(i, x[static_cast<std::size_t>(i)]);
  return ctx;
}

bool ProductKernel::factors_strictly_positive() const {
  for (int i = 0; i < dim(); ++i) {
    if (!anova_form_ && !factor(i).strictly_positive()) return false;
    // Probe on the quadrature nodes plus endpoints; the catalogue families
    // are positive by construction, so this guards injected rules only.
    const QuadratureRule& r = measures_.coordinate(i).rule();
    const Interval& dom = factor(i).domain();
    std::vector<double> probes = r.nodes;
    probes.push_back(dom.lower);
    probes.push_back(dom.upper);
    for (double a : probes)
      for (double b : {dom.lower, 0.5 * (dom.lower + dom.upper), dom.upper})
        if (!(factor_value(i, a, b) > 0.0)) return false;
  }
  return true;
}

namespace {

double term_from_parts(const ProductKernel& pk, SubsetMask u, SubsetMask v,
                       std::span<const double> x, std::span<const double> y,
                       std::span<const double> ex, std::span<const double> ey) {
  double prod = 1.0;
  for (int i = 0; i < pk.dim(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    const bool in_u = u.contains(i);
    const bool in_v = v.contains(i);
    const double ee = pk.factor_double_integral(i);
    if (in_u && in_v) {
      prod *= pk.factor_value(i, x[k], y[k]) - ex[k] - ey[k] + ee;
    } else if (in_u) {
      prod *= ex[k] - ee;
    } else if (in_v) {
      prod *= ey[k] - ee;
    } else {
      prod *= ee;
    }
  }
  return prod;
}

}  // namespace

double kanova_term_product(const ProductKernel& pk, SubsetMask u, SubsetMask v,
                           std::span<const double> x, std::span<const double> y) {
  const PointContext cx = pk.make_context(x);
  const PointContext cy = pk.make_context(y);
  return kanova_term_product(pk, u, v, cx, cy);
}

double kanova_term_product(const ProductKernel& pk, SubsetMask u, SubsetMask v,
                           const PointContext& cx, const PointContext& cy) {
  const SubsetMask full = SubsetMask::full_set(pk.dim());
  if (!u.is_subset_of(full) || !v.is_subset_of(full))
    throw std::invalid_argument("kanova_term_product: subset exceeds dimension");
  return term_from_parts(pk, u, v, cx.x, cy.x, cx.embedding, cy.embedding);
}

OrthoAdditiveParts additive_ortho_components(const ProductKernel& pk,
                                             std::span<const double> x,
                                             std::span<const double> y) {
  return additive_ortho_components(pk, pk.make_context(x), pk.make_context(y));
}

OrthoAdditiveParts additive_ortho_components(const ProductKernel& pk, const PointContext& cx,
                                             const PointContext& cy) {
  if (!pk.factors_strictly_positive())
    throw std::invalid_argument(
        "additive_ortho_components: factors must be strictly positive on their domain");
  const int d = pk.dim();

  double ee_prod = 1.0;   // prod_i EE_i
  double ex_prod = 1.0;   // prod_i E_i(x_i)
  double ey_prod = 1.0;   // prod_i E_i(y_i)
  double full = 1.0;      // prod_i k_i(x_i,y_i)
  double sum_ax = 0.0;    // sum_i E_i(x_i)/EE_i
  double sum_ay = 0.0;
  double sum_mid = 0.0;   // sum_i [k_i/EE_i - E_i(x)E_i(y)/EE_i^2]
  double sum_kx = 0.0;    // sum_i k_i/E_i(x_i)
  double sum_ky = 0.0;    // sum_i k_i/E_i(y_i)
  for (int i = 0; i < d; ++i) {
    const auto j = static_cast<std::size_t>(i);
    const double ee = pk.factor_double_integral(i);
    const double ki = pk.factor_value(i, cx.x[j], cy.x[j]);
    const double ex = cx.embedding[j];
    const double ey = cy.embedding[j];
    ee_prod *= ee;
    ex_prod *= ex;
    ey_prod *= ey;
    full *= ki;
    sum_ax += ex / ee;
    sum_ay += ey / ee;
    sum_mid += ki / ee - ex * ey / (ee * ee);
    sum_kx += ki / ex;
    sum_ky += ki / ey;
  }

  const double ax = ee_prod * (1.0 - d + sum_ax);
  const double ay = ee_prod * (1.0 - d + sum_ay);
  OrthoAdditiveParts parts{};
  parts.additive = ax * ay / ee_prod + ee_prod * sum_mid;
  parts.cross_oa = ex_prod * (1.0 - d + sum_kx) - parts.additive;
  parts.cross_ao = ey_prod * (1.0 - d + sum_ky) - parts.additive;
  parts.ortho = full - parts.cross_oa - parts.cross_ao - parts.additive;
  return parts;
}

}  // namespace kanova
