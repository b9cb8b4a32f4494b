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

#include <memory>
#include <span>
#include <vector>

#include "kanova/kernels.hpp"
#include "kanova/quadrature.hpp"
#include "kanova/subset.hpp"

namespace kanova {

/// A point together with its per-dimension mean-embedding values E_i(x_i).
/// Precomputing contexts makes Gram assembly cheap: embeddings cost one or
/// two special-function calls per dimension and are reused across pairs.
struct PointContext {
  std::vector<double> x;
  std::vector<double> embedding;  // E_i(x_i)
};

/// Tensor-product kernel prod_i k_i(x_i, y_i) with per-factor closed-form
/// integrals against the product measure.
///
/// The alternative unit-constant ("ANOVA") form replaces every factor by
/// 1 + k_i0 with k_i0 the argumentwise-centred version of the named kernel;
/// its factor embeddings and double integrals are identically 1.
class ProductKernel {
 public:
  ProductKernel(std::vector<Kernel1D> factors, ProductMeasure measures);

  /// Convenience: d equal copies of `factor` with its (unit-interval) domain
  /// replicated into a uniform product measure.
  static ProductKernel iso(const Kernel1D& factor, int d, int quadrature_order = 64);

  /// prod_i (1 + k_i0) with the k_i taken from `factors`.
  static ProductKernel anova_unit(std::vector<Kernel1D> factors, ProductMeasure measures);
  static ProductKernel anova_unit_iso(const Kernel1D& factor, int d, int quadrature_order = 64);

  int dim() const { return static_cast<int>(factors_.size()); }
  bool anova_form() const { return anova_form_; }
  const ProductMeasure& measures() const { return measures_; }
  const Kernel1D& factor(int i) const { return factors_[static_cast<std::size_t>(i)]; }
  const KernelIntegrals& integrals(int i) const { return integrals_[static_cast<std::size_t>(i)]; }

  /// Value of the i-th factor (1 + k_i0 in the ANOVA form).
  double factor_value(int i, double xi, double yi) const;

  double embedding(int i, double t) const {
    return anova_form_ ? 1.0 : integrals(i).mean_embedding(t);
  }
  double factor_double_integral(int i) const {
    return anova_form_ ? 1.0 : integrals(i).double_integral();
  }
  double factor_diag_mean(int i) const {
    const KernelIntegrals& gi = integrals(i);
    return anova_form_ ? 1.0 + gi.diagonal_mean() - gi.double_integral() : gi.diagonal_mean();
  }

  /// Argumentwise-centred factor; identical in both forms.
  double factor_centred(int i, double xi, double yi) const;

  /// Full kernel prod_i factor_value.
  double eval_full(std::span<const double> x, std::span<const double> y) const;

  PointContext make_context(std::span<const double> x) const;

  /// True when every factor is strictly positive on its domain (hypothesis of
  /// the additive/ortho-additive closed forms); probed on the quadrature grid
  /// plus the domain endpoints.
  bool factors_strictly_positive() const;

  void check_point(std::span<const double> x) const;

 private:
  std::vector<Kernel1D> factors_;
  std::vector<KernelIntegrals> integrals_;
  ProductMeasure measures_;
  bool anova_form_ = false;
};

/// KANOVA term k_{u,v}(x,y) of a tensor-product kernel:
///   prod_{i in u&v} k_i0(x_i,y_i) * prod_{i in u\v} (E_i(x_i)-EE_i)
///   * prod_{i in v\u} (E_i(y_i)-EE_i) * prod_{i outside} EE_i.
/// Depends only on x_u and y_v.
double kanova_term_product(const ProductKernel& pk, SubsetMask u, SubsetMask v,
                           std::span<const double> x, std::span<const double> y);

/// Context-based variant used by Gram assembly.
double kanova_term_product(const ProductKernel& pk, SubsetMask u, SubsetMask v,
                           const PointContext& cx, const PointContext& cy);

/// The additive component, the two additive/ortho-additive cross-covariances,
/// and the ortho-additive component of a product kernel. The four parts sum
/// to the kernel value.
struct OrthoAdditiveParts {
  double additive;       // covariance of the constant-plus-main-effects part
  double cross_oa;       // cov(ortho part at x, additive part at y)
  double cross_ao;       // cov(additive part at x, ortho part at y)
  double ortho;          // covariance of the interaction part
};

/// Closed-form split of a strictly positive product kernel into additive and
/// ortho-additive components. Throws std::invalid_argument when a factor is
/// not strictly positive on its domain.
OrthoAdditiveParts additive_ortho_components(const ProductKernel& pk,
                                             std::span<const double> x,
                                             std::span<const double> y);

/// Same split evaluated from precomputed contexts.
OrthoAdditiveParts additive_ortho_components(const ProductKernel& pk, const PointContext& cx,
                                             const PointContext& cy);

}  // namespace kanova
