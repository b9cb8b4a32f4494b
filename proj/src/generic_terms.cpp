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
#include "kanova/generic_terms.hpp"

#include <stdexcept>
#include <vector>

namespace kanova {

GenericTermEvaluator::GenericTermEvaluator(KernelFn kernel, ProductMeasure measures,
                                           std::size_t node_budget)
    : kernel_(std::move(kernel)), measures_(std::move(measures)), node_budget_(node_budget) {
  if (!kernel_) throw std::invalid_argument("GenericTermEvaluator: null kernel");
  if (measures_.dim() > 3)
    throw resource_limit_error(
        "GenericTermEvaluator: restricted to d <= 3; use the product-kernel fast path");
}

double GenericTermEvaluator::partial_integral(SubsetMask u_fix, SubsetMask v_fix,
                                              std::span<const double> x,
                                              std::span<const double> y) const {
  if (u_fix.empty() && v_fix.empty() && full_integral_) return *full_integral_;

  const int d = measures_.dim();
  const TensorRule gx = tensor_rule(measures_, u_fix.complement(d), node_budget_);
  const TensorRule gy = tensor_rule(measures_, v_fix.complement(d), node_budget_);
  if (gy.size() != 0 && gx.size() > node_budget_ / gy.size())
    throw resource_limit_error("kanova_term_generic: combined grid over " +
                               std::to_string(gx.active.size() + gy.active.size()) +
                               " coordinates exceeds node budget");

  std::vector<double> xx(x.begin(), x.end());
  std::vector<double> yy(y.begin(), y.end());
  double acc = 0.0;
  for (std::size_t gi = 0; gi < gx.size(); ++gi) {
    const double* nx = gx.node(gi);
    for (std::size_t a = 0; a < gx.active.size(); ++a)
      xx[static_cast<std::size_t>(gx.active[a])] = nx[a];
    double inner = 0.0;
    for (std::size_t gj = 0; gj < gy.size(); ++gj) {
      const double* ny = gy.node(gj);
      for (std::size_t a = 0; a < gy.active.size(); ++a)
        yy[static_cast<std::size_t>(gy.active[a])] = ny[a];
      inner += gy.weights[gj] * kernel_(xx, yy);
    }
    acc += gx.weights[gi] * inner;
  }
  if (u_fix.empty() && v_fix.empty()) full_integral_ = acc;
  return acc;
}

double GenericTermEvaluator::term(SubsetMask u, SubsetMask v, std::span<const double> x,
                                  std::span<const double> y) const {
  const int d = measures_.dim();
  if (static_cast<int>(x.size()) != d || static_cast<int>(y.size()) != d)
    throw std::invalid_argument("kanova_term_generic: point has wrong dimension");
  const SubsetMask full = SubsetMask::full_set(d);
  if (!u.is_subset_of(full) || !v.is_subset_of(full))
    throw std::invalid_argument("kanova_term_generic: subset exceeds dimension");

  double acc = 0.0;
  for_each_subset_of(u, [&](SubsetMask up) {
    for_each_subset_of(v, [&](SubsetMask vp) {
      const int parity =
          (u.cardinality() + v.cardinality() - up.cardinality() - vp.cardinality()) % 2;
      const double sign = parity ? -1.0 : 1.0;
      acc += sign * partial_integral(up, vp, x, y);
    });
  });
  return acc;
}

double kanova_term_generic(const KernelFn& kernel, SubsetMask u, SubsetMask v,
                           std::span<const double> x, std::span<const double> y,
                           const ProductMeasure& measures, std::size_t node_budget) {
  return GenericTermEvaluator(kernel, measures, node_budget).term(u, v, x, y);
}

}  // namespace kanova
