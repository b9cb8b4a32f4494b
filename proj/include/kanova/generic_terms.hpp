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
#include <optional>
#include <span>

#include "kanova/quadrature.hpp"
#include "kanova/subset.hpp"

namespace kanova {

/// A multivariate kernel as a plain callable on (x, y).
using KernelFn = std::function<double(std::span<const double>, std::span<const double>)>;

/// KANOVA terms of an arbitrary square-integrable kernel by the alternating
/// (Mobius) sum over sub-subsets of tensor-quadrature integrals:
///   k_{u,v}(x,y) = sum_{u' <= u} sum_{v' <= v} (-1)^{|u|+|v|-|u'|-|v'|}
///                  Int k d nu_{-u'} d nu_{-v'}.
/// Restricted to d <= 3; larger dimensions must use the product fast path.
/// The full double integral (the only point-independent piece) is computed
/// once and reused across term evaluations.
class GenericTermEvaluator {
 public:
  GenericTermEvaluator(KernelFn kernel, ProductMeasure measures,
                       std::size_t node_budget = kDefaultNodeBudget);

  double term(SubsetMask u, SubsetMask v, std::span<const double> x,
              std::span<const double> y) const;

 private:
  double partial_integral(SubsetMask u_fix, SubsetMask v_fix, std::span<const double> x,
                          std::span<const double> y) const;

  KernelFn kernel_;
  ProductMeasure measures_;
  std::size_t node_budget_;
  mutable std::optional<double> full_integral_;
};

/// One-shot convenience wrapper around GenericTermEvaluator.
double kanova_term_generic(const KernelFn& kernel, SubsetMask u, SubsetMask v,
                           std::span<const double> x, std::span<const double> y,
                           const ProductMeasure& measures,
                           std::size_t node_budget = kDefaultNodeBudget);

}  // namespace kanova
