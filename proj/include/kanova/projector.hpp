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

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "kanova/generic_terms.hpp"
#include "kanova/product_kernel.hpp"

namespace kanova {

/// A (u,v) KANOVA term with a scalar weight.
struct WeightedPair {
  SubsetMask u, v;
  double weight = 1.0;
};

/// Which diagonal (u,u) terms a projected kernel contains. Used to compute
/// the unexplained-variance noise level when simulation and prediction
/// kernels differ.
struct DiagonalTerms {
  enum class Kind { all, card_le, explicit_set };
  Kind kind = Kind::all;
  int card_bound = 0;                 // card_le
  std::vector<SubsetMask> subsets;    // explicit_set, sorted

  static DiagonalTerms all() { return {Kind::all, 0, {}}; }
  static DiagonalTerms card_le(int m) { return {Kind::card_le, m, {}}; }
  static DiagonalTerms explicit_set(std::vector<SubsetMask> s);

  static DiagonalTerms intersect(const DiagonalTerms& a, const DiagonalTerms& b);
};

/// Sum over the diagonal term set of Int k_{u,u}(x,x) nu(dx), evaluated from
/// per-dimension closed forms.
double integrated_diagonal_variance(const ProductKernel& pk, const DiagonalTerms& terms);

/// Description of a projection of the KANOVA decomposition.
class ProjectorSpec {
 public:
  enum class Mode { simple, full, star, weighted, custom, family };

  static ProjectorSpec simple(SubsetMask u);
  /// full(U): all cross terms (u,v) with u,v in U.
  static ProjectorSpec full(std::vector<SubsetMask> collection);
  /// star(U): diagonal terms (u,u) with u in U only.
  static ProjectorSpec star(std::vector<SubsetMask> collection);
  static ProjectorSpec weighted(std::map<SubsetMask, double> alpha);
  /// Arbitrary symmetric weighted pair set. Positive definiteness of the
  /// result is not certified.
  static ProjectorSpec custom(std::vector<WeightedPair> pairs);
  /// Named member of the standard family (k_full, k_anova, k_astar, k_a,
  /// k_astar_o, k_a_ostar, k_inter, k_sparse).
  static ProjectorSpec family(std::string name);

  Mode mode() const { return mode_; }
  const SubsetMask& simple_subset() const { return simple_; }
  const std::vector<SubsetMask>& collection() const { return collection_; }
  const std::map<SubsetMask, double>& alpha() const { return alpha_; }
  const std::vector<WeightedPair>& pairs() const { return pairs_; }
  const std::string& family_name() const { return family_; }

  std::string to_string() const;

 private:
  ProjectorSpec() = default;
  Mode mode_ = Mode::simple;
  SubsetMask simple_;
  std::vector<SubsetMask> collection_;
  std::map<SubsetMask, double> alpha_;
  std::vector<WeightedPair> pairs_;
  std::string family_;
};

enum class EvalStrategy { term_sum, symmetric_fast_path, closed_form_additive };

/// Names of the standard projected-kernel family, in result-table order.
const std::vector<std::string>& standard_family_names();

/// An evaluable projected kernel: a tensor-product base plus a projector,
/// compiled to the cheapest available evaluation route (explicit term sums,
/// symmetric-function recursions, or the additive/ortho-additive closed
/// forms).
class DecomposedKernel {
 public:
  DecomposedKernel(std::shared_ptr<const ProductKernel> base, ProjectorSpec spec);

  /// The unprojected kernel itself (sum of every term).
  static DecomposedKernel full_kernel(std::shared_ptr<const ProductKernel> base);

  int dim() const { return base_->dim(); }
  const ProductKernel& base() const { return *base_; }
  std::shared_ptr<const ProductKernel> base_ptr() const { return base_; }
  const ProjectorSpec& spec() const { return spec_; }
  EvalStrategy strategy() const { return strategy_; }
  /// False for custom pair sets, whose positive definiteness is unchecked.
  bool certified_psd() const { return certified_psd_; }
  const DiagonalTerms& diagonal_terms() const { return diagonal_; }
  std::string name() const { return name_; }

  double eval(std::span<const double> x, std::span<const double> y) const;
  double eval(const PointContext& cx, const PointContext& cy) const;
  PointContext make_context(std::span<const double> x) const { return base_->make_context(x); }

  /// Type-erased view for generic consumers (Gram assembly, spectra, ...).
  KernelFn as_fn() const;

  /// Kernel of the centred field (the field minus its global-mean effect):
  /// every term with an empty index on either side is removed.
  DecomposedKernel centred_field() const;

 private:
  struct Component {
    enum class Kind {
      term_sum,        // explicit weighted (u,v) pairs
      anova_all,       // prod_i (EE_i + k_i0) : all diagonal terms
      card_star,       // sum of diagonal terms with |u| <= card_bound
      additive_closed, // additive component, closed form
      ortho_closed,    // ortho-additive component, closed form
      full_product,    // prod_i k_i
      centred_full,    // prod k_i - prod E_i(x) - prod E_i(y) + prod EE_i
      constant
    };
    Kind kind;
    double coeff = 1.0;
    int card_bound = 0;
    double value = 0.0;  // constant
    std::vector<WeightedPair> pairs;
  };

  DecomposedKernel(std::shared_ptr<const ProductKernel> base, ProjectorSpec spec,
                   std::vector<Component> components, EvalStrategy strategy,
                   DiagonalTerms diagonal, bool certified, std::string name);

  void compile();
  double eval_component(const Component& c, const PointContext& cx, const PointContext& cy,
                        std::span<const double> factor_values) const;

  std::shared_ptr<const ProductKernel> base_;
  ProjectorSpec spec_;
  std::vector<Component> components_;
  EvalStrategy strategy_ = EvalStrategy::term_sum;
  DiagonalTerms diagonal_;
  bool certified_psd_ = true;
  std::string name_;
};

/// The eight kernels of the standard family, keyed by name. k_sparse is
/// included only when d >= 5 (it references coordinates 1..5); kernels whose
/// closed forms need strictly positive factors are skipped for bases that
/// violate the hypothesis.
std::map<std::string, DecomposedKernel> standard_family(
    std::shared_ptr<const ProductKernel> base);

/// Unexplained-variance noise level when predicting a field simulated under
/// k_sim with the kernel k_pred: the integrated diagonal variance of the
/// terms present in k_sim but not in k_pred, floored at 1e-8.
double tau2_for_mismatch(const DecomposedKernel& k_sim, const DecomposedKernel& k_pred);

/// Unfloored value, for reporting.
double tau2_for_mismatch_raw(const DecomposedKernel& k_sim, const DecomposedKernel& k_pred);

}  // namespace kanova
