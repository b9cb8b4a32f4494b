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
#include "kanova/projector.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace kanova {

namespace {

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
  return b;
}

// Sum over subsets with cardinality <= bound of products picking g_i inside
// the subset and base_i outside, by a running recursion over dimensions.
double bounded_symmetric_sum(std::span<const double> g, std::span<const double> base, int bound) {
  const int d = static_cast<int>(g.size());
  std::vector<double> acc(static_cast<std::size_t>(std::min(bound, d)) + 1, 0.0);
  acc[0] = 1.0;
  for (int i = 0; i < d; ++i) {
    const int top = std::min(bound, i + 1);
    for (int j = top; j >= 1; --j)
      acc[static_cast<std::size_t>(j)] =
          acc[static_cast<std::size_t>(j)] * base[static_cast<std::size_t>(i)] +
          acc[static_cast<std::size_t>(j - 1)] * g[static_cast<std::size_t>(i)];
    acc[0] *= base[static_cast<std::size_t>(i)];
  }
  double total = 0.0;
  for (double a : acc) total += a;
  return total;
}

std::vector<SubsetMask> sorted_unique(std::vector<SubsetMask> s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

// True when the collection is exactly {u : |u| <= m} for some m; sets *m_out.
bool is_cardinality_family(const std::vector<SubsetMask>& sorted_subsets, int d, int* m_out) {
  if (sorted_subsets.empty()) return false;
  int m = 0;
  for (const SubsetMask& u : sorted_subsets) m = std::max(m, u.cardinality());
  double expected = 0.0;
  for (int j = 0; j <= m; ++j) expected += binomial(d, j);
  if (static_cast<double>(sorted_subsets.size()) != expected) return false;
  *m_out = m;
  return true;
}

bool is_additive_collection(const std::vector<SubsetMask>& sorted_subsets, int d) {
  int m = 0;
  return is_cardinality_family(sorted_subsets, d, &m) && m == 1;
}

bool is_power_set(const std::vector<SubsetMask>& sorted_subsets, int d) {
  return d <= 20 && sorted_subsets.size() == (std::size_t{1} << d);
}

}  // namespace

DiagonalTerms DiagonalTerms::explicit_set(std::vector<SubsetMask> s) {
  return {Kind::explicit_set, 0, sorted_unique(std::move(s))};
}

DiagonalTerms DiagonalTerms::intersect(const DiagonalTerms& a, const DiagonalTerms& b) {
  if (a.kind == Kind::all) return b;
  if (b.kind == Kind::all) return a;
  if (a.kind == Kind::card_le && b.kind == Kind::card_le)
    return card_le(std::min(a.card_bound, b.card_bound));
  if (a.kind == Kind::card_le && b.kind == Kind::explicit_set) return intersect(b, a);
  if (a.kind == Kind::explicit_set && b.kind == Kind::card_le) {
    std::vector<SubsetMask> kept;
    for (const SubsetMask& u : a.subsets)
      if (u.cardinality() <= b.card_bound) kept.push_back(u);
    return explicit_set(std::move(kept));
  }
  std::vector<SubsetMask> kept;
  std::set_intersection(a.subsets.begin(), a.subsets.end(), b.subsets.begin(), b.subsets.end(),
                        std::back_inserter(kept));
  return explicit_set(std::move(kept));
}

double integrated_diagonal_variance(const ProductKernel& pk, const DiagonalTerms& terms) {
  const int d = pk.dim();
  std::vector<double> gamma(static_cast<std::size_t>(d));  // Int k_i0(t,t) d nu
  std::vector<double> ee(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    ee[static_cast<std::size_t>(i)] = pk.factor_double_integral(i);
    gamma[static_cast<std::size_t>(i)] =
        pk.factor_diag_mean(i) - pk.factor_double_integral(i);
  }
  switch (terms.kind) {
    case DiagonalTerms::Kind::all: {
      double prod = 1.0;
      for (int i = 0; i < d; ++i)
        prod *= gamma[static_cast<std::size_t>(i)] + ee[static_cast<std::size_t>(i)];
      return prod;
    }
    case DiagonalTerms::Kind::card_le:
      return bounded_symmetric_sum(gamma, ee, terms.card_bound);
    case DiagonalTerms::Kind::explicit_set: {
      double total = 0.0;
      for (const SubsetMask& u : terms.subsets) {
        double prod = 1.0;
        for (int i = 0; i < d; ++i)
          prod *= u.contains(i) ? gamma[static_cast<std::size_t>(i)]
                                : ee[static_cast<std::size_t>(i)];
        total += prod;
      }
      return total;
    }
  }
  return 0.0;  // unreachable
}

ProjectorSpec ProjectorSpec::simple(SubsetMask u) {
  ProjectorSpec s;
  s.mode_ = Mode::simple;
  s.simple_ = u;
  return s;
}

ProjectorSpec ProjectorSpec::full(std::vector<SubsetMask> collection) {
  if (collection.empty()) throw std::invalid_argument("ProjectorSpec: full requires non-empty U");
  ProjectorSpec s;
  s.mode_ = Mode::full;
  s.collection_ = sorted_unique(std::move(collection));
  return s;
}

ProjectorSpec ProjectorSpec::star(std::vector<SubsetMask> collection) {
  if (collection.empty()) throw std::invalid_argument("ProjectorSpec: star requires non-empty U");
  ProjectorSpec s;
  s.mode_ = Mode::star;
  s.collection_ = sorted_unique(std::move(collection));
  return s;
}

ProjectorSpec ProjectorSpec::weighted(std::map<SubsetMask, double> alpha) {
  for (const auto& [u, a] : alpha)
    if (!std::isfinite(a)) throw std::invalid_argument("ProjectorSpec: weights must be finite");
  ProjectorSpec s;
  s.mode_ = Mode::weighted;
  s.alpha_ = std::move(alpha);
  return s;
}

ProjectorSpec ProjectorSpec::custom(std::vector<WeightedPair> pairs) {
  // Require a symmetric pair set; asymmetric requests are rejected rather
  // than symmetrized silently.
  for (const WeightedPair& p : pairs) {
    if (!std::isfinite(p.weight))
      throw std::invalid_argument("ProjectorSpec: weights must be finite");
    bool found = false;
    for (const WeightedPair& q : pairs)
      if (q.u == p.v && q.v == p.u && q.weight == p.weight) {
        found = true;
        break;
      }
    if (!found)
      throw std::invalid_argument(
          "ProjectorSpec: custom pair set must be symmetric (contain (v,u) with equal weight "
          "for every (u,v))");
  }
  ProjectorSpec s;
  s.mode_ = Mode::custom;
  s.pairs_ = std::move(pairs);
  return s;
}

ProjectorSpec ProjectorSpec::family(std::string name) {
  const auto& names = standard_family_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw std::invalid_argument("ProjectorSpec: unknown family kernel '" + name + "'");
  ProjectorSpec s;
  s.mode_ = Mode::family;
  s.family_ = std::move(name);
  return s;
}

std::string ProjectorSpec::to_string() const {
  std::ostringstream os;
  auto list = [&os](const std::vector<SubsetMask>& c) {
    os << "[";
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i].label();
    os << "]";
  };
  switch (mode_) {
    case Mode::simple: os << "simple:" << simple_.label(); break;
    case Mode::full: os << "full:"; list(collection_); break;
    case Mode::star: os << "star:"; list(collection_); break;
    case Mode::weighted:
      os << "weighted:{";
      for (auto it = alpha_.begin(); it != alpha_.end(); ++it)
        os << (it == alpha_.begin() ? "" : ",") << it->first.label() << "=" << it->second;
      os << "}";
      break;
    case Mode::custom: os << "custom:" << pairs_.size() << " pairs"; break;
    case Mode::family: os << "family:" << family_; break;
  }
  return os.str();
}

const std::vector<std::string>& standard_family_names() {
  static const std::vector<std::string> names = {"k_full",    "k_anova", "k_astar_o",
                                                 "k_a_ostar", "k_inter", "k_astar",
                                                 "k_a",       "k_sparse"};
  return names;
}

DecomposedKernel::DecomposedKernel(std::shared_ptr<const ProductKernel> base, ProjectorSpec spec,
                                   std::vector<Component> components, EvalStrategy strategy,
                                   DiagonalTerms diagonal, bool certified, std::string name)
    : base_(std::move(base)), spec_(std::move(spec)), components_(std::move(components)),
      strategy_(strategy), diagonal_(std::move(diagonal)), certified_psd_(certified),
      name_(std::move(name)) {}

DecomposedKernel::DecomposedKernel(std::shared_ptr<const ProductKernel> base, ProjectorSpec spec)
    : base_(std::move(base)), spec_(std::move(spec)) {
  if (!base_) throw std::invalid_argument("DecomposedKernel: null base");
  if (base_->dim() > 60)
    throw std::invalid_argument("DecomposedKernel: dimension limited to 60");
  compile();
}

DecomposedKernel DecomposedKernel::full_kernel(std::shared_ptr<const ProductKernel> base) {
  return DecomposedKernel(std::move(base), ProjectorSpec::family("k_full"));
}

void DecomposedKernel::compile() {
  const int d = base_->dim();
  components_.clear();
  certified_psd_ = true;
  name_ = spec_.to_string();

  auto term_sum = [](std::vector<WeightedPair> pairs) {
    Component c{Component::Kind::term_sum, 1.0, 0, 0.0, std::move(pairs)};
    return c;
  };
  auto plain = [](Component::Kind kind, double coeff, int bound) {
    return Component{kind, coeff, bound, 0.0, {}};
  };

  auto require_positive_factors = [this]() {
    if (!base_->factors_strictly_positive())
      throw std::invalid_argument(
          "DecomposedKernel: additive/ortho-additive closed forms require strictly positive "
          "factors");
  };

  switch (spec_.mode()) {
    case ProjectorSpec::Mode::simple: {
      components_.push_back(term_sum({{spec_.simple_subset(), spec_.simple_subset(), 1.0}}));
      strategy_ = EvalStrategy::term_sum;
      diagonal_ = DiagonalTerms::explicit_set({spec_.simple_subset()});
      break;
    }
    case ProjectorSpec::Mode::full: {
      const auto& U = spec_.collection();
      for (const SubsetMask& u : U)
        if (!u.is_subset_of(SubsetMask::full_set(d)))
          throw std::invalid_argument("ProjectorSpec: subset exceeds dimension");
      if (is_power_set(U, d)) {
        components_.push_back(plain(Component::Kind::full_product, 1.0, 0));
        strategy_ = EvalStrategy::symmetric_fast_path;
      } else if (is_additive_collection(U, d)) {
        require_positive_factors();
        components_.push_back(plain(Component::Kind::additive_closed, 1.0, 0));
        strategy_ = EvalStrategy::closed_form_additive;
      } else {
        std::vector<WeightedPair> pairs;
        pairs.reserve(U.size() * U.size());
        for (const SubsetMask& u : U)
          for (const SubsetMask& v : U) pairs.push_back({u, v, 1.0});
        components_.push_back(term_sum(std::move(pairs)));
        strategy_ = EvalStrategy::term_sum;
      }
      diagonal_ = DiagonalTerms::explicit_set(U);
      break;
    }
    case ProjectorSpec::Mode::star: {
      const auto& U = spec_.collection();
      for (const SubsetMask& u : U)
        if (!u.is_subset_of(SubsetMask::full_set(d)))
          throw std::invalid_argument("ProjectorSpec: subset exceeds dimension");
      int m = 0;
      if (is_power_set(U, d) || (is_cardinality_family(U, d, &m) && m == d)) {
        components_.push_back(plain(Component::Kind::anova_all, 1.0, 0));
        strategy_ = EvalStrategy::symmetric_fast_path;
        diagonal_ = DiagonalTerms::all();
      } else if (is_cardinality_family(U, d, &m)) {
        components_.push_back(plain(Component::Kind::card_star, 1.0, m));
        strategy_ = EvalStrategy::symmetric_fast_path;
        diagonal_ = DiagonalTerms::card_le(m);
      } else {
        std::vector<WeightedPair> pairs;
        pairs.reserve(U.size());
        for (const SubsetMask& u : U) pairs.push_back({u, u, 1.0});
        components_.push_back(term_sum(std::move(pairs)));
        strategy_ = EvalStrategy::term_sum;
        diagonal_ = DiagonalTerms::explicit_set(U);
      }
      break;
    }
    case ProjectorSpec::Mode::weighted: {
      std::vector<WeightedPair> pairs;
      std::vector<SubsetMask> diag;
      for (const auto& [u, au] : spec_.alpha()) {
        if (!u.is_subset_of(SubsetMask::full_set(d)))
          throw std::invalid_argument("ProjectorSpec: subset exceeds dimension");
        if (au == 0.0) continue;
        diag.push_back(u);
        for (const auto& [v, av] : spec_.alpha())
          if (av != 0.0) pairs.push_back({u, v, au * av});
      }
      components_.push_back(term_sum(std::move(pairs)));
      strategy_ = EvalStrategy::term_sum;
      diagonal_ = DiagonalTerms::explicit_set(std::move(diag));
      break;
    }
    case ProjectorSpec::Mode::custom: {
      std::vector<SubsetMask> diag;
      for (const WeightedPair& p : spec_.pairs()) {
        if (!p.u.is_subset_of(SubsetMask::full_set(d)) ||
            !p.v.is_subset_of(SubsetMask::full_set(d)))
          throw std::invalid_argument("ProjectorSpec: subset exceeds dimension");
        if (p.u == p.v && p.weight != 0.0) diag.push_back(p.u);
      }
      components_.push_back(term_sum(spec_.pairs()));
      strategy_ = EvalStrategy::term_sum;
      diagonal_ = DiagonalTerms::explicit_set(std::move(diag));
      certified_psd_ = false;
      break;
    }
    case ProjectorSpec::Mode::family: {
      const std::string& f = spec_.family_name();
      name_ = f;
      if (f == "k_full") {
        components_.push_back(plain(Component::Kind::full_product, 1.0, 0));
        strategy_ = EvalStrategy::symmetric_fast_path;
        diagonal_ = DiagonalTerms::all();
      } else if (f == "k_anova") {
        components_.push_back(plain(Component::Kind::anova_all, 1.0, 0));
        strategy_ = EvalStrategy::symmetric_fast_path;
        diagonal_ = DiagonalTerms::all();
      } else if (f == "k_astar") {
        components_.push_back(plain(Component::Kind::card_star, 1.0, 1));
        strategy_ = EvalStrategy::symmetric_fast_path;
        diagonal_ = DiagonalTerms::card_le(1);
      } else if (f == "k_inter") {
        components_.push_back(plain(Component::Kind::card_star, 1.0, 2));
        strategy_ = EvalStrategy::symmetric_fast_path;
        diagonal_ = DiagonalTerms::card_le(2);
      } else if (f == "k_a") {
        require_positive_factors();
        components_.push_back(plain(Component::Kind::additive_closed, 1.0, 0));
        strategy_ = EvalStrategy::closed_form_additive;
        diagonal_ = DiagonalTerms::card_le(1);
      } else if (f == "k_astar_o") {
        require_positive_factors();
        components_.push_back(plain(Component::Kind::ortho_closed, 1.0, 0));
        components_.push_back(plain(Component::Kind::card_star, 1.0, 1));
        strategy_ = EvalStrategy::closed_form_additive;
        diagonal_ = DiagonalTerms::all();
      } else if (f == "k_a_ostar") {
        require_positive_factors();
        components_.push_back(plain(Component::Kind::anova_all, 1.0, 0));
        components_.push_back(plain(Component::Kind::card_star, -1.0, 1));
        components_.push_back(plain(Component::Kind::additive_closed, 1.0, 0));
        strategy_ = EvalStrategy::closed_form_additive;
        diagonal_ = DiagonalTerms::all();
      } else if (f == "k_sparse") {
        if (d < 5)
          throw std::invalid_argument("k_sparse requires d >= 5 (it references coordinate 5)");
        const std::vector<SubsetMask> U = {
            SubsetMask::empty_set(), SubsetMask::singleton(0), SubsetMask::singleton(1),
            SubsetMask::from_indices({1, 2}), SubsetMask::from_indices({3, 4})};
        std::vector<WeightedPair> pairs;
        for (const SubsetMask& u : U) pairs.push_back({u, u, 1.0});
        components_.push_back(term_sum(std::move(pairs)));
        strategy_ = EvalStrategy::term_sum;
        diagonal_ = DiagonalTerms::explicit_set(U);
      } else {
        throw std::invalid_argument("unknown family kernel '" + f + "'");
      }
      break;
    }
  }
}

double DecomposedKernel::eval_component(const Component& c, const PointContext& cx,
                                        const PointContext& cy,
                                        std::span<const double> factor_values) const {
  const int d = base_->dim();
  switch (c.kind) {
    case Component::Kind::term_sum: {
      double acc = 0.0;
      for (const WeightedPair& p : c.pairs) {
        double prod = 1.0;
        for (int i = 0; i < d; ++i) {
          const auto j = static_cast<std::size_t>(i);
          const double ee = base_->factor_double_integral(i);
          const bool in_u = p.u.contains(i);
          const bool in_v = p.v.contains(i);
          if (in_u && in_v)
            prod *= factor_values[j] - cx.embedding[j] - cy.embedding[j] + ee;
          else if (in_u)
            prod *= cx.embedding[j] - ee;
          else if (in_v)
            prod *= cy.embedding[j] - ee;
          else
            prod *= ee;
        }
        acc += p.weight * prod;
      }
      return acc;
    }
    case Component::Kind::anova_all: {
      double prod = 1.0;
      for (int i = 0; i < d; ++i) {
        const auto j = static_cast<std::size_t>(i);
        const double ee = base_->factor_double_integral(i);
        prod *= ee + (factor_values[j] - cx.embedding[j] - cy.embedding[j] + ee);
      }
      return prod;
    }
    case Component::Kind::card_star: {
      std::vector<double> centred(static_cast<std::size_t>(d));
      std::vector<double> ee(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) {
        const auto j = static_cast<std::size_t>(i);
        ee[j] = base_->factor_double_integral(i);
        centred[j] = factor_values[j] - cx.embedding[j] - cy.embedding[j] + ee[j];
      }
      return bounded_symmetric_sum(centred, ee, c.card_bound);
    }
    case Component::Kind::additive_closed:
      return additive_ortho_components(*base_, cx, cy).additive;
    case Component::Kind::ortho_closed:
      return additive_ortho_components(*base_, cx, cy).ortho;
    case Component::Kind::full_product: {
      double prod = 1.0;
      for (int i = 0; i < d; ++i) prod *= factor_values[static_cast<std::size_t>(i)];
      return prod;
    }
    case Component::Kind::centred_full: {
      double full = 1.0, ex = 1.0, ey = 1.0, ee = 1.0;
      for (int i = 0; i < d; ++i) {
        const auto j = static_cast<std::size_t>(i);
        full *= factor_values[j];
        ex *= cx.embedding[j];
        ey *= cy.embedding[j];
        ee *= base_->factor_double_integral(i);
      }
      return full - ex - ey + ee;
    }
    case Component::Kind::constant:
      return c.value;
  }
  return 0.0;  // unreachable
}

double DecomposedKernel::eval(const PointContext& cx, const PointContext& cy) const {
  const int d = base_->dim();
  std::vector<double> factor_values(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i)
    factor_values[static_cast<std::size_t>(i)] = base_->factor_value(
        i, cx.x[static_cast<std::size_t>(i)], cy.x[static_cast<std::size_t>(i)]);
  double acc = 0.0;
  for (const Component& c : components_)
    acc += c.coeff * eval_component(c, cx, cy, factor_values);
  return acc;
}

double DecomposedKernel::eval(std::span<const double> x, std::span<const double> y) const {
  return eval(base_->make_context(x), base_->make_context(y));
}

KernelFn DecomposedKernel::as_fn() const {
  return [k = *this](std::span<const double> x, std::span<const double> y) {
    return k.eval(x, y);
  };
}

DecomposedKernel DecomposedKernel::centred_field() const {
  const int d = base_->dim();
  std::vector<Component> out;
  for (const Component& c : components_) {
    switch (c.kind) {
      case Component::Kind::full_product:
        out.push_back({Component::Kind::centred_full, c.coeff, 0, 0.0, {}});
        break;
      case Component::Kind::anova_all:
      case Component::Kind::card_star: {
        out.push_back(c);
        double ee = 1.0;
        for (int i = 0; i < d; ++i) ee *= base_->factor_double_integral(i);
        out.push_back({Component::Kind::constant, -c.coeff, 0, ee, {}});
        break;
      }
      case Component::Kind::term_sum: {
        Component kept = c;
        kept.pairs.clear();
        for (const WeightedPair& p : c.pairs)
          if (!p.u.empty() && !p.v.empty()) kept.pairs.push_back(p);
        out.push_back(std::move(kept));
        break;
      }
      case Component::Kind::additive_closed: {
        out.push_back(c);
        // Remove the constant term and the main-effect/constant cross terms.
        std::vector<WeightedPair> pairs;
        const SubsetMask empty = SubsetMask::empty_set();
        pairs.push_back({empty, empty, -1.0});
        for (int i = 0; i < d; ++i) {
          pairs.push_back({SubsetMask::singleton(i), empty, -1.0});
          pairs.push_back({empty, SubsetMask::singleton(i), -1.0});
        }
        out.push_back({Component::Kind::term_sum, c.coeff, 0, 0.0, std::move(pairs)});
        break;
      }
      case Component::Kind::ortho_closed:
      case Component::Kind::centred_full:
        out.push_back(c);  // already free of empty-index terms
        break;
      case Component::Kind::constant:
        break;  // the (empty,empty) term itself
    }
  }
  DiagonalTerms diag = diagonal_;
  if (diag.kind == DiagonalTerms::Kind::explicit_set) {
    std::vector<SubsetMask> kept;
    for (const SubsetMask& u : diag.subsets)
      if (!u.empty()) kept.push_back(u);
    diag = DiagonalTerms::explicit_set(std::move(kept));
  }
  return DecomposedKernel(base_, spec_, std::move(out), strategy_, std::move(diag),
                          certified_psd_, name_ + ":centred");
}

std::map<std::string, DecomposedKernel> standard_family(
    std::shared_ptr<const ProductKernel> base) {
  std::map<std::string, DecomposedKernel> out;
  const bool positive = base->factors_strictly_positive();
  for (const std::string& name : standard_family_names()) {
    if (name == "k_sparse" && base->dim() < 5) continue;
    if (!positive && (name == "k_a" || name == "k_astar_o" || name == "k_a_ostar")) continue;
    out.emplace(name, DecomposedKernel(base, ProjectorSpec::family(name)));
  }
  return out;
}

double tau2_for_mismatch_raw(const DecomposedKernel& k_sim, const DecomposedKernel& k_pred) {
  if (k_sim.dim() != k_pred.dim())
    throw std::invalid_argument("tau2_for_mismatch: kernels have different dimensions");
  const DiagonalTerms common =
      DiagonalTerms::intersect(k_sim.diagonal_terms(), k_pred.diagonal_terms());
  const double sim_var = integrated_diagonal_variance(k_sim.base(), k_sim.diagonal_terms());
  const double common_var = integrated_diagonal_variance(k_sim.base(), common);
  return sim_var - common_var;
}

double tau2_for_mismatch(const DecomposedKernel& k_sim, const DecomposedKernel& k_pred) {
  return std::max(tau2_for_mismatch_raw(k_sim, k_pred), 1e-8);
}

}  // namespace kanova
