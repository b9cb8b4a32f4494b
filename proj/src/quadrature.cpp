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
#include "kanova/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kanova {

Interval::Interval(double lo, double hi) : lower(lo), upper(hi) {
  if (!(std::isfinite(lo) && std::isfinite(hi)))
    throw std::invalid_argument("Interval: bounds must be finite");
  if (!(lo < hi)) throw std::invalid_argument("Interval: lower must be < upper");
}

namespace {

// Reference Gauss-Legendre rule on [-1,1], weights summing to 2.
// Newton iteration on the Legendre recurrence; accurate to ~1e-15.
struct ReferenceRule {
  std::vector<double> x, w;
};

ReferenceRule compute_reference(int n) {
  ReferenceRule r;
  r.x.resize(static_cast<std::size_t>(n));
  r.w.resize(static_cast<std::size_t>(n));
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    r.x[static_cast<std::size_t>(i)] = -z;
    r.x[static_cast<std::size_t>(n - 1 - i)] = z;
    const double wi = 2.0 / ((1.0 - z * z) * pp * pp);
    r.w[static_cast<std::size_t>(i)] = wi;
    r.w[static_cast<std::size_t>(n - 1 - i)] = wi;
  }
  if (n % 2 == 1) r.x[static_cast<std::size_t>(n / 2)] = 0.0;  // exact by symmetry
  return r;
}

// Immutable cache of reference rules, safe under concurrent read.
const ReferenceRule& reference_rule(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<ReferenceRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache.emplace(n, std::make_unique<ReferenceRule>(compute_reference(n))).first;
  return *it->second;
}

}  // namespace

QuadratureRule gauss_legendre(int order, const Interval& interval) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  const ReferenceRule& ref = reference_rule(order);
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  const double mid = 0.5 * (interval.lower + interval.upper);
  const double half = 0.5 * interval.length();
  for (int j = 0; j < order; ++j) {
    const auto k = static_cast<std::size_t>(j);
    rule.nodes[k] = mid + half * ref.x[k];
    rule.weights[k] = 0.5 * ref.w[k];  // probability normalization
  }
  return rule;
}

double integrate_1d(const std::function<double(double)>& f, const QuadratureRule& rule) {
  double acc = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) acc += rule.weights[j] * f(rule.nodes[j]);
  return acc;
}

Measure1D::Measure1D(Interval support, int quadrature_order)
    : support_(support), order_(quadrature_order) {
  if (quadrature_order < 1) throw std::invalid_argument("Measure1D: quadrature_order must be >= 1");
  rule_ = gauss_legendre(quadrature_order, support);
}

Measure1D::Measure1D(Interval support, int order, QuadratureRule rule)
    : support_(support), order_(order), rule_(std::move(rule)) {}

Measure1D Measure1D::with_rule(Interval support, QuadratureRule rule) {
  if (rule.nodes.size() != rule.weights.size() || rule.nodes.empty())
    throw std::invalid_argument("Measure1D: malformed quadrature rule");
  double sum = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) {
    if (!support.contains(rule.nodes[j]))
      throw std::invalid_argument("Measure1D: rule node outside support");
    if (j > 0 && !(rule.nodes[j] > rule.nodes[j - 1]))
      throw std::invalid_argument("Measure1D: rule nodes must be strictly increasing");
    if (!(rule.weights[j] > 0.0)) throw std::invalid_argument("Measure1D: weights must be positive");
    sum += rule.weights[j];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("Measure1D: rule weights must sum to 1");
  return Measure1D(support, static_cast<int>(rule.size()), std::move(rule));
}

ProductMeasure::ProductMeasure(std::vector<Measure1D> coordinates) : coords_(std::move(coordinates)) {
  if (coords_.empty()) throw std::invalid_argument("ProductMeasure: need d >= 1 coordinates");
}

ProductMeasure ProductMeasure::uniform_unit(int d, int quadrature_order) {
  if (d < 1) throw std::invalid_argument("ProductMeasure: need d >= 1");
  std::vector<Measure1D> coords;
  coords.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) coords.emplace_back(Interval(0.0, 1.0), quadrature_order);
  return ProductMeasure(std::move(coords));
}

TensorRule tensor_rule(const ProductMeasure& measures, SubsetMask subset,
                       std::size_t node_budget) {
  const int d = measures.dim();
  if (!subset.is_subset_of(SubsetMask::full_set(d)))
    throw std::invalid_argument("tensor_rule: subset exceeds dimension");

  TensorRule out;
  out.active = subset.indices();
  std::size_t total = 1;
  for (int i : out.active) {
    const std::size_t n = measures.coordinate(i).rule().size();
    if (total > node_budget / n) {
      throw resource_limit_error("tensor_rule: grid over subset of size " +
                                 std::to_string(out.active.size()) + " exceeds node budget of " +
                                 std::to_string(node_budget));
    }
    total *= n;
  }

  const std::size_t k = out.active.size();
  out.nodes.resize(total * k);
  out.weights.assign(total, 1.0);
  if (k == 0) return out;  // single empty node, weight 1

  // Odometer over the per-coordinate rules, first active coordinate fastest.
  std::vector<std::size_t> idx(k, 0);
  for (std::size_t g = 0; g < total; ++g) {
    double w = 1.0;
    for (std::size_t a = 0; a < k; ++a) {
      const QuadratureRule& r = measures.coordinate(out.active[a]).rule();
      out.nodes[g * k + a] = r.nodes[idx[a]];
      w *= r.weights[idx[a]];
    }
    out.weights[g] = w;
    for (std::size_t a = 0; a < k; ++a) {
      if (++idx[a] < measures.coordinate(out.active[a]).rule().size()) break;
      idx[a] = 0;
    }
  }
  return out;
}

std::vector<SubsetMask> all_subsets(int d) {
  if (d > 20) throw resource_limit_error("all_subsets: 2^d enumeration refused for d > 20");
  std::vector<SubsetMask> out;
  out.reserve(std::size_t{1} << d);
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << d); ++b) out.emplace_back(b);
  return out;
}

std::vector<SubsetMask> subsets_up_to_cardinality(int d, int max_card) {
  if (d > 20) throw resource_limit_error("subsets_up_to_cardinality: enumeration refused for d > 20");
  std::vector<SubsetMask> out;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << d); ++b)
    if (std::popcount(b) <= max_card) out.emplace_back(b);
  return out;
}

}  // namespace kanova
