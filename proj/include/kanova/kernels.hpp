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

#include <string>
#include <vector>

#include "kanova/quadrature.hpp"

namespace kanova {

/// Standard normal cdf, accurate to ~1e-16 (via erfc).
double normal_cdf(double x);

enum class KernelFamily { exponential, matern, gaussian, brownian };

/// One-dimensional covariance kernel from the built-in catalogue.
///
/// Stationary families are normalized to k(x,x) = 1. The Brownian kernel
/// min(x,y) lives on [0,1] only. Mean embeddings and double integrals are
/// taken against the uniform probability measure on the domain; closed forms
/// on a general interval [a,b] follow from the unit-interval ones through the
/// affine substitution that rescales the length-scale by 1/(b-a).
class Kernel1D {
 public:
  static Kernel1D exponential(double theta, Interval domain = Interval(0.0, 1.0));
  static Kernel1D matern(int p, double theta, Interval domain = Interval(0.0, 1.0));
  static Kernel1D gaussian(double theta, Interval domain = Interval(0.0, 1.0));
  static Kernel1D brownian();

  KernelFamily family() const { return family_; }
  double theta() const { return theta_; }
  int matern_p() const { return matern_p_; }
  const Interval& domain() const { return domain_; }

  /// Kernel value; throws std::invalid_argument outside the domain.
  double operator()(double x, double y) const;

  /// True when k(x,y) > 0 for all x,y in the domain (needed by the
  /// additive/ortho-additive closed forms).
  bool strictly_positive() const { return family_ != KernelFamily::brownian; }

  std::string to_string() const;

 private:
  Kernel1D(KernelFamily family, int p, double theta, Interval domain);
  double eval_unchecked(double x, double y) const;

  KernelFamily family_;
  int matern_p_ = 0;
  double theta_ = 1.0;
  Interval domain_;
  std::vector<double> poly_;  // Matern polynomial in u = |x-y|/zeta, lowest degree first

  friend struct KernelIntegrals;
};

/// Normalized Matern polynomial coefficients c_{p,l} (l = 0..p) such that
/// A_p(u) = (sum_l c_{p,l} u^l) e^{-u}; p=0 gives {1}, p=1 gives {2,1},
/// p=2 gives {8,5,1}. Guarded at p <= 8.
std::vector<double> matern_coefficients(int p);

enum class IntegralSource { closed_form, quadrature_fallback };

/// Mean embedding t -> Int k(s,t) nu(ds) and double integral of a 1-D kernel
/// against the uniform probability measure on its domain.
struct KernelIntegrals {
  explicit KernelIntegrals(const Kernel1D& kernel);

  double mean_embedding(double t) const;
  double double_integral() const { return double_integral_; }
  /// Int k(t,t) nu(dt): 1 for the stationary families, 1/2 for Brownian.
  double diagonal_mean() const { return diagonal_mean_; }
  IntegralSource source() const { return source_; }

 private:
  Kernel1D kernel_;
  double scaled_theta_;   // theta / (b - a); zeta for Matern
  double double_integral_;
  double diagonal_mean_;
  IntegralSource source_;
  std::vector<double> coeffs_;  // Matern c_{p,l}
  double prefactor_ = 0.0;      // Matern embedding prefactor
};

/// Argumentwise-centred version of a catalogue kernel:
/// k0(x,y) = k(x,y) - E(x) - E(y) + EE.
class CentredKernel1D {
 public:
  explicit CentredKernel1D(const Kernel1D& base) : base_(base), integrals_(base) {}

  const Kernel1D& base() const { return base_; }
  const KernelIntegrals& integrals() const { return integrals_; }

  double operator()(double x, double y) const {
    return base_(x, y) - integrals_.mean_embedding(x) - integrals_.mean_embedding(y) +
           integrals_.double_integral();
  }

 private:
  Kernel1D base_;
  KernelIntegrals integrals_;
};

inline CentredKernel1D centre_kernel1d(const Kernel1D& k) { return CentredKernel1D(k); }

}  // namespace kanova
