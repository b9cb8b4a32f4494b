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

#include <Eigen/Dense>
#include <cstdint>

#include "kanova/projector.hpp"
#include "kanova/quadrature.hpp"
#include "kanova/rng.hpp"

namespace kanova {

/// n x d matrix of points, all inside the domain box of `domain`.
struct DesignMatrix {
  Eigen::MatrixXd points;  // n x d

  DesignMatrix() = default;
  explicit DesignMatrix(Eigen::MatrixXd pts) : points(std::move(pts)) {}

  int size() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }

  void check_inside(const ProductMeasure& domain) const;
};

/// Cholesky factor of K + jitter*Id, jitter chosen from a fixed ladder.
struct GramFactor {
  Eigen::MatrixXd lower_triangular;
  double jitter_used = 0.0;
};

/// Gram matrix k(x_i, y_j); context-cached for decomposed kernels.
Eigen::MatrixXd gram(const DecomposedKernel& kernel, const DesignMatrix& X,
                     const DesignMatrix& Y);
Eigen::MatrixXd gram(const KernelFn& kernel, const DesignMatrix& X, const DesignMatrix& Y);

/// Cholesky factorization with a jitter ladder 0, 1e-10, 1e-9, ..., 1e-6
/// (relative to the mean diagonal). Throws not_positive_definite_error with
/// a minimum-eigenvalue diagnostic when even the largest jitter fails.
GramFactor cholesky_jitter(const Eigen::MatrixXd& K);

/// i.i.d. draws of the field at the design points; row p is path p.
/// Per-path RNG streams are derived as seed + path index, so results do not
/// depend on scheduling.
Eigen::MatrixXd simulate_paths(const DecomposedKernel& kernel, const DesignMatrix& X, int n_paths,
                               std::uint64_t seed);
/// Same draws from a precomputed factor.
Eigen::MatrixXd simulate_paths(const GramFactor& factor, int n_paths, std::uint64_t seed);

/// Gaussian-process model: kernel + design + observations + noise variance.
/// The factorization of K + tau2*Id is computed on construction.
class GrfModel {
 public:
  GrfModel(DecomposedKernel kernel, DesignMatrix design, Eigen::VectorXd observations,
           double noise_tau2);

  const DecomposedKernel& kernel() const { return kernel_; }
  const DesignMatrix& design() const { return design_; }
  const Eigen::VectorXd& observations() const { return obs_; }
  double noise_tau2() const { return tau2_; }
  double jitter_used() const { return factor_.jitter_used; }

  const GramFactor& factor() const { return factor_; }
  const Eigen::VectorXd& weights() const { return alpha_; }  // (K+tau2 I)^{-1} y

 private:
  DecomposedKernel kernel_;
  DesignMatrix design_;
  Eigen::VectorXd obs_;
  double tau2_;
  GramFactor factor_;
  Eigen::VectorXd alpha_;
};

struct PredictionResult {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;            // clamped at 0
  int negative_variance_warnings = 0;  // entries below -1e-6 before clamping
};

/// Conditional mean and variance at new points.
PredictionResult krige_predict(const GrfModel& model, const DesignMatrix& Xnew);

/// Conditional cross-covariance between the constant effect at s and the
/// main effect at t given one observation at r, for a 1-D field that is the
/// sum of an independent N(0, sigma2) level and a centred process with
/// argumentwise-centred kernel k0:
///   -sigma2 * k0(t,r) / (sigma2 + k0(r,r)).
/// The value does not depend on s.
double conditional_effect_cov(double sigma2, const CentredKernel1D& k0, double r, double s,
                              double t);

}  // namespace kanova
