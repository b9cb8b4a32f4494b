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
#include <map>
#include <memory>
#include <vector>

#include "kanova/fanova.hpp"
#include "kanova/generic_terms.hpp"

namespace kanova {

/// Discrete (Nystrom) approximation of the kernel eigensystem on the
/// quadrature grid: eigen-decomposition of the weight-symmetrized Gram.
/// Eigenfunction values satisfy the discrete orthonormality
/// sum_g w_g phi_i(x_g) phi_j(x_g) = delta_ij.
struct Spectrum {
  Eigen::VectorXd eigenvalues;     // length K, descending, clamped at 0
  Eigen::MatrixXd eigenfunctions;  // N x K, values at the grid nodes
  std::shared_ptr<const TensorGridData> grid;
  double total_trace = 0.0;  // quadrature of k(x,x)
  double coverage = 0.0;     // sum of kept eigenvalues / total_trace
};

/// Leading-K eigensystem; K must not exceed the grid size.
Spectrum nystrom_spectrum(const KernelFn& kernel, const ProductMeasure& measures, int K,
                          std::size_t node_budget = kDefaultNodeBudget);

/// Truncation at min(max_K, first K reaching the coverage fraction).
Spectrum nystrom_spectrum_auto(const KernelFn& kernel, const ProductMeasure& measures,
                               int max_K = 100, double coverage = 0.99,
                               std::size_t node_budget = kDefaultNodeBudget);

/// Coefficients of the quadratic form giving the squared effect norm of the
/// field in terms of its white-noise coordinates:
/// g_ij = sqrt(lambda_i lambda_j) <T_u phi_i, T_u phi_j>.
/// Expects the spectrum of the centred field (constant effect removed).
struct QuadFormCoeffs {
  Eigen::MatrixXd g;  // K x K symmetric p.s.d.
  SubsetMask subset;
};

QuadFormCoeffs quadform_coeffs(const Spectrum& spectrum, SubsetMask u);

/// Empirical per-path Sobol' indices of a simulated field on the grid.
struct PathSobolSamples {
  std::map<SubsetMask, std::vector<double>> samples;
  int skipped = 0;  // degenerate paths (vanishing centred variance)
};

PathSobolSamples sobol_path_samples(const KernelFn& kernel, const ProductMeasure& measures,
                                    const std::vector<SubsetMask>& subsets, int n_paths,
                                    std::uint64_t seed,
                                    std::size_t node_budget = kDefaultNodeBudget);

struct SobolMoments {
  double mean = 0.0;
  double second_moment = 0.0;
};

/// First two moments of the Sobol'-index ratio of quadratic forms in a
/// standard Gaussian sequence: numerator coefficients g, denominator
/// sum_i lambda_i eps_i^2. One-dimensional integral representations are
/// evaluated adaptively to ~1e-8 relative accuracy after the substitution
/// t = s/(1-s).
SobolMoments sobol_moment(const QuadFormCoeffs& coeffs, const Eigen::VectorXd& eigenvalues);

}  // namespace kanova
