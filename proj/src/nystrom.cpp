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
#include "kanova/nystrom.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "kanova/grf.hpp"

namespace kanova {

namespace {

Eigen::MatrixXd grid_gram(const KernelFn& kernel, const TensorGridData& grid) {
  const std::size_t n = grid.size();
  Eigen::MatrixXd K(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<std::vector<double>> pts(n);
  for (std::size_t g = 0; g < n; ++g) pts[g] = grid.point(g);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = kernel(pts[i], pts[j]);
      K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      K(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  if (!K.allFinite()) throw evaluation_error("nystrom: kernel produced non-finite entries");
  return K;
}

Spectrum spectrum_from_gram(const Eigen::MatrixXd& K, std::shared_ptr<const TensorGridData> grid,
                            int keep) {
  const auto n = static_cast<Eigen::Index>(grid->size());
  Eigen::VectorXd sqrt_w(n);
  for (Eigen::Index g = 0; g < n; ++g)
    sqrt_w(g) = std::sqrt(grid->weight(static_cast<std::size_t>(g)));

  // Weight-symmetrized Gram: B = W^{1/2} K W^{1/2}.
  Eigen::MatrixXd B = sqrt_w.asDiagonal() * K * sqrt_w.asDiagonal();
  B = 0.5 * (B + B.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(B);
  if (eig.info() != Eigen::Success) throw evaluation_error("nystrom: eigensolver failed");

  Spectrum s;
  s.grid = std::move(grid);
  s.total_trace = B.trace();
  s.eigenvalues.resize(keep);
  s.eigenfunctions.resize(n, keep);
  double kept_sum = 0.0;
  for (int i = 0; i < keep; ++i) {
    const Eigen::Index src = n - 1 - i;  // ascending order in Eigen
    const double lambda = std::max(eig.eigenvalues()(src), 0.0);
    s.eigenvalues(i) = lambda;
    kept_sum += lambda;
    s.eigenfunctions.col(i) = eig.eigenvectors().col(src).cwiseQuotient(sqrt_w);
  }
  s.coverage = s.total_trace > 0.0 ? kept_sum / s.total_trace : 1.0;
  return s;
}

}  // namespace

Spectrum nystrom_spectrum(const KernelFn& kernel, const ProductMeasure& measures, int K,
                          std::size_t node_budget) {
  if (K < 1) throw std::invalid_argument("nystrom_spectrum: K must be >= 1");
  auto grid = std::make_shared<const TensorGridData>(measures, node_budget);
  if (static_cast<std::size_t>(K) > grid->size())
    throw std::invalid_argument("nystrom_spectrum: K exceeds grid size");
  const Eigen::MatrixXd G = grid_gram(kernel, *grid);
  return spectrum_from_gram(G, std::move(grid), K);
}

Spectrum nystrom_spectrum_auto(const KernelFn& kernel, const ProductMeasure& measures, int max_K,
                               double coverage, std::size_t node_budget) {
  auto grid = std::make_shared<const TensorGridData>(measures, node_budget);
  const Eigen::MatrixXd G = grid_gram(kernel, *grid);
  Spectrum full = spectrum_from_gram(G, grid, static_cast<int>(grid->size()));
  int keep = std::min<int>(max_K, static_cast<int>(grid->size()));
  if (full.total_trace > 0.0) {
    double acc = 0.0;
    for (int i = 0; i < keep; ++i) {
      acc += full.eigenvalues(i);
      if (acc / full.total_trace >= coverage) {
        keep = i + 1;
        break;
      }
    }
  }
  Spectrum s;
  s.grid = full.grid;
  s.total_trace = full.total_trace;
  s.eigenvalues = full.eigenvalues.head(keep);
  s.eigenfunctions = full.eigenfunctions.leftCols(keep);
  s.coverage = s.total_trace > 0.0 ? s.eigenvalues.sum() / s.total_trace : 1.0;
  return s;
}

QuadFormCoeffs quadform_coeffs(const Spectrum& spectrum, SubsetMask u) {
  if (u.empty())
    throw std::invalid_argument("quadform_coeffs: indices are defined for non-empty subsets only");
  const TensorGridData& grid = *spectrum.grid;
  if (!u.is_subset_of(SubsetMask::full_set(grid.dim())))
    throw std::invalid_argument("quadform_coeffs: subset exceeds dimension");
  const auto K = static_cast<int>(spectrum.eigenvalues.size());
  const auto n = static_cast<Eigen::Index>(grid.size());

  // Effects of the eigenfunctions via the discrete per-dimension projectors.
  Eigen::MatrixXd projected(n, K);
  std::vector<double> buf(grid.size());
  for (int i = 0; i < K; ++i) {
    for (Eigen::Index g = 0; g < n; ++g) buf[static_cast<std::size_t>(g)] = spectrum.eigenfunctions(g, i);
    const std::vector<double> eff = grid.effect(buf, u);
    for (Eigen::Index g = 0; g < n; ++g) projected(g, i) = eff[static_cast<std::size_t>(g)];
  }

  Eigen::VectorXd w(n);
  for (Eigen::Index g = 0; g < n; ++g) w(g) = grid.weight(static_cast<std::size_t>(g));
  Eigen::MatrixXd inner = projected.transpose() * w.asDiagonal() * projected;  // K x K
  Eigen::VectorXd sqrt_l = spectrum.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  QuadFormCoeffs out;
  out.subset = u;
  out.g = sqrt_l.asDiagonal() * inner * sqrt_l.asDiagonal();
  out.g = 0.5 * (out.g + out.g.transpose()).eval();
  return out;
}

PathSobolSamples sobol_path_samples(const KernelFn& kernel, const ProductMeasure& measures,
                                    const std::vector<SubsetMask>& subsets, int n_paths,
                                    std::uint64_t seed, std::size_t node_budget) {
  const int d = measures.dim();
  if (d > 4)
    throw resource_limit_error("sobol_path_samples: tensor-grid path effects restricted to d <= 4");
  for (const SubsetMask& u : subsets)
    if (u.empty() || !u.is_subset_of(SubsetMask::full_set(d)))
      throw std::invalid_argument("sobol_path_samples: invalid subset");

  const TensorGridData grid(measures, node_budget);
  const Eigen::MatrixXd K = [&] {
    Eigen::MatrixXd G(static_cast<Eigen::Index>(grid.size()),
                      static_cast<Eigen::Index>(grid.size()));
    std::vector<std::vector<double>> pts(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) pts[g] = grid.point(g);
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t j = i; j < grid.size(); ++j) {
        const double v = kernel(pts[i], pts[j]);
        G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        G(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
      }
    return G;
  }();
  const GramFactor factor = cholesky_jitter(K);

  PathSobolSamples out;
  for (const SubsetMask& u : subsets) out.samples[u] = {};
  const double scale = K.diagonal().mean();
  std::vector<double> values(grid.size());
  Eigen::VectorXd z(static_cast<Eigen::Index>(grid.size()));
  for (int p = 0; p < n_paths; ++p) {
    NormalSampler draw(seed + static_cast<std::uint64_t>(p));
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = draw();
    const Eigen::VectorXd path = factor.lower_triangular * z;
    for (std::size_t g = 0; g < grid.size(); ++g) values[g] = path(static_cast<Eigen::Index>(g));

    const double mean = grid.integrate(values);
    std::vector<double> centred = values;
    for (double& v : centred) v -= mean;
    const double denom = grid.inner(centred, centred);
    if (denom <= 1e-12 * std::max(scale, 1.0)) {
      ++out.skipped;
      continue;
    }
    for (const SubsetMask& u : subsets) {
      const std::vector<double> eff = grid.effect(values, u);
      out.samples[u].push_back(grid.inner(eff, eff) / denom);
    }
  }
  return out;
}

namespace {

// Adaptive quadrature by interval bisection with an embedded error estimate
// (one panel vs two half panels of 10-point rules).
class Adaptive {
 public:
  explicit Adaptive(const std::function<double(double)>& f) : f_(f) {}

  double integrate(double a, double b, double rel_tol) {
    const double whole = gl10(a, b);
    return refine(a, b, whole, rel_tol, 0);
  }

 private:
  double gl10(double a, double b) const {
    static const double xs[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                                 0.8650633666889845, 0.9739065285171717};
    static const double ws[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                                 0.1494513491505806, 0.0666713443086881};
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 5; ++i)
      acc += ws[i] * (f_(mid - half * xs[i]) + f_(mid + half * xs[i]));
    return acc * half;
  }

  double refine(double a, double b, double whole, double rel_tol, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = gl10(a, mid), right = gl10(mid, b);
    const double sum = left + right;
    if (depth >= 48 || std::abs(sum - whole) <= rel_tol * (std::abs(sum) + 1e-300) ||
        std::abs(sum - whole) < 1e-16)
      return sum;
    return refine(a, mid, left, rel_tol, depth + 1) + refine(mid, b, right, rel_tol, depth + 1);
  }

  const std::function<double(double)>& f_;
};

}  // namespace

SobolMoments sobol_moment(const QuadFormCoeffs& coeffs, const Eigen::VectorXd& eigenvalues) {
  const auto K = static_cast<int>(eigenvalues.size());
  if (K < 2) throw std::invalid_argument("sobol_moment: need K >= 2 eigenvalues");
  if (coeffs.g.rows() != K || coeffs.g.cols() != K)
    throw std::invalid_argument("sobol_moment: coefficient size mismatch");
  if (!(eigenvalues.sum() > 0.0))
    throw degenerate_error("sobol_moment: all eigenvalues vanish");

  // prod_l (1 + 2 lambda_l t)^{-1/2}; early exit once negligible.
  auto root_product = [&](double t) {
    double prod = 1.0;
    for (int l = 0; l < K; ++l) {
      prod /= std::sqrt(1.0 + 2.0 * eigenvalues(l) * t);
      if (prod < 1e-300) return 0.0;
    }
    return prod;
  };

  const double rel_tol = 1e-8;
  SobolMoments out;

  // First moment: sum_i g_ii Int (1+2 l_i t)^{-1} P(t) dt with t = s/(1-s).
  for (int i = 0; i < K; ++i) {
    if (coeffs.g(i, i) == 0.0) continue;
    std::function<double(double)> f = [&](double s) {
      const double t = s / (1.0 - s);
      const double jac = 1.0 / ((1.0 - s) * (1.0 - s));
      return root_product(t) / (1.0 + 2.0 * eigenvalues(i) * t) * jac;
    };
    out.mean += coeffs.g(i, i) * Adaptive(f).integrate(0.0, 1.0, rel_tol);
  }

  // Second moment: sum_ij (g_ii g_jj + 2 g_ij^2)
  //   Int t (1+2 l_i t)^{-1} (1+2 l_j t)^{-1} P(t) dt.
  for (int i = 0; i < K; ++i) {
    for (int j = i; j < K; ++j) {
      const double coeff = coeffs.g(i, i) * coeffs.g(j, j) + 2.0 * coeffs.g(i, j) * coeffs.g(i, j);
      if (coeff == 0.0) continue;
      std::function<double(double)> f = [&](double s) {
        const double t = s / (1.0 - s);
        const double jac = 1.0 / ((1.0 - s) * (1.0 - s));
        return t * root_product(t) / ((1.0 + 2.0 * eigenvalues(i) * t) *
                                      (1.0 + 2.0 * eigenvalues(j) * t)) *
               jac;
      };
      const double integral = Adaptive(f).integrate(0.0, 1.0, rel_tol);
      out.second_moment += (i == j ? 1.0 : 2.0) * coeff * integral;
    }
  }
  return out;
}

}  // namespace kanova
