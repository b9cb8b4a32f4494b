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
#include "kanova/grf.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace kanova {

namespace {

std::vector<double> row_point(const Eigen::MatrixXd& pts, int i) {
  std::vector<double> x(static_cast<std::size_t>(pts.cols()));
  for (int c = 0; c < pts.cols(); ++c) x[static_cast<std::size_t>(c)] = pts(i, c);
  return x;
}

}  // namespace

void DesignMatrix::check_inside(const ProductMeasure& domain) const {
  if (dim() != domain.dim())
    throw std::invalid_argument("DesignMatrix: dimension mismatch with domain");
  if (size() < 1) throw std::invalid_argument("DesignMatrix: need at least one point");
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < dim(); ++j)
      if (!domain.coordinate(j).support().contains(points(i, j)))
        throw std::invalid_argument("DesignMatrix: point outside domain box");
}

Eigen::MatrixXd gram(const DecomposedKernel& kernel, const DesignMatrix& X,
                     const DesignMatrix& Y) {
  const int n = X.size(), m = Y.size();
  std::vector<PointContext> cx, cy;
  cx.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) cx.push_back(kernel.make_context(row_point(X.points, i)));
  const bool same = (&X == &Y) || (n == m && X.points == Y.points);
  if (!same) {
    cy.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) cy.push_back(kernel.make_context(row_point(Y.points, j)));
  }
  const std::vector<PointContext>& ctxY = same ? cx : cy;

  Eigen::MatrixXd K(n, m);
  if (same) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double v = kernel.eval(cx[static_cast<std::size_t>(i)],
                                     ctxY[static_cast<std::size_t>(j)]);
        K(i, j) = v;
        K(j, i) = v;
      }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        K(i, j) = kernel.eval(cx[static_cast<std::size_t>(i)], ctxY[static_cast<std::size_t>(j)]);
  }
  if (!K.allFinite()) throw evaluation_error("gram: kernel produced non-finite entries");
  return K;
}

Eigen::MatrixXd gram(const KernelFn& kernel, const DesignMatrix& X, const DesignMatrix& Y) {
  const int n = X.size(), m = Y.size();
  Eigen::MatrixXd K(n, m);
  std::vector<double> xi(static_cast<std::size_t>(X.dim()));
  std::vector<double> yj(static_cast<std::size_t>(Y.dim()));
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < X.dim(); ++c) xi[static_cast<std::size_t>(c)] = X.points(i, c);
    for (int j = 0; j < m; ++j) {
      for (int c = 0; c < Y.dim(); ++c) yj[static_cast<std::size_t>(c)] = Y.points(j, c);
      K(i, j) = kernel(xi, yj);
    }
  }
  if (!K.allFinite()) throw evaluation_error("gram: kernel produced non-finite entries");
  return K;
}

GramFactor cholesky_jitter(const Eigen::MatrixXd& K) {
  if (K.rows() != K.cols()) throw std::invalid_argument("cholesky_jitter: matrix must be square");
  const double scale = K.diagonal().mean();
  static const double ladder[] = {0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6};
  for (double level : ladder) {
    const double jitter = level * (scale > 0.0 ? scale : 1.0);
    Eigen::MatrixXd Kj = K;
    Kj.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(Kj);
    if (llt.info() == Eigen::Success) {
      GramFactor f;
      f.lower_triangular = llt.matrixL();
      f.jitter_used = jitter;
      return f;
    }
  }
  const double min_eig =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(K, Eigen::EigenvaluesOnly)
          .eigenvalues()
          .minCoeff();
  throw not_positive_definite_error(
      "cholesky_jitter: factorization failed at maximum jitter; min eigenvalue " +
          std::to_string(min_eig),
      min_eig);
}

Eigen::MatrixXd simulate_paths(const GramFactor& factor, int n_paths, std::uint64_t seed) {
  const int n = static_cast<int>(factor.lower_triangular.rows());
  Eigen::MatrixXd paths(n_paths, n);
  Eigen::VectorXd z(n);
  for (int p = 0; p < n_paths; ++p) {
    NormalSampler draw(seed + static_cast<std::uint64_t>(p));
    for (int i = 0; i < n; ++i) z(i) = draw();
    paths.row(p) = (factor.lower_triangular * z).transpose();
  }
  return paths;
}

Eigen::MatrixXd simulate_paths(const DecomposedKernel& kernel, const DesignMatrix& X, int n_paths,
                               std::uint64_t seed) {
  X.check_inside(kernel.base().measures());
  const GramFactor factor = cholesky_jitter(gram(kernel, X, X));
  return simulate_paths(factor, n_paths, seed);
}

GrfModel::GrfModel(DecomposedKernel kernel, DesignMatrix design, Eigen::VectorXd observations,
                   double noise_tau2)
    : kernel_(std::move(kernel)), design_(std::move(design)), obs_(std::move(observations)),
      tau2_(noise_tau2) {
  if (obs_.size() != design_.size())
    throw std::invalid_argument("GrfModel: observation count must match design size");
  if (tau2_ < 0.0) throw std::invalid_argument("GrfModel: noise variance must be >= 0");
  design_.check_inside(kernel_.base().measures());
  Eigen::MatrixXd K = gram(kernel_, design_, design_);
  K.diagonal().array() += tau2_;
  factor_ = cholesky_jitter(K);
  const auto& L = factor_.lower_triangular;
  alpha_ = L.transpose().triangularView<Eigen::Upper>().solve(
      L.triangularView<Eigen::Lower>().solve(obs_));
}

PredictionResult krige_predict(const GrfModel& model, const DesignMatrix& Xnew) {
  Xnew.check_inside(model.kernel().base().measures());
  const Eigen::MatrixXd Kx = gram(model.kernel(), model.design(), Xnew);  // n x m
  const auto& L = model.factor().lower_triangular;
  const Eigen::MatrixXd V = L.triangularView<Eigen::Lower>().solve(Kx);  // n x m

  PredictionResult out;
  out.mean = Kx.transpose() * model.weights();
  out.variance.resize(Xnew.size());
  for (int j = 0; j < Xnew.size(); ++j) {
    const PointContext c = model.kernel().make_context(row_point(Xnew.points, j));
    const double prior = model.kernel().eval(c, c);
    double var = prior - V.col(j).squaredNorm();
    if (var < -1e-6) ++out.negative_variance_warnings;
    out.variance(j) = std::max(var, 0.0);
  }
  return out;
}

double conditional_effect_cov(double sigma2, const CentredKernel1D& k0, double r, double s,
                              double t) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("conditional_effect_cov: sigma2 must be > 0");
  const Interval& dom = k0.base().domain();
  if (!dom.contains(r) || !dom.contains(s) || !dom.contains(t))
    throw std::invalid_argument("conditional_effect_cov: argument outside domain");
  const double denom = sigma2 + k0(r, r);
  if (denom <= 1e-14)
    throw degenerate_error("conditional_effect_cov: degenerate conditioning at r");
  return -sigma2 * k0(t, r) / denom;
}

}  // namespace kanova
