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
#include <doctest.h>

#include <cmath>
#include <memory>

#include "kanova/fanova.hpp"
#include "kanova/grf.hpp"
#include "oracles.hpp"

using namespace kanova;
using kanova::testing::integrate_split;

namespace {

DecomposedKernel full_gaussian(int d, double theta, int order = 64) {
  return DecomposedKernel::full_kernel(std::make_shared<const ProductKernel>(
      ProductKernel::iso(Kernel1D::gaussian(theta), d, order)));
}

DesignMatrix design_1d(std::initializer_list<double> xs) {
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) pts(i++, 0) = x;
  return DesignMatrix(pts);
}

}  // namespace

TEST_CASE("gram basics") {
  const DecomposedKernel g1 = full_gaussian(1, 1.0);
  const DesignMatrix one = design_1d({0.4});
  CHECK(gram(g1, one, one)(0, 0) == 1.0);

  const DecomposedKernel br = DecomposedKernel::full_kernel(
      std::make_shared<const ProductKernel>(ProductKernel::iso(Kernel1D::brownian(), 1)));
  const DesignMatrix two = design_1d({0.3, 0.7});
  const Eigen::MatrixXd K = gram(br, two, two);
  CHECK(K(0, 0) == 0.3);
  CHECK(K(0, 1) == 0.3);
  CHECK(K(1, 0) == 0.3);
  CHECK(K(1, 1) == 0.7);
}

TEST_CASE("gram of a projected kernel matches term enumeration") {
  auto base = std::make_shared<const ProductKernel>(
      ProductKernel::iso(Kernel1D::gaussian(1.0 / std::numbers::sqrt2), 2));
  const DecomposedKernel anova(base, ProjectorSpec::family("k_anova"));
  Eigen::MatrixXd pts(2, 2);
  pts << 0.0, 0.0, 1.0, 1.0;
  const DesignMatrix X(pts);
  const Eigen::MatrixXd K = gram(anova, X, X);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const std::vector<double> x = {pts(a, 0), pts(a, 1)}, y = {pts(b, 0), pts(b, 1)};
      double want = 0.0;
      for (const SubsetMask& u : all_subsets(2)) want += kanova_term_product(*base, u, u, x, y);
      CHECK(K(a, b) == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("cholesky jitter ladder") {
  SUBCASE("identity factorizes with zero jitter") {
    const GramFactor f = cholesky_jitter(Eigen::MatrixXd::Identity(3, 3));
    CHECK(f.jitter_used == 0.0);
    CHECK(f.lower_triangular.isApprox(Eigen::MatrixXd::Identity(3, 3)));
  }
  SUBCASE("rank-one matrix climbs the ladder and reports the jitter") {
    const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(3, 3);
    const GramFactor f = cholesky_jitter(ones);
    CHECK(f.jitter_used > 0.0);
    CHECK(f.jitter_used <= 1e-6);
    const Eigen::MatrixXd rebuilt = f.lower_triangular * f.lower_triangular.transpose();
    CHECK((rebuilt - ones).norm() <= 1e-6 * 3 * ones.norm());
  }
  SUBCASE("negative definite input fails with a diagnostic") {
    try {
      cholesky_jitter(-Eigen::MatrixXd::Identity(2, 2));
      FAIL("expected not_positive_definite_error");
    } catch (const not_positive_definite_error& e) {
      CHECK(e.min_eigenvalue() == doctest::Approx(-1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("path simulation is deterministic given the seed") {
  const DecomposedKernel k = full_gaussian(2, 0.7);
  Eigen::MatrixXd pts(3, 2);
  pts << 0.1, 0.2, 0.5, 0.9, 0.8, 0.3;
  const DesignMatrix X(pts);
  const Eigen::MatrixXd a = simulate_paths(k, X, 5, 99);
  const Eigen::MatrixXd b = simulate_paths(k, X, 5, 99);
  CHECK(a == b);  // bit identical
  const Eigen::MatrixXd c = simulate_paths(k, X, 5, 100);
  CHECK(a != c);
}

TEST_CASE("simulated marginal variance matches the kernel (Monte Carlo)") {
  const DecomposedKernel k = full_gaussian(1, 1.0);
  const DesignMatrix X = design_1d({0.42});
  const int paths = 10000;
  const Eigen::MatrixXd Z = simulate_paths(k, X, paths, 7);
  const double mean = Z.col(0).mean();
  const double var = (Z.col(0).array() - mean).square().sum() / (paths - 1);
  // Variance estimator SE is about sigma^2 sqrt(2/M).
  CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / paths));
}

TEST_CASE("empirical covariance of brownian paths matches min(x,y)") {
  const DecomposedKernel br = DecomposedKernel::full_kernel(
      std::make_shared<const ProductKernel>(ProductKernel::iso(Kernel1D::brownian(), 1)));
  const DesignMatrix X = design_1d({0.3, 0.7});
  const int paths = 20000;
  const Eigen::MatrixXd Z = simulate_paths(br, X, paths, 21);
  Eigen::Vector2d mean = Z.colwise().mean();
  Eigen::Matrix2d S = Eigen::Matrix2d::Zero();
  for (int p = 0; p < paths; ++p) {
    const Eigen::Vector2d c = Z.row(p).transpose() - mean;
    S += c * c.transpose();
  }
  S /= paths - 1;
  const Eigen::Matrix2d want = (Eigen::Matrix2d() << 0.3, 0.3, 0.3, 0.7).finished();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double se = std::sqrt((want(a, a) * want(b, b) + want(a, b) * want(a, b)) / paths);
      CHECK(std::abs(S(a, b) - want(a, b)) < 4.0 * se);
    }
}

TEST_CASE("kriging interpolates noiseless observations") {
  const DecomposedKernel k = full_gaussian(1, 0.4);
  const DesignMatrix X = design_1d({0.2, 0.5, 0.8});
  const Eigen::Vector3d y(1.0, -0.5, 2.0);
  const GrfModel model(k, X, y, 0.0);
  const PredictionResult pred = krige_predict(model, X);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(pred.mean(i) - y(i)) < 1e-6);
    CHECK(pred.variance(i) <= 1e-8);
    CHECK(pred.variance(i) >= 0.0);
  }
}

TEST_CASE("far-field prediction reverts to the prior") {
  const DecomposedKernel k = full_gaussian(1, 0.05);
  const GrfModel model(k, design_1d({0.1}), Eigen::VectorXd::Constant(1, 3.0), 0.0);
  const PredictionResult pred = krige_predict(model, design_1d({0.9}));
  CHECK(std::abs(pred.mean(0)) < 1e-6);
  CHECK(pred.variance(0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("one-point brownian kriging has the hand-computed ratio") {
  const DecomposedKernel br = DecomposedKernel::full_kernel(
      std::make_shared<const ProductKernel>(ProductKernel::iso(Kernel1D::brownian(), 1)));
  const GrfModel model(br, design_1d({0.5}), Eigen::VectorXd::Constant(1, 1.0), 0.0);
  const PredictionResult pred = krige_predict(model, design_1d({0.25}));
  CHECK(pred.mean(0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("model validation") {
  const DecomposedKernel k = full_gaussian(1, 1.0);
  CHECK_THROWS_AS(GrfModel(k, design_1d({0.1, 0.9}), Eigen::VectorXd::Zero(3), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(GrfModel(k, design_1d({0.1}), Eigen::VectorXd::Zero(1), -1.0),
                  std::invalid_argument);
}

TEST_CASE("conditional cross-covariance of constant and main effects") {
  const CentredKernel1D k0 = centre_kernel1d(Kernel1D::brownian());

  SUBCASE("value at t = r = 1/2") {
    CHECK(conditional_effect_cov(1.0, k0, 0.5, 0.1, 0.5) ==
          doctest::Approx(-1.0 / 13.0).epsilon(1e-12));
  }

  SUBCASE("does not depend on s") {
    const double a = conditional_effect_cov(1.0, k0, 0.3, 0.1, 0.8);
    const double b = conditional_effect_cov(1.0, k0, 0.3, 0.9, 0.8);
    CHECK(a == b);
  }

  SUBCASE("vanishes where the centred kernel vanishes") {
    // Bisect t -> k0(t, 0.5) for a sign change on [0, 0.5].
    double lo = 0.0, hi = 0.5;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (k0(lo, 0.5) * k0(mid, 0.5) <= 0.0)
        hi = mid;
      else
        lo = mid;
    }
    const double t0 = 0.5 * (lo + hi);
    CHECK(std::abs(conditional_effect_cov(1.0, k0, 0.5, 0.2, t0)) < 1e-12);
  }

  SUBCASE("matches the quadrature evaluation of the projected conditional covariance") {
    const double sigma2 = 1.0;
    auto cond_cov = [&](double s, double t, double r) {
      auto k = [&](double a, double b) { return sigma2 + k0(a, b); };
      return k(s, t) - k(s, r) * k(r, t) / k(r, r);
    };
    const Interval dom(0.0, 1.0);
    for (double r : {0.25, 0.6}) {
      for (double t : {0.15, 0.5, 0.85}) {
        auto g = [&](double tt) {
          return integrate_split([&](double s) { return cond_cov(s, tt, r); }, dom, {tt, r});
        };
        const double g_mean = integrate_split(g, dom, {r, t});
        const double oracle = g(t) - g_mean;
        CHECK(std::abs(conditional_effect_cov(sigma2, k0, r, 0.3, t) - oracle) < 1e-6);
      }
    }
  }

  SUBCASE("degenerate conditioning is rejected") {
    CHECK_THROWS_AS(conditional_effect_cov(0.0, k0, 0.5, 0.5, 0.5), std::invalid_argument);
  }
}

TEST_CASE("fields simulated under a star projector have no other effects") {
  // star(U) with U = {{}, {1}, {2,3}} at d=3: discrete effects outside U
  // vanish up to grid quadrature error, and kriged posterior means inherit
  // the same sparsity.
  const int d = 3;
  auto base = std::make_shared<const ProductKernel>(
      ProductKernel::iso(Kernel1D::gaussian(1.0 / std::numbers::sqrt2), d, 10));
  const std::vector<SubsetMask> U = {SubsetMask::empty_set(), SubsetMask::singleton(0),
                                     SubsetMask::from_indices({1, 2})};
  const DecomposedKernel star(base, ProjectorSpec::star(U));

  const TensorGridData grid(base->measures());
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(grid.size()), d);
  for (std::size_t g = 0; g < grid.size(); ++g)
    for (int i = 0; i < d; ++i) pts(static_cast<Eigen::Index>(g), i) = grid.node(g, i);
  const DesignMatrix X(pts);

  const int paths = 20;
  const Eigen::MatrixXd Z = simulate_paths(star, X, paths, 31);
  std::vector<SubsetMask> absent;
  for (const SubsetMask& u : all_subsets(d))
    if (std::find(U.begin(), U.end(), u) == U.end()) absent.push_back(u);

  std::vector<double> values(grid.size());
  for (int p = 0; p < paths; ++p) {
    for (std::size_t g = 0; g < grid.size(); ++g)
      values[g] = Z(p, static_cast<Eigen::Index>(g));
    for (const SubsetMask& u : absent) {
      const std::vector<double> eff = grid.effect(values, u);
      for (double v : eff) CHECK(std::abs(v) <= 1e-4);
    }
    // Present effects do not vanish.
    const std::vector<double> main1 = grid.effect(values, SubsetMask::singleton(0));
    double sup = 0.0;
    for (double v : main1) sup = std::max(sup, std::abs(v));
    CHECK(sup > 1e-3);
  }

  // Kriged posterior mean from a few observations of the first path.
  Eigen::MatrixXd train_pts(25, d);
  NormalSampler rng(77);
  for (int i = 0; i < 25; ++i)
    for (int j = 0; j < d; ++j) train_pts(i, j) = rng.uniform();
  const DesignMatrix train(train_pts);
  const Eigen::MatrixXd path_at_train =
      simulate_paths(star, train, 1, 31);  // a fresh path draw on train points
  const GrfModel model(star, train, path_at_train.row(0).transpose(), 1e-8);
  const PredictionResult post = krige_predict(model, X);
  for (std::size_t g = 0; g < grid.size(); ++g)
    values[g] = post.mean(static_cast<Eigen::Index>(g));
  for (const SubsetMask& u : absent) {
    const std::vector<double> eff = grid.effect(values, u);
    for (double v : eff) CHECK(std::abs(v) <= 1e-4);
  }
}

TEST_CASE("unit-constant product kernels give uncorrelated effects (Monte Carlo)") {
  const int d = 2;
  auto base = std::make_shared<const ProductKernel>(
      ProductKernel::anova_unit_iso(Kernel1D::gaussian(0.5), d, 12));
  const DecomposedKernel k = DecomposedKernel::full_kernel(base);

  const TensorGridData grid(base->measures());
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(grid.size()), d);
  for (std::size_t g = 0; g < grid.size(); ++g)
    for (int i = 0; i < d; ++i) pts(static_cast<Eigen::Index>(g), i) = grid.node(g, i);
  const int paths = 4000;
  const Eigen::MatrixXd Z = simulate_paths(k, DesignMatrix(pts), paths, 5);

  // Effects at two probe nodes for u = {1} and v = {2}.
  const std::size_t gx = grid.size() / 3, gy = grid.size() / 2;
  std::vector<double> values(grid.size());
  Eigen::VectorXd eu(paths), ev(paths);
  for (int p = 0; p < paths; ++p) {
    for (std::size_t g = 0; g < grid.size(); ++g)
      values[g] = Z(p, static_cast<Eigen::Index>(g));
    eu(p) = grid.effect(values, SubsetMask::singleton(0))[gx];
    ev(p) = grid.effect(values, SubsetMask::singleton(1))[gy];
  }
  const double mu = eu.mean(), mv = ev.mean();
  const double su = std::sqrt((eu.array() - mu).square().sum() / (paths - 1));
  const double sv = std::sqrt((ev.array() - mv).square().sum() / (paths - 1));
  const double cov = ((eu.array() - mu) * (ev.array() - mv)).sum() / (paths - 1);
  const double corr = cov / (su * sv);
  CHECK(std::abs(corr) < 4.0 / std::sqrt(static_cast<double>(paths)));
}
