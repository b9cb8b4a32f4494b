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

#include "kanova/nystrom.hpp"
#include "kanova/projector.hpp"
#include "kanova/rng.hpp"

using namespace kanova;

namespace {

KernelFn kernel_1d(std::function<double(double, double)> k) {
  return [k = std::move(k)](std::span<const double> x, std::span<const double> y) {
    return k(x[0], y[0]);
  };
}

const SubsetMask u1 = SubsetMask::singleton(0);
const SubsetMask u2 = SubsetMask::singleton(1);
const SubsetMask u12 = SubsetMask::from_indices({0, 1});

}  // namespace

TEST_CASE("brownian eigenvalues match the analytic spectrum") {
  const ProductMeasure pm = ProductMeasure::uniform_unit(1, 200);
  const Spectrum s =
      nystrom_spectrum(kernel_1d([](double x, double y) { return std::min(x, y); }), pm, 5);
  for (int i = 0; i < 5; ++i) {
    const double want = std::pow(2.0 / ((2.0 * i + 1.0) * std::numbers::pi), 2.0);
    CHECK(std::abs(s.eigenvalues(i) - want) < 1e-3);
  }
}

TEST_CASE("constant kernels are rank one") {
  const ProductMeasure pm = ProductMeasure::uniform_unit(1, 32);
  const Spectrum s = nystrom_spectrum(kernel_1d([](double, double) { return 0.7; }), pm, 3);
  CHECK(s.eigenvalues(0) == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(std::abs(s.eigenvalues(1)) < 1e-10);
  CHECK(std::abs(s.eigenvalues(2)) < 1e-10);
}

TEST_CASE("trace identity for a smooth kernel") {
  const Kernel1D g = Kernel1D::gaussian(1.0);
  const ProductMeasure pm = ProductMeasure::uniform_unit(1, 64);
  const Spectrum s = nystrom_spectrum(kernel_1d([&](double x, double y) { return g(x, y); }), pm,
                                      64);
  CHECK(std::abs(s.eigenvalues.sum() - 1.0) < 0.01);  // Int k(x,x) dnu = 1
  CHECK(s.total_trace == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("eigenfunctions are discretely orthonormal and ordered") {
  const Kernel1D g = Kernel1D::gaussian(0.6);
  const ProductMeasure pm = ProductMeasure::uniform_unit(1, 48);
  const Spectrum s = nystrom_spectrum(kernel_1d([&](double x, double y) { return g(x, y); }), pm,
                                      20);
  const TensorGridData& grid = *s.grid;
  for (int i = 0; i < 20; ++i) {
    CHECK(s.eigenvalues(i) >= 0.0);
    if (i > 0) CHECK(s.eigenvalues(i) <= s.eigenvalues(i - 1));
    for (int j = i; j < 20; ++j) {
      double inner = 0.0;
      for (std::size_t gidx = 0; gidx < grid.size(); ++gidx)
        inner += grid.weight(gidx) * s.eigenfunctions(static_cast<Eigen::Index>(gidx), i) *
                 s.eigenfunctions(static_cast<Eigen::Index>(gidx), j);
      CHECK(std::abs(inner - (i == j ? 1.0 : 0.0)) < 1e-8);
    }
  }
}

TEST_CASE("truncation guards and auto coverage") {
  const ProductMeasure pm = ProductMeasure::uniform_unit(1, 16);
  const KernelFn k = kernel_1d([](double x, double y) { return std::min(x, y); });
  CHECK_THROWS_AS(nystrom_spectrum(k, pm, 17), std::invalid_argument);
  const Spectrum s = nystrom_spectrum_auto(k, pm, 100, 0.99);
  CHECK(s.eigenvalues.size() <= 16);
  CHECK(s.coverage >= 0.99);
}

TEST_CASE("quadratic-form coefficients") {
  const CentredKernel1D k0 = centre_kernel1d(Kernel1D::brownian());
  const ProductMeasure pm = ProductMeasure::uniform_unit(1, 96);
  const Spectrum s =
      nystrom_spectrum(kernel_1d([&](double x, double y) { return k0(x, y); }), pm, 40);

  SUBCASE("the empty subset is rejected") {
    CHECK_THROWS_AS(quadform_coeffs(s, SubsetMask::empty_set()), std::invalid_argument);
  }

  SUBCASE("d=1 main effect gives a diagonal matrix of eigenvalues") {
    const QuadFormCoeffs q = quadform_coeffs(s, u1);
    for (int i = 0; i < 40; ++i) {
      CHECK(q.g(i, i) == doctest::Approx(s.eigenvalues(i)).epsilon(1e-6));
      for (int j = 0; j < i; ++j) CHECK(std::abs(q.g(i, j)) < 1e-6);
    }
  }

  SUBCASE("coefficients are symmetric p.s.d. with the expected trace") {
    const QuadFormCoeffs q = quadform_coeffs(s, u1);
    CHECK(q.g.isApprox(q.g.transpose()));
    const Eigen::VectorXd eig =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(q.g, Eigen::EigenvaluesOnly).eigenvalues();
    CHECK(eig.minCoeff() >= -1e-8);
  }
}

TEST_CASE("effect-norm traces partition the total trace for a d=2 field") {
  auto base = std::make_shared<const ProductKernel>(
      ProductKernel::anova_unit_iso(Kernel1D::gaussian(0.6), 2, 20));
  const DecomposedKernel centred = DecomposedKernel::full_kernel(base).centred_field();
  const ProductMeasure& pm = base->measures();
  const Spectrum s = nystrom_spectrum(centred.as_fn(), pm, 60);
  const double total =
      quadform_coeffs(s, u1).g.trace() + quadform_coeffs(s, u2).g.trace() +
      quadform_coeffs(s, u12).g.trace();
  CHECK(total == doctest::Approx(s.eigenvalues.sum()).epsilon(1e-6));
}

TEST_CASE("per-path sobol samples") {
  SUBCASE("d=1 samples are identically one") {
    const CentredKernel1D k0 = centre_kernel1d(Kernel1D::gaussian(0.5));
    const ProductMeasure pm = ProductMeasure::uniform_unit(1, 48);
    const PathSobolSamples ps = sobol_path_samples(
        kernel_1d([&](double x, double y) { return k0(x, y); }), pm, {u1}, 50, 9);
    CHECK(ps.skipped == 0);
    for (double v : ps.samples.at(u1)) CHECK(std::abs(v - 1.0) < 1e-9);
  }

  SUBCASE("per-path indices over all subsets sum to one") {
    auto base = std::make_shared<const ProductKernel>(
        ProductKernel::iso(Kernel1D::gaussian(0.8), 2, 16));
    const DecomposedKernel k = DecomposedKernel::full_kernel(base);
    const PathSobolSamples ps =
        sobol_path_samples(k.as_fn(), base->measures(), {u1, u2, u12}, 40, 11);
    for (std::size_t p = 0; p < ps.samples.at(u1).size(); ++p) {
      const double sum =
          ps.samples.at(u1)[p] + ps.samples.at(u2)[p] + ps.samples.at(u12)[p];
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
      CHECK(ps.samples.at(u1)[p] >= 0.0);
      CHECK(ps.samples.at(u1)[p] <= 1.0);
    }
  }

  SUBCASE("exchangeable factors give exchangeable index means") {
    auto base = std::make_shared<const ProductKernel>(
        ProductKernel::anova_unit_iso(Kernel1D::gaussian(0.7), 2, 14));
    const DecomposedKernel k = DecomposedKernel::full_kernel(base);
    const int paths = 2000;
    const PathSobolSamples ps =
        sobol_path_samples(k.as_fn(), base->measures(), {u1, u2}, paths, 13);
    const auto& s1 = ps.samples.at(u1);
    const auto& s2 = ps.samples.at(u2);
    double mean_diff = 0.0;
    for (std::size_t p = 0; p < s1.size(); ++p) mean_diff += s1[p] - s2[p];
    mean_diff /= static_cast<double>(s1.size());
    double var_diff = 0.0;
    for (std::size_t p = 0; p < s1.size(); ++p)
      var_diff += std::pow(s1[p] - s2[p] - mean_diff, 2.0);
    var_diff /= static_cast<double>(s1.size() - 1);
    const double se = std::sqrt(var_diff / static_cast<double>(s1.size()));
    CHECK(std::abs(mean_diff) < 4.0 * std::max(se, 1e-12));
  }
}

TEST_CASE("moment formulas") {
  SUBCASE("d=1 identity: both moments are one") {
    const CentredKernel1D k0 = centre_kernel1d(Kernel1D::brownian());
    const ProductMeasure pm = ProductMeasure::uniform_unit(1, 128);
    const Spectrum s =
        nystrom_spectrum(kernel_1d([&](double x, double y) { return k0(x, y); }), pm, 100);
    const QuadFormCoeffs q = quadform_coeffs(s, u1);
    const SobolMoments m = sobol_moment(q, s.eigenvalues);
    CHECK(std::abs(m.mean - 1.0) < 1e-3);
    CHECK(std::abs(m.second_moment - 1.0) < 1e-3);
    CHECK(m.second_moment - m.mean * m.mean >= -1e-9);
  }

  SUBCASE("d=2 mean matches Monte Carlo within 3 standard errors") {
    auto base = std::make_shared<const ProductKernel>(
        ProductKernel::iso(Kernel1D::gaussian(1.0 / std::numbers::sqrt2), 2, 16));
    const DecomposedKernel centred = DecomposedKernel::full_kernel(base).centred_field();
    const Spectrum s = nystrom_spectrum_auto(centred.as_fn(), base->measures(), 100, 0.999);
    const QuadFormCoeffs q = quadform_coeffs(s, u1);
    const SobolMoments m = sobol_moment(q, s.eigenvalues);

    const int paths = 1500;
    const PathSobolSamples ps =
        sobol_path_samples(centred.as_fn(), base->measures(), {u1}, paths, 17);
    const auto& samples = ps.samples.at(u1);
    double mc = 0.0;
    for (double v : samples) mc += v;
    mc /= static_cast<double>(samples.size());
    double var = 0.0;
    for (double v : samples) var += (v - mc) * (v - mc);
    var /= static_cast<double>(samples.size() - 1);
    const double se = std::sqrt(var / static_cast<double>(samples.size()));
    CHECK(std::abs(m.mean - mc) < 3.0 * se);

    // Sanity: the index variance implied by the two moments is non-negative.
    CHECK(m.second_moment - m.mean * m.mean >= -1e-9);
  }

  SUBCASE("degenerate spectra are rejected") {
    QuadFormCoeffs q;
    q.g = Eigen::MatrixXd::Zero(2, 2);
    q.subset = u1;
    CHECK_THROWS_AS(sobol_moment(q, Eigen::VectorXd::Zero(2)), degenerate_error);
    CHECK_THROWS_AS(sobol_moment(q, Eigen::VectorXd::Ones(1)), std::invalid_argument);
  }
}
