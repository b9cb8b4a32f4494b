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

#include "kanova/generic_terms.hpp"
#include "kanova/product_kernel.hpp"
#include "kanova/rng.hpp"

using namespace kanova;

namespace {

std::vector<double> random_point(NormalSampler& rng, int d) {
  std::vector<double> x(static_cast<std::size_t>(d));
  for (double& v : x) v = rng.uniform();
  return x;
}

const SubsetMask kEmpty = SubsetMask::empty_set();
const SubsetMask kOne = SubsetMask::singleton(0);

}  // namespace

TEST_CASE("brownian terms match the known closed forms") {
  const ProductKernel pk = ProductKernel::iso(Kernel1D::brownian(), 1);
  NormalSampler rng(2);
  for (int t = 0; t < 50; ++t) {
    const std::vector<double> x = random_point(rng, 1), y = random_point(rng, 1);
    CHECK(kanova_term_product(pk, kEmpty, kEmpty, x, y) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(kanova_term_product(pk, kEmpty, kOne, x, y) ==
          doctest::Approx(y[0] - 0.5 * y[0] * y[0] - 1.0 / 3.0).epsilon(1e-12));
    CHECK(kanova_term_product(pk, kOne, kEmpty, x, y) ==
          doctest::Approx(x[0] - 0.5 * x[0] * x[0] - 1.0 / 3.0).epsilon(1e-12));
    const double want = std::min(x[0], y[0]) - x[0] + 0.5 * x[0] * x[0] - y[0] +
                        0.5 * y[0] * y[0] + 1.0 / 3.0;
    CHECK(kanova_term_product(pk, kOne, kOne, x, y) == doctest::Approx(want).epsilon(1e-12));
  }
  const std::vector<double> half = {0.5};
  CHECK(kanova_term_product(pk, kOne, kOne, half, half) ==
        doctest::Approx(1.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("unit-constant product kernels have vanishing off-diagonal terms") {
  // prod_i (1 + k_i0): off-diagonal terms contain an exactly-zero factor,
  // diagonal terms are exactly the product of centred factors.
  for (const Kernel1D& base : {Kernel1D::brownian(), Kernel1D::gaussian(0.6)}) {
    const ProductKernel pk = ProductKernel::anova_unit_iso(base, 2);
    NormalSampler rng(3);
    for (int t = 0; t < 25; ++t) {
      const std::vector<double> x = random_point(rng, 2), y = random_point(rng, 2);
      for (const SubsetMask& u : all_subsets(2))
        for (const SubsetMask& v : all_subsets(2)) {
          const double term = kanova_term_product(pk, u, v, x, y);
          if (u == v) {
            double want = 1.0;
            for (int i : u.indices())
              want *= pk.factor_centred(i, x[static_cast<std::size_t>(i)],
                                        y[static_cast<std::size_t>(i)]);
            CHECK(term == doctest::Approx(want).epsilon(1e-12));
          } else {
            CHECK(term == 0.0);  // exact
          }
        }
    }
  }
}

TEST_CASE("terms ignore coordinates outside their index sets") {
  const ProductKernel pk = ProductKernel::iso(Kernel1D::gaussian(0.8), 3);
  NormalSampler rng(5);
  const SubsetMask u = SubsetMask::from_indices({0});
  const SubsetMask v = SubsetMask::from_indices({0, 2});
  const std::vector<double> x = random_point(rng, 3), y = random_point(rng, 3);
  std::vector<double> x2 = x, y2 = y;
  x2[1] = rng.uniform();
  x2[2] = rng.uniform();  // outside u
  y2[1] = rng.uniform();  // outside v
  CHECK(kanova_term_product(pk, u, v, x, y) == kanova_term_product(pk, u, v, x2, y2));
}

TEST_CASE("full reconstruction by explicit enumeration at small d") {
  NormalSampler rng(7);
  for (int d : {1, 2, 3}) {
    const ProductKernel pk = ProductKernel::iso(Kernel1D::matern(1, 0.9), d);
    for (int t = 0; t < 10; ++t) {
      const std::vector<double> x = random_point(rng, d), y = random_point(rng, d);
      double sum = 0.0;
      for (const SubsetMask& u : all_subsets(d))
        for (const SubsetMask& v : all_subsets(d)) sum += kanova_term_product(pk, u, v, x, y);
      CHECK(sum == doctest::Approx(pk.eval_full(x, y)).epsilon(1e-10));
    }
  }
}

TEST_CASE("full reconstruction via the per-dimension identity at d=30") {
  const int d = 30;
  const ProductKernel pk = ProductKernel::iso(Kernel1D::gaussian(1.0 / std::numbers::sqrt2), d);
  NormalSampler rng(11);
  for (int t = 0; t < 20; ++t) {
    const std::vector<double> x = random_point(rng, d), y = random_point(rng, d);
    double prod = 1.0;
    for (int i = 0; i < d; ++i) {
      const double ee = pk.factor_double_integral(i);
      const double ex = pk.embedding(i, x[static_cast<std::size_t>(i)]);
      const double ey = pk.embedding(i, y[static_cast<std::size_t>(i)]);
      const double c = pk.factor_centred(i, x[static_cast<std::size_t>(i)],
                                         y[static_cast<std::size_t>(i)]);
      prod *= c + (ex - ee) + (ey - ee) + ee;
    }
    CHECK(std::abs(prod - pk.eval_full(x, y)) < 1e-10);
  }
}

TEST_CASE("annihilation: integrating a term over an active coordinate gives zero") {
  const ProductKernel pk = ProductKernel::iso(Kernel1D::gaussian(0.7), 3);
  const QuadratureRule rule = gauss_legendre(64, Interval(0.0, 1.0));
  NormalSampler rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const SubsetMask u(1 + static_cast<std::uint64_t>(rng.uniform() * 7) % 7);
    const SubsetMask v(static_cast<std::uint64_t>(rng.uniform() * 8) % 8);
    std::vector<double> x = random_point(rng, 3);
    const std::vector<double> y = random_point(rng, 3);
    const int i = u.indices()[0];
    const double integral = integrate_1d(
        [&](double xi) {
          x[static_cast<std::size_t>(i)] = xi;
          return kanova_term_product(pk, u, v, x, y);
        },
        rule);
    CHECK(std::abs(integral) < 1e-8);
    if (!v.empty()) {
      std::vector<double> yy = y;
      const int j = v.indices()[0];
      const double integral_y = integrate_1d(
          [&](double yj) {
            yy[static_cast<std::size_t>(j)] = yj;
            return kanova_term_product(pk, u, v, x, yy);
          },
          rule);
      CHECK(std::abs(integral_y) < 1e-8);
    }
  }
}

TEST_CASE("generic path reproduces the brownian closed forms") {
  const ProductMeasure fine(std::vector<Measure1D>{Measure1D(Interval(0.0, 1.0), 1000)});
  const KernelFn min_kernel = [](std::span<const double> x, std::span<const double> y) {
    return std::min(x[0], y[0]);
  };
  const GenericTermEvaluator eval(min_kernel, fine);
  const std::vector<double> half = {0.5};
  CHECK(eval.term(kOne, kOne, half, half) == doctest::Approx(1.0 / 12.0).epsilon(1e-6));
  CHECK(eval.term(kEmpty, kEmpty, half, half) == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  const std::vector<double> y = {0.3};
  CHECK(eval.term(kEmpty, kOne, half, y) ==
        doctest::Approx(0.3 - 0.5 * 0.09 - 1.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("generic path agrees with the product fast path for a smooth kernel") {
  const int d = 2;
  const ProductKernel pk = ProductKernel::iso(Kernel1D::gaussian(1.0), d, 16);
  const KernelFn fn = [&](std::span<const double> x, std::span<const double> y) {
    return pk.eval_full(x, y);
  };
  const GenericTermEvaluator eval(fn, pk.measures());
  NormalSampler rng(17);
  for (int t = 0; t < 20; ++t) {
    const std::vector<double> x = random_point(rng, d), y = random_point(rng, d);
    for (const SubsetMask& u : all_subsets(d))
      for (const SubsetMask& v : all_subsets(d)) {
        const double generic = eval.term(u, v, x, y);
        const double product = kanova_term_product(pk, u, v, x, y);
        CHECK(generic == doctest::Approx(product).epsilon(1e-6));
      }
  }
}

TEST_CASE("generic path is constant in (x,y) for empty index sets") {
  const ProductKernel pk = ProductKernel::iso(Kernel1D::exponential(0.5), 2, 24);
  const KernelFn fn = [&](std::span<const double> x, std::span<const double> y) {
    return pk.eval_full(x, y);
  };
  const GenericTermEvaluator eval(fn, pk.measures());
  NormalSampler rng(19);
  const double first =
      eval.term(kEmpty, kEmpty, random_point(rng, 2), random_point(rng, 2));
  for (int t = 0; t < 5; ++t)
    CHECK(eval.term(kEmpty, kEmpty, random_point(rng, 2), random_point(rng, 2)) == first);
}

TEST_CASE("generic path refuses d > 3") {
  const ProductMeasure pm = ProductMeasure::uniform_unit(4, 4);
  const KernelFn fn = [](std::span<const double>, std::span<const double>) { return 1.0; };
  const std::vector<double> x(4, 0.5);
  CHECK_THROWS_AS(kanova_term_generic(fn, kEmpty, kEmpty, x, x, pm), resource_limit_error);
}
