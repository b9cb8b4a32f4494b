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

#include "kanova/quadrature.hpp"
#include "kanova/rng.hpp"

using namespace kanova;

TEST_CASE("gauss_legendre order 1 is the midpoint rule") {
  const QuadratureRule r = gauss_legendre(1, Interval(0.0, 1.0));
  REQUIRE(r.size() == 1);
  CHECK(r.nodes[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("gauss_legendre order 2 integrates x^2 exactly") {
  const QuadratureRule r = gauss_legendre(2, Interval(0.0, 1.0));
  const double v = integrate_1d([](double x) { return x * x; }, r);
  CHECK(std::abs(v - 1.0 / 3.0) < 1e-15);
}

TEST_CASE("gauss_legendre order 16 integrates exp to 1e-12") {
  const QuadratureRule r = gauss_legendre(16, Interval(0.0, 1.0));
  const double v = integrate_1d([](double x) { return std::exp(x); }, r);
  CHECK(std::abs(v - (std::numbers::e - 1.0)) < 1e-12);
}

TEST_CASE("rules are normalized probability rules with increasing interior nodes") {
  NormalSampler rng(7);
  for (int order : {1, 2, 3, 5, 8, 16, 32, 64, 128}) {
    const double a = -2.0 + 3.0 * rng.uniform();
    const Interval iv(a, a + 0.5 + 2.0 * rng.uniform());
    const QuadratureRule r = gauss_legendre(order, iv);
    double sum = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      sum += r.weights[j];
      CHECK(r.weights[j] > 0.0);
      CHECK(iv.contains(r.nodes[j]));
      if (j > 0) CHECK(r.nodes[j] > r.nodes[j - 1]);
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("polynomial exactness up to degree 2*order-1") {
  NormalSampler rng(11);
  for (int order : {1, 2, 4, 7, 13}) {
    const Interval iv(-0.4, 1.7);
    const QuadratureRule r = gauss_legendre(order, iv);
    for (int trial = 0; trial < 5; ++trial) {
      const int degree = 2 * order - 1;
      std::vector<double> coeff(static_cast<std::size_t>(degree) + 1);
      for (double& c : coeff) c = 2.0 * rng.uniform() - 1.0;

      const double got = integrate_1d(
          [&](double x) {
            double acc = 0.0;
            for (std::size_t k = coeff.size(); k-- > 0;) acc = acc * x + coeff[k];
            return acc;
          },
          r);
      // Exact moment of the uniform probability measure.
      double want = 0.0;
      for (std::size_t k = 0; k < coeff.size(); ++k)
        want += coeff[k] *
                (std::pow(iv.upper, static_cast<double>(k) + 1.0) -
                 std::pow(iv.lower, static_cast<double>(k) + 1.0)) /
                ((static_cast<double>(k) + 1.0) * iv.length());
      CHECK(got == doctest::Approx(want).epsilon(1e-10));
    }
  }
}

TEST_CASE("invalid orders and intervals are rejected") {
  CHECK_THROWS_AS(gauss_legendre(0, Interval(0.0, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(Interval(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Interval(0.0, std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("integrate_1d basics") {
  const QuadratureRule r64 = gauss_legendre(64, Interval(0.0, 1.0));
  CHECK(integrate_1d([](double) { return 1.0; }, r64) == doctest::Approx(1.0).epsilon(1e-14));
  const QuadratureRule r3 = gauss_legendre(3, Interval(0.0, 1.0));
  CHECK(integrate_1d([](double x) { return x; }, r3) == doctest::Approx(0.5).epsilon(1e-14));
  // Kinked integrand: closed-form value 0.455, only 1e-3 is expected here.
  const double v = integrate_1d([](double x) { return std::min(x, 0.7); }, r64);
  CHECK(std::abs(v - 0.455) < 1e-3);
}

TEST_CASE("tensor_rule over the empty subset is the empty product") {
  const ProductMeasure pm = ProductMeasure::uniform_unit(3, 8);
  const TensorRule tr = tensor_rule(pm, SubsetMask::empty_set());
  REQUIRE(tr.size() == 1);
  CHECK(tr.active.empty());
  CHECK(tr.weights[0] == 1.0);
}

TEST_CASE("tensor_rule d=2 with 2-point rules") {
  const ProductMeasure pm = ProductMeasure::uniform_unit(2, 2);
  const TensorRule tr = tensor_rule(pm, SubsetMask::full_set(2));
  REQUIRE(tr.size() == 4);
  for (std::size_t g = 0; g < 4; ++g) CHECK(tr.weights[g] == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("tensor_rule spans exactly the requested coordinates") {
  const ProductMeasure pm = ProductMeasure::uniform_unit(3, 4);
  const TensorRule tr = tensor_rule(pm, SubsetMask::from_indices({0, 2}));
  CHECK(tr.size() == 16);
  REQUIRE(tr.active.size() == 2);
  CHECK(tr.active[0] == 0);
  CHECK(tr.active[1] == 2);
  double sum = 0.0;
  for (std::size_t g = 0; g < tr.size(); ++g) sum += tr.weights[g];
  CHECK(std::abs(sum - 1.0) < 1e-10);
}

TEST_CASE("tensor_rule enforces the node budget and names the subset size") {
  const ProductMeasure pm = ProductMeasure::uniform_unit(4, 64);
  try {
    tensor_rule(pm, SubsetMask::full_set(4));
    FAIL("expected resource_limit_error");
  } catch (const resource_limit_error& e) {
    CHECK(std::string(e.what()).find("size 4") != std::string::npos);
  }
}

TEST_CASE("iterated integration matches the tensor grid in any order") {
  auto f = [](double x, double y, double z) { return std::exp(x + y * z); };
  const ProductMeasure pm = ProductMeasure::uniform_unit(3, 16);
  const TensorRule tr = tensor_rule(pm, SubsetMask::full_set(3));
  double tensor_value = 0.0;
  for (std::size_t g = 0; g < tr.size(); ++g) {
    const double* n = tr.node(g);
    tensor_value += tr.weights[g] * f(n[0], n[1], n[2]);
  }
  const QuadratureRule r = gauss_legendre(16, Interval(0.0, 1.0));
  const double nested_xyz = integrate_1d(
      [&](double x) {
        return integrate_1d(
            [&](double y) { return integrate_1d([&](double z) { return f(x, y, z); }, r); }, r);
      },
      r);
  const double nested_zyx = integrate_1d(
      [&](double z) {
        return integrate_1d(
            [&](double y) { return integrate_1d([&](double x) { return f(x, y, z); }, r); }, r);
      },
      r);
  CHECK(std::abs(tensor_value - nested_xyz) < 1e-12);
  CHECK(std::abs(tensor_value - nested_zyx) < 1e-12);
}
