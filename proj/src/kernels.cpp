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
#include "kanova/kernels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace kanova {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

std::vector<double> matern_coefficients(int p) {
  if (p < 0) throw std::invalid_argument("matern_coefficients: p must be >= 0");
  if (p > 8) throw std::invalid_argument("matern_coefficients: p > 8 not supported");
  std::vector<double> c(static_cast<std::size_t>(p) + 1);
  const double scale = std::pow(2.0, p);  // normalization making c_{p,p} = 1
  for (int l = 0; l <= p; ++l) {
    double sum = 0.0;
    for (int i = 0; i <= p - l; ++i) sum += factorial(p + i) / factorial(i) * std::pow(2.0, p - i);
    c[static_cast<std::size_t>(l)] = sum / (factorial(l) * scale);
  }
  return c;
}

Kernel1D::Kernel1D(KernelFamily family, int p, double theta, Interval domain)
    : family_(family), matern_p_(p), theta_(theta), domain_(domain) {
  if (family_ == KernelFamily::matern) {
    // Polynomial in u = |x-y|/zeta from the half-integer Matern form:
    // k = p!/(2p)! * sum_i (p+i)!/(i!(p-i)!) (2u)^{p-i} e^{-u}.
    poly_.assign(static_cast<std::size_t>(p) + 1, 0.0);
    const double lead = factorial(p) / factorial(2 * p);
    for (int i = 0; i <= p; ++i) {
      const int m = p - i;  // power of u
      const double a = factorial(p + i) / (factorial(i) * factorial(p - i));
      poly_[static_cast<std::size_t>(m)] = lead * a * std::pow(2.0, m);
    }
  }
}

Kernel1D Kernel1D::exponential(double theta, Interval domain) {
  if (!(theta > 0.0)) throw std::invalid_argument("exponential kernel: theta must be > 0");
  return Kernel1D(KernelFamily::exponential, 0, theta, domain);
}

Kernel1D Kernel1D::matern(int p, double theta, Interval domain) {
  if (!(theta > 0.0)) throw std::invalid_argument("matern kernel: theta must be > 0");
  if (p < 0 || p > 8) throw std::invalid_argument("matern kernel: p must be in 0..8");
  return Kernel1D(KernelFamily::matern, p, theta, domain);
}

Kernel1D Kernel1D::gaussian(double theta, Interval domain) {
  if (!(theta > 0.0)) throw std::invalid_argument("gaussian kernel: theta must be > 0");
  return Kernel1D(KernelFamily::gaussian, 0, theta, domain);
}

Kernel1D Kernel1D::brownian() {
  return Kernel1D(KernelFamily::brownian, 0, 1.0, Interval(0.0, 1.0));
}

double Kernel1D::eval_unchecked(double x, double y) const {
  switch (family_) {
    case KernelFamily::exponential:
      return std::exp(-std::abs(x - y) / theta_);
    case KernelFamily::gaussian: {
      const double r = (x - y) / theta_;
      return std::exp(-0.5 * r * r);
    }
    case KernelFamily::brownian:
      return std::min(x, y);
    case KernelFamily::matern: {
      const double zeta = theta_ / std::sqrt(2.0 * matern_p_ + 1.0);
      const double u = std::abs(x - y) / zeta;
      double poly = 0.0;
      for (std::size_t m = poly_.size(); m-- > 0;) poly = poly * u + poly_[m];
      return poly * std::exp(-u);
    }
  }
  return 0.0;  // unreachable
}

double Kernel1D::operator()(double x, double y) const {
  if (!domain_.contains(x) || !domain_.contains(y))
    throw std::invalid_argument("Kernel1D: argument outside domain " + to_string());
  return eval_unchecked(x, y);
}

std::string Kernel1D::to_string() const {
  std::ostringstream os;
  switch (family_) {
    case KernelFamily::exponential: os << "exponential{theta=" << theta_ << "}"; break;
    case KernelFamily::matern: os << "matern{p=" << matern_p_ << ",theta=" << theta_ << "}"; break;
    case KernelFamily::gaussian: os << "gaussian{theta=" << theta_ << "}"; break;
    case KernelFamily::brownian: os << "brownian"; break;
  }
  return os.str();
}

KernelIntegrals::KernelIntegrals(const Kernel1D& kernel)
    : kernel_(kernel), scaled_theta_(0.0), double_integral_(0.0), diagonal_mean_(1.0),
      source_(IntegralSource::closed_form) {
  const double len = kernel.domain().length();
  const int p = kernel.matern_p();
  switch (kernel.family()) {
    case KernelFamily::exponential: {
      const double th = kernel.theta() / len;
      scaled_theta_ = th;
      double_integral_ = 2.0 * th * (1.0 - th + th * std::exp(-1.0 / th));
      break;
    }
    case KernelFamily::gaussian: {
      const double th = kernel.theta() / len;
      scaled_theta_ = th;
      double_integral_ = 2.0 * th * th * (std::exp(-0.5 / (th * th)) - 1.0) +
                         th * kSqrt2Pi * (2.0 * normal_cdf(1.0 / th) - 1.0);
      break;
    }
    case KernelFamily::brownian:
      scaled_theta_ = 1.0;
      double_integral_ = 1.0 / 3.0;
      diagonal_mean_ = 0.5;
      break;
    case KernelFamily::matern: {
      const double zeta = kernel.theta() / len / std::sqrt(2.0 * p + 1.0);
      scaled_theta_ = zeta;
      coeffs_ = matern_coefficients(p);
      prefactor_ = factorial(p) * std::pow(2.0, p) / factorial(2 * p);
      if (p == 0) {
        double_integral_ = 2.0 * zeta * (1.0 - zeta + zeta * std::exp(-1.0 / zeta));
      } else if (p == 1) {
        double_integral_ =
            2.0 * zeta * (2.0 - 3.0 * zeta + (1.0 + 3.0 * zeta) * std::exp(-1.0 / zeta));
      } else if (p == 2) {
        double_integral_ = zeta * (16.0 - 30.0 * zeta) / 3.0 +
                           2.0 / 3.0 * (1.0 + 7.0 * zeta + 15.0 * zeta * zeta) *
                               std::exp(-1.0 / zeta);
      } else {
        // No general-p closed form for the double integral; integrate the
        // (closed-form, smooth) embedding with a 64-node rule instead.
        source_ = IntegralSource::quadrature_fallback;
        const QuadratureRule rule = gauss_legendre(64, kernel.domain());
        double acc = 0.0;
        for (std::size_t j = 0; j < rule.size(); ++j)
          acc += rule.weights[j] * mean_embedding(rule.nodes[j]);
        double_integral_ = acc;
      }
      break;
    }
  }
}

double KernelIntegrals::mean_embedding(double t) const {
  const Interval& dom = kernel_.domain();
  if (!dom.contains(t))
    throw std::invalid_argument("mean_embedding: argument outside domain");
  const double tt = (t - dom.lower) / dom.length();  // position on the unit interval
  switch (kernel_.family()) {
    case KernelFamily::exponential: {
      const double th = scaled_theta_;
      return th * (2.0 - std::exp(-tt / th) - std::exp(-(1.0 - tt) / th));
    }
    case KernelFamily::gaussian: {
      const double th = scaled_theta_;
      return th * kSqrt2Pi * (normal_cdf((1.0 - tt) / th) + normal_cdf(tt / th) - 1.0);
    }
    case KernelFamily::brownian:
      return tt - 0.5 * tt * tt;
    case KernelFamily::matern: {
      const double zeta = scaled_theta_;
      auto a_p = [this](double u) {
        double poly = 0.0;
        for (std::size_t m = coeffs_.size(); m-- > 0;) poly = poly * u + coeffs_[m];
        return poly * std::exp(-u);
      };
      return zeta * prefactor_ * (2.0 * coeffs_[0] - a_p(tt / zeta) - a_p((1.0 - tt) / zeta));
    }
  }
  return 0.0;  // unreachable
}

}  // namespace kanova
