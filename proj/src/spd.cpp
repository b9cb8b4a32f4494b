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
#include "kanova/spd.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

#include "kanova/grf.hpp"

namespace kanova {

SpdReport check_spd(const KernelFn& kernel, int n, const ProductMeasure& box, std::uint64_t seed,
                    double tol) {
  if (n < 2) throw std::invalid_argument("check_spd: need n >= 2 points");
  const int d = box.dim();
  NormalSampler rng(seed);
  Eigen::MatrixXd pts(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) {
      const Interval& s = box.coordinate(j).support();
      pts(i, j) = s.lower + s.length() * rng.uniform();
    }
  const Eigen::MatrixXd K = gram(kernel, DesignMatrix(pts), DesignMatrix(pts));
  const Eigen::MatrixXd sym = 0.5 * (K + K.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);

  SpdReport report;
  report.n = n;
  report.min_eigenvalue = eig.eigenvalues().minCoeff();
  report.tolerance = tol * n;
  report.pass = report.min_eigenvalue >= -report.tolerance;
  return report;
}

}  // namespace kanova
