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
#include "kanova/lhs.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace kanova {

double min_pairwise_distance(const DesignMatrix& design) {
  const int n = design.size();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d2 = (design.points.row(i) - design.points.row(j)).squaredNorm();
      best = std::min(best, d2);
    }
  return std::sqrt(best);
}

namespace {

double min_dist2(const Eigen::MatrixXd& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < pts.rows(); ++i)
    for (int j = i + 1; j < pts.rows(); ++j)
      best = std::min(best, (pts.row(i) - pts.row(j)).squaredNorm());
  return best;
}

}  // namespace

DesignMatrix lhs_maximin(int n, int d, std::uint64_t seed, int iters) {
  if (n < 2) throw std::invalid_argument("lhs_maximin: need n >= 2");
  if (d < 1) throw std::invalid_argument("lhs_maximin: need d >= 1");
  NormalSampler rng(seed);

  // Jittered Latin hypercube: one stratum per point in every column.
  Eigen::MatrixXd pts(n, d);
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int j = 0; j < d; ++j) {
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      const int k = static_cast<int>(rng.uniform() * (i + 1));
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(std::min(k, i))]);
    }
    for (int i = 0; i < n; ++i)
      pts(i, j) = (perm[static_cast<std::size_t>(i)] + rng.uniform() * (1.0 - 1e-12)) / n;
  }

  double current = min_dist2(pts);
  for (int it = 0; it < iters; ++it) {
    const int j = static_cast<int>(rng.uniform() * d) % d;
    const int r1 = static_cast<int>(rng.uniform() * n) % n;
    int r2 = static_cast<int>(rng.uniform() * n) % n;
    if (r1 == r2) r2 = (r2 + 1) % n;
    std::swap(pts(r1, j), pts(r2, j));
    const double candidate = min_dist2(pts);
    if (candidate >= current) {
      current = candidate;  // accept (never decreases the criterion)
    } else {
      std::swap(pts(r1, j), pts(r2, j));  // revert
    }
  }
  return DesignMatrix(pts);
}

}  // namespace kanova
