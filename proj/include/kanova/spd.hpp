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

#include <cstdint>

#include "kanova/generic_terms.hpp"
#include "kanova/quadrature.hpp"

namespace kanova {

struct SpdReport {
  double min_eigenvalue = 0.0;
  double tolerance = 0.0;  // the applied threshold -tol*n
  int n = 0;
  bool pass = false;
};

/// Assembles the Gram matrix of `kernel` at n uniform random points in the
/// box and reports its smallest eigenvalue; passes iff it is >= -tol*n.
SpdReport check_spd(const KernelFn& kernel, int n, const ProductMeasure& box,
                    std::uint64_t seed, double tol = 1e-8);

}  // namespace kanova
