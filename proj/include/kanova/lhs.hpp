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

#include "kanova/grf.hpp"

namespace kanova {

/// Latin hypercube design on (0,1)^d, optimized for the maximin criterion by
/// random within-column swaps accepted when the minimum pairwise distance
/// does not decrease. Each 1-D projection hits each of the n equal bins
/// exactly once; deterministic given the seed.
DesignMatrix lhs_maximin(int n, int d, std::uint64_t seed, int iters);

/// Minimum pairwise Euclidean distance of a design.
double min_pairwise_distance(const DesignMatrix& design);

}  // namespace kanova
