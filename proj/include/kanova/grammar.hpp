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

#include <string>

#include "kanova/kernels.hpp"
#include "kanova/projector.hpp"

namespace kanova {

/// Parses a 1-D kernel specification:
///   exponential{theta=1}  matern{p=1,theta=0.5}  gaussian{theta=0.7071}  brownian
Kernel1D parse_kernel(const std::string& text, Interval domain = Interval(0.0, 1.0));

/// Parses a projector specification with 1-based coordinate labels:
///   simple:[1,3]  full:[[],[1],[2]]  star:[[1],[2,3]]  family:k_inter
ProjectorSpec parse_projector(const std::string& text);

}  // namespace kanova
