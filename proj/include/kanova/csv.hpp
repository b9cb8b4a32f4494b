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

#include <Eigen/Dense>
#include <optional>
#include <string>

namespace kanova {

/// Design points with optional observations, as read from CSV.
struct Dataset {
  Eigen::MatrixXd X;
  std::optional<Eigen::VectorXd> y;
};

/// Shortest round-trip decimal representation (17 significant digits).
std::string format_g17(double v);

/// Reads a design CSV with header `x1,...,xd[,y]` (decimal point, LF).
Dataset read_design_csv(const std::string& path);
Dataset parse_design_csv(const std::string& content);

/// Writes a design CSV with the standard header; values at 17 significant
/// digits, LF line endings.
std::string design_csv_string(const Eigen::MatrixXd& X,
                              const std::optional<Eigen::VectorXd>& y = std::nullopt);
void write_design_csv(const std::string& path, const Eigen::MatrixXd& X,
                      const std::optional<Eigen::VectorXd>& y = std::nullopt);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace kanova
