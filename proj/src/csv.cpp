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
#include "kanova/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace kanova {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

Dataset parse_design_csv(const std::string& content) {
  std::istringstream in(content);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("design CSV: empty file");
  const std::vector<std::string> header = split(line, ',');
  int d = 0;
  bool has_y = false;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "x" + std::to_string(c + 1)) {
      ++d;
    } else if (header[c] == "y" && c + 1 == header.size()) {
      has_y = true;
    } else {
      throw std::runtime_error("design CSV: expected header x1,...,xd[,y], got column '" +
                               header[c] + "'");
    }
  }
  if (d == 0) throw std::runtime_error("design CSV: no coordinate columns");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line, ',');
    if (static_cast<int>(cells.size()) != d + (has_y ? 1 : 0))
      throw std::runtime_error("design CSV: row with wrong column count");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const std::string& cell : cells) {
      std::size_t pos = 0;
      const double v = std::stod(cell, &pos);
      if (pos != cell.size()) throw std::runtime_error("design CSV: bad number '" + cell + "'");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("design CSV: no data rows");

  Dataset ds;
  ds.X.resize(static_cast<Eigen::Index>(rows.size()), d);
  if (has_y) ds.y = Eigen::VectorXd(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < d; ++j)
      ds.X(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    if (has_y) (*ds.y)(static_cast<Eigen::Index>(i)) = rows[i][static_cast<std::size_t>(d)];
  }
  return ds;
}

Dataset read_design_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_design_csv(buf.str());
}

std::string design_csv_string(const Eigen::MatrixXd& X, const std::optional<Eigen::VectorXd>& y) {
  std::ostringstream out;
  for (int j = 0; j < X.cols(); ++j) out << (j ? "," : "") << "x" << (j + 1);
  if (y) out << ",y";
  out << "\n";
  for (int i = 0; i < X.rows(); ++i) {
    for (int j = 0; j < X.cols(); ++j) out << (j ? "," : "") << format_g17(X(i, j));
    if (y) out << "," << format_g17((*y)(i));
    out << "\n";
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

void write_design_csv(const std::string& path, const Eigen::MatrixXd& X,
                      const std::optional<Eigen::VectorXd>& y) {
  write_text_file(path, design_csv_string(X, y));
}

}  // namespace kanova
