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
#include "kanova/grammar.hpp"

#include <json.hpp>
#include <map>
#include <stdexcept>

namespace kanova {

namespace {

std::map<std::string, double> parse_params(const std::string& body, const std::string& what) {
  // body is the text between braces: "theta=1" or "p=1,theta=0.5".
  std::map<std::string, double> params;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t comma = body.find(',', pos);
    if (comma == std::string::npos) comma = body.size();
    const std::string item = body.substr(pos, comma - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(what + ": expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    std::size_t used = 0;
    const double value = std::stod(item.substr(eq + 1), &used);
    if (used != item.size() - eq - 1)
      throw std::invalid_argument(what + ": bad numeric value in '" + item + "'");
    params[key] = value;
    pos = comma + 1;
  }
  return params;
}

SubsetMask subset_from_json(const nlohmann::json& arr) {
  if (!arr.is_array()) throw std::invalid_argument("projector: subsets must be arrays");
  std::vector<int> idx;
  for (const auto& e : arr) {
    const int coord = e.get<int>();
    if (coord < 1 || coord > 60)
      throw std::invalid_argument("projector: coordinates are 1-based, up to 60");
    idx.push_back(coord - 1);
  }
  return SubsetMask::from_indices(idx);
}

}  // namespace

Kernel1D parse_kernel(const std::string& text, Interval domain) {
  const std::size_t brace = text.find('{');
  std::string name = brace == std::string::npos ? text : text.substr(0, brace);
  std::map<std::string, double> params;
  if (brace != std::string::npos) {
    if (text.back() != '}')
      throw std::invalid_argument("kernel spec '" + text + "': missing closing brace");
    params = parse_params(text.substr(brace + 1, text.size() - brace - 2), "kernel spec");
  }
  auto need = [&](const char* key) {
    auto it = params.find(key);
    if (it == params.end())
      throw std::invalid_argument("kernel spec '" + text + "': missing parameter " + key);
    return it->second;
  };
  if (name == "exponential") return Kernel1D::exponential(need("theta"), domain);
  if (name == "gaussian") return Kernel1D::gaussian(need("theta"), domain);
  if (name == "matern")
    return Kernel1D::matern(static_cast<int>(need("p")), need("theta"), domain);
  if (name == "brownian") {
    if (!(domain == Interval(0.0, 1.0)))
      throw std::invalid_argument("brownian kernel: domain must be [0,1]");
    return Kernel1D::brownian();
  }
  throw std::invalid_argument("unknown kernel family '" + name + "'");
}

ProjectorSpec parse_projector(const std::string& text) {
  const std::size_t colon = text.find(':');
  const std::string head = colon == std::string::npos ? text : text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);

  if (head == "family") return ProjectorSpec::family(rest);
  if (head == "simple") {
    const nlohmann::json arr = nlohmann::json::parse(rest);
    return ProjectorSpec::simple(subset_from_json(arr));
  }
  if (head == "full" || head == "star") {
    const nlohmann::json arr = nlohmann::json::parse(rest);
    if (!arr.is_array()) throw std::invalid_argument("projector: expected a list of subsets");
    std::vector<SubsetMask> collection;
    for (const auto& e : arr) collection.push_back(subset_from_json(e));
    return head == "full" ? ProjectorSpec::full(std::move(collection))
                          : ProjectorSpec::star(std::move(collection));
  }
  if (head == "weighted") {
    // weighted:[[[1],0.5],[[2],1.0]] : list of [subset, weight] pairs.
    const nlohmann::json arr = nlohmann::json::parse(rest);
    std::map<SubsetMask, double> alpha;
    for (const auto& e : arr) {
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument("projector: weighted entries are [subset, weight] pairs");
      alpha[subset_from_json(e[0])] = e[1].get<double>();
    }
    return ProjectorSpec::weighted(std::move(alpha));
  }
  throw std::invalid_argument("unknown projector mode '" + head + "'");
}

}  // namespace kanova
