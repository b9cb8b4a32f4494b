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
#include <json.hpp>
#include <string>
#include <vector>

#include "kanova/grf.hpp"
#include "kanova/lhs.hpp"

namespace kanova {

/// Prediction-accuracy criterion 1 - sum (y - yhat)^2 / sum y^2: 1 for a
/// perfect fit, 0 for a predictor as bad as the null function.
double criterion_c(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat);

struct Tau2Policy {
  bool automatic = true;
  double fixed_value = 0.0;

  static Tau2Policy auto_policy() { return {true, 0.0}; }
  static Tau2Policy fixed(double v) { return {false, v}; }
};

/// Configuration of the cross-prediction experiment: fields simulated under
/// each sim kernel are predicted with every pred kernel, over seeded
/// Latin-hypercube designs.
struct ExperimentConfig {
  int d = 8;
  double theta = 0.70710678118654752;  // per-coordinate length-scale
  std::vector<std::string> sim_kernels;
  std::vector<std::string> pred_kernels;
  int n_train = 150;
  int n_test = 100;
  int n_reps = 20;
  std::uint64_t base_seed = 20260101;
  Tau2Policy tau2_policy;
  int quadrature_order = 64;
  int maximin_iters = 2000;

  void validate() const;

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  /// The published large-scale setting (d=30, 500/200, 200 reps).
  ExperimentConfig paper_scale() const;
};

struct CellRecord {
  int sim = 0, pred = 0, rep = 0;
  double c = 0.0;
  double tau2 = 0.0;
  double fit_jitter = 0.0;
  bool failed = false;
  std::string error;
};

struct ResultTable {
  std::vector<std::string> sim_names, pred_names;
  Eigen::MatrixXd mean_c;              // sims x preds, mean over replications
  std::vector<CellRecord> per_rep;     // long format, deterministic order
  nlohmann::json metadata;

  std::string results_csv() const;     // table layout, 4 decimals
  std::string per_rep_csv() const;     // sim,pred,rep,C
};

ResultTable run_experiment(const ExperimentConfig& cfg);

}  // namespace kanova
