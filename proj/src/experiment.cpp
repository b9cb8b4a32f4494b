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
#include "kanova/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "kanova/csv.hpp"
#include "kanova/version.hpp"

namespace kanova {

double criterion_c(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat) {
  if (y.size() != yhat.size() || y.size() < 1)
    throw std::invalid_argument("criterion_c: vectors must have equal length >= 1");
  const double denom = y.squaredNorm();
  if (denom <= 1e-14) throw degenerate_error("criterion_c: test values are all zero");
  return 1.0 - (y - yhat).squaredNorm() / denom;
}

void ExperimentConfig::validate() const {
  if (d < 1) throw std::invalid_argument("experiment: d must be >= 1");
  if (n_train < 2 || n_test < 2)
    throw std::invalid_argument("experiment: n_train and n_test must be >= 2");
  if (n_reps < 1) throw std::invalid_argument("experiment: n_reps must be >= 1");
  if (!(theta > 0.0)) throw std::invalid_argument("experiment: theta must be > 0");
  if (quadrature_order < 1) throw std::invalid_argument("experiment: quadrature_order must be >= 1");
  if (maximin_iters < 0) throw std::invalid_argument("experiment: maximin_iters must be >= 0");
  if (sim_kernels.empty() || pred_kernels.empty())
    throw std::invalid_argument("experiment: need at least one sim and one pred kernel");
  const auto& names = standard_family_names();
  for (const std::string& k : sim_kernels)
    if (std::find(names.begin(), names.end(), k) == names.end())
      throw std::invalid_argument("experiment: unknown kernel '" + k + "'");
  for (const std::string& k : pred_kernels)
    if (std::find(names.begin(), names.end(), k) == names.end())
      throw std::invalid_argument("experiment: unknown kernel '" + k + "'");
  const bool wants_sparse =
      std::find(sim_kernels.begin(), sim_kernels.end(), "k_sparse") != sim_kernels.end() ||
      std::find(pred_kernels.begin(), pred_kernels.end(), "k_sparse") != pred_kernels.end();
  if (wants_sparse && d < 5)
    throw std::invalid_argument("experiment: k_sparse requires d >= 5");
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.d = j.at("d").get<int>();
  if (j.contains("theta")) cfg.theta = j.at("theta").get<double>();
  cfg.sim_kernels = j.at("sim_kernels").get<std::vector<std::string>>();
  cfg.pred_kernels = j.at("pred_kernels").get<std::vector<std::string>>();
  if (j.contains("n_train")) cfg.n_train = j.at("n_train").get<int>();
  if (j.contains("n_test")) cfg.n_test = j.at("n_test").get<int>();
  if (j.contains("n_reps")) cfg.n_reps = j.at("n_reps").get<int>();
  if (j.contains("base_seed")) cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("tau2_policy")) {
    const auto& p = j.at("tau2_policy");
    if (p.is_string() && p.get<std::string>() == "auto") {
      cfg.tau2_policy = Tau2Policy::auto_policy();
    } else if (p.is_object() && p.contains("fixed")) {
      cfg.tau2_policy = Tau2Policy::fixed(p.at("fixed").get<double>());
    } else {
      throw std::invalid_argument("experiment: tau2_policy must be \"auto\" or {\"fixed\": v}");
    }
  }
  if (j.contains("quadrature_order")) cfg.quadrature_order = j.at("quadrature_order").get<int>();
  if (j.contains("maximin_iters")) cfg.maximin_iters = j.at("maximin_iters").get<int>();
  cfg.validate();
  return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["d"] = d;
  j["theta"] = theta;
  j["sim_kernels"] = sim_kernels;
  j["pred_kernels"] = pred_kernels;
  j["n_train"] = n_train;
  j["n_test"] = n_test;
  j["n_reps"] = n_reps;
  j["base_seed"] = base_seed;
  if (tau2_policy.automatic)
    j["tau2_policy"] = "auto";
  else
    j["tau2_policy"] = nlohmann::json{{"fixed", tau2_policy.fixed_value}};
  j["quadrature_order"] = quadrature_order;
  j["maximin_iters"] = maximin_iters;
  return j;
}

ExperimentConfig ExperimentConfig::paper_scale() const {
  ExperimentConfig cfg = *this;
  cfg.d = 30;
  cfg.n_train = 500;
  cfg.n_test = 200;
  cfg.n_reps = 200;
  return cfg;
}

std::string ResultTable::results_csv() const {
  std::ostringstream out;
  out << "sim";
  for (const std::string& p : pred_names) out << "," << p;
  out << "\n";
  char buf[32];
  for (std::size_t s = 0; s < sim_names.size(); ++s) {
    out << sim_names[s];
    for (std::size_t p = 0; p < pred_names.size(); ++p) {
      std::snprintf(buf, sizeof(buf), "%.4f",
                    mean_c(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(p)));
      out << "," << buf;
    }
    out << "\n";
  }
  return out.str();
}

std::string ResultTable::per_rep_csv() const {
  std::ostringstream out;
  out << "sim,pred,rep,C\n";
  for (const CellRecord& r : per_rep) {
    out << sim_names[static_cast<std::size_t>(r.sim)] << ","
        << pred_names[static_cast<std::size_t>(r.pred)] << "," << r.rep << ","
        << (r.failed ? "nan" : format_g17(r.c)) << "\n";
  }
  return out.str();
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const int d = cfg.d;

  auto base = std::make_shared<const ProductKernel>(
      ProductKernel::iso(Kernel1D::gaussian(cfg.theta), d, cfg.quadrature_order));

  std::vector<DecomposedKernel> sims, preds;
  for (const std::string& name : cfg.sim_kernels)
    sims.emplace_back(base, ProjectorSpec::family(name));
  for (const std::string& name : cfg.pred_kernels)
    preds.emplace_back(base, ProjectorSpec::family(name));

  const int n_sims = static_cast<int>(sims.size());
  const int n_preds = static_cast<int>(preds.size());

  // Noise levels are replication-independent: resolve once per (sim, pred).
  Eigen::MatrixXd tau2(n_sims, n_preds), tau2_raw(n_sims, n_preds);
  for (int s = 0; s < n_sims; ++s)
    for (int p = 0; p < n_preds; ++p) {
      tau2_raw(s, p) = cfg.tau2_policy.automatic
                           ? tau2_for_mismatch_raw(sims[static_cast<std::size_t>(s)],
                                                   preds[static_cast<std::size_t>(p)])
                           : cfg.tau2_policy.fixed_value;
      tau2(s, p) = cfg.tau2_policy.automatic
                       ? std::max(tau2_raw(s, p), 1e-8)
                       : cfg.tau2_policy.fixed_value;
    }

  ResultTable table;
  table.sim_names = cfg.sim_kernels;
  table.pred_names = cfg.pred_kernels;
  table.per_rep.reserve(static_cast<std::size_t>(n_sims * n_preds * cfg.n_reps));

  nlohmann::json sim_jitters = nlohmann::json::array();
  double max_fit_jitter = 0.0;

  for (int rep = 0; rep < cfg.n_reps; ++rep) {
    const std::uint64_t rep_seed = cfg.base_seed + static_cast<std::uint64_t>(rep);
    const DesignMatrix train =
        lhs_maximin(cfg.n_train, d, mix_seed(rep_seed, 1, 0), cfg.maximin_iters);
    const DesignMatrix test =
        lhs_maximin(cfg.n_test, d, mix_seed(rep_seed, 2, 0), cfg.maximin_iters);

    Eigen::MatrixXd joint(cfg.n_train + cfg.n_test, d);
    joint.topRows(cfg.n_train) = train.points;
    joint.bottomRows(cfg.n_test) = test.points;
    const DesignMatrix joint_design(joint);

    for (int s = 0; s < n_sims; ++s) {
      // One path per (sim, rep), drawn jointly on train+test and reused
      // across every prediction kernel.
      Eigen::VectorXd y_train, y_test;
      double sim_jitter = 0.0;
      bool sim_failed = false;
      std::string sim_error;
      try {
        const GramFactor factor =
            cholesky_jitter(gram(sims[static_cast<std::size_t>(s)], joint_design, joint_design));
        sim_jitter = factor.jitter_used;
        const Eigen::MatrixXd path = simulate_paths(factor, 1, mix_seed(rep_seed, 3, s));
        y_train = path.row(0).head(cfg.n_train).transpose();
        y_test = path.row(0).tail(cfg.n_test).transpose();
      } catch (const std::exception& e) {
        sim_failed = true;
        sim_error = e.what();
      }
      sim_jitters.push_back({{"rep", rep}, {"sim", cfg.sim_kernels[static_cast<std::size_t>(s)]},
                             {"jitter", sim_jitter}, {"failed", sim_failed}});

      for (int p = 0; p < n_preds; ++p) {
        CellRecord cell;
        cell.sim = s;
        cell.pred = p;
        cell.rep = rep;
        cell.tau2 = tau2(s, p);
        if (sim_failed) {
          cell.failed = true;
          cell.error = "simulation: " + sim_error;
          table.per_rep.push_back(cell);
          continue;
        }
        try {
          GrfModel model(preds[static_cast<std::size_t>(p)], train, y_train, tau2(s, p));
          cell.fit_jitter = model.jitter_used();
          max_fit_jitter = std::max(max_fit_jitter, cell.fit_jitter);
          const PredictionResult pr = krige_predict(model, test);
          cell.c = criterion_c(y_test, pr.mean);
        } catch (const std::exception& e) {
          cell.failed = true;
          cell.error = e.what();
        }
        table.per_rep.push_back(cell);
      }
    }
  }

  // Exact means over the recorded replications.
  table.mean_c.resize(n_sims, n_preds);
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n_sims, n_preds);
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(n_sims, n_preds);
  for (const CellRecord& r : table.per_rep) {
    if (r.failed) continue;
    sums(r.sim, r.pred) += r.c;
    counts(r.sim, r.pred) += 1.0;
  }
  for (int s = 0; s < n_sims; ++s)
    for (int p = 0; p < n_preds; ++p)
      table.mean_c(s, p) =
          counts(s, p) > 0.0 ? sums(s, p) / counts(s, p) : std::nan("");

  nlohmann::json tau2_json = nlohmann::json::array();
  for (int s = 0; s < n_sims; ++s)
    for (int p = 0; p < n_preds; ++p)
      tau2_json.push_back({{"sim", cfg.sim_kernels[static_cast<std::size_t>(s)]},
                           {"pred", cfg.pred_kernels[static_cast<std::size_t>(p)]},
                           {"tau2", tau2(s, p)},
                           {"tau2_raw", tau2_raw(s, p)}});

  table.metadata = nlohmann::json{
      {"config", cfg.to_json()},
      {"seed_derivation",
       "rep_seed = base_seed + rep; train = mix(rep_seed,1,0); test = mix(rep_seed,2,0); "
       "path(sim i) = mix(rep_seed,3,i); mix is a splitmix64-style hash"},
      {"tau2", tau2_json},
      {"sim_jitters", sim_jitters},
      {"max_fit_jitter", max_fit_jitter},
      {"version", std::string(kVersion)},
  };
  return table;
}

}  // namespace kanova
