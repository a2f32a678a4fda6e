/*
 * Copyright 2026 The qinet Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// qinet command-line tool.
//
//   qinet simulate   --config C [--seed S] [--out DIR]
//   qinet qini       --config C --dataset D [--scores F] [--epsilon E] [--out DIR]
//   qinet experiment --config C [--seed S] [--workers N] [--out DIR] [--keep-going]
//   qinet report     --curves PATH [--out DIR]
//
// Exit status: 0 on success, 1 on invalid input, 2 on runtime failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qinet/qinet.h"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct Failure {
  qinet_status status;
};

void Check(qinet_status status) {
  if (status != QINET_OK) throw Failure{status};
}

int ExitCode(qinet_status status) {
  return status == QINET_ERR_INVALID_ARGUMENT || status == QINET_ERR_VALIDATION
             ? kExitValidation
             : kExitRuntime;
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using ConfigPtr = std::unique_ptr<qinet_config, Deleter<qinet_config, qinet_config_destroy>>;
using DatasetPtr = std::unique_ptr<qinet_dataset, Deleter<qinet_dataset, qinet_dataset_destroy>>;
using SamplePtr = std::unique_ptr<qinet_sample, Deleter<qinet_sample, qinet_sample_destroy>>;
using CurvePtr = std::unique_ptr<qinet_curve, Deleter<qinet_curve, qinet_curve_destroy>>;

ConfigPtr LoadConfig(const std::string& path, const std::optional<std::uint64_t>& seed) {
  qinet_config* raw = nullptr;
  Check(qinet_config_load(path.c_str(), &raw));
  ConfigPtr config(raw);
  if (seed) Check(qinet_config_set_seed(config.get(), *seed));
  return config;
}

void PrintFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (in) std::cout << in.rdbuf();
}

// One score per line, or a single-column CSV with a header.
std::vector<double> ReadScores(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "qinet: cannot open scores file '" << path << "'\n";
    throw Failure{QINET_ERR_IO};
  }
  std::vector<double> scores;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      std::size_t used = 0;
      const double value = std::stod(line, &used);
      if (used != line.size()) throw std::invalid_argument(line);
      scores.push_back(value);
    } catch (const std::exception&) {
      if (number == 1) continue;  // header
      std::cerr << "qinet: " << path << ":" << number << ": not a number: " << line << '\n';
      throw Failure{QINET_ERR_VALIDATION};
    }
  }
  return scores;
}

int RunSimulate(const std::string& config_path, const std::optional<std::uint64_t>& seed,
                const std::string& out) {
  auto config = LoadConfig(config_path, seed);
  qinet_sample* raw = nullptr;
  Check(qinet_simulate(config.get(), &raw));
  SamplePtr sample(raw);
  std::filesystem::create_directories(out);
  const auto path = (std::filesystem::path(out) / "dataset.csv").string();
  Check(qinet_dataset_write_csv(qinet_sample_dataset(sample.get()), path.c_str()));
  std::cout << path << '\n';
  return 0;
}

int RunQini(const std::string& config_path, const std::optional<std::uint64_t>& seed,
            const std::string& dataset_path, const std::string& scores_path, double epsilon,
            bool estimated_cost, const std::string& out) {
  auto config = LoadConfig(config_path, seed);
  qinet_dataset* raw = nullptr;
  Check(qinet_dataset_read_csv(dataset_path.c_str(), &raw));
  DatasetPtr dataset(raw);
  const std::size_t units = qinet_dataset_num_units(dataset.get());
  const std::uint64_t run_seed = qinet_config_seed(config.get());

  std::vector<double> scores;
  if (scores_path.empty()) {
    scores.resize(units);
    Check(qinet_baseline_scores(config.get(), dataset.get(), epsilon, run_seed, scores.data(),
                                scores.size()));
  } else {
    scores = ReadScores(scores_path);
  }

  qinet_qini_options options = qinet_qini_options_default();
  options.grid_size = qinet_config_grid_size(config.get());
  options.treat_prob = qinet_config_treat_prob(config.get());
  options.tie_seed = run_seed;
  options.crossfit_seed = run_seed;
  options.uniform_cost = estimated_cost ? 0 : 1;

  std::vector<CurvePtr> curves;
  std::vector<const qinet_curve*> views;
  for (std::size_t e = 0; e < qinet_config_num_estimators(config.get()); ++e) {
    qinet_curve* curve = nullptr;
    Check(qinet_estimate_curve(dataset.get(), scores.data(), scores.size(), &options,
                               qinet_config_estimator(config.get(), e), &curve));
    curves.emplace_back(curve);
    views.push_back(curve);
  }
  std::filesystem::create_directories(out);
  const auto path = (std::filesystem::path(out) / "curves.csv").string();
  Check(qinet_curves_write_csv(views.data(), views.size(), dataset.get(), nullptr, epsilon,
                               run_seed, 0, path.c_str()));
  std::cout << "estimator_id,auc\n";
  for (const auto* curve : views) {
    double auc = 0.0;
    Check(qinet_curve_auc(curve, &auc));
    std::ostringstream line;
    line.precision(17);
    line << qinet_curve_estimator_id(curve) << ',' << auc;
    std::cout << line.str() << '\n';
  }
  return 0;
}

int RunExperimentCommand(const std::string& config_path,
                         const std::optional<std::uint64_t>& seed,
                         const std::optional<std::size_t>& workers, const std::string& out,
                         bool keep_going, bool per_curve, bool quiet) {
  auto config = LoadConfig(config_path, seed);
  if (workers) Check(qinet_config_set_workers(config.get(), *workers));
  if (!out.empty()) Check(qinet_config_set_output(config.get(), out.c_str()));
  if (per_curve) Check(qinet_config_set_per_curve_files(config.get(), 1));
  qinet_run_options options{keep_going ? 1 : 0, quiet ? 0 : 1};
  std::size_t failures = 0;
  const qinet_status status = qinet_experiment_run(config.get(), &options, &failures);
  if (status != QINET_OK) throw Failure{status};
  if (failures > 0) {
    std::cerr << "qinet: " << failures << " repetition(s) failed (kept going)\n";
  }
  return 0;
}

int RunReport(const std::string& curves, const std::string& out) {
  Check(qinet_report(curves.c_str(), out.c_str()));
  PrintFile(std::filesystem::path(out) / "report.txt");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qini curve estimation under clustered network interference"};
  app.set_version_flag("--version", std::string(qinet_version()));
  app.require_subcommand(1);

  std::string config_path, out, dataset_path, scores_path, curves_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  double epsilon = 0.0;
  bool keep_going = false, per_curve = false, estimated_cost = false, quiet = false;

  auto* simulate = app.add_subcommand("simulate", "sample a marketplace dataset as CSV");
  simulate->add_option("--config", config_path, "experiment config")->required();
  simulate->add_option("--seed", seed, "master seed (overrides the config)");
  simulate->add_option("--out", out, "output directory")->default_val(".");

  auto* qini = app.add_subcommand("qini", "estimate Qini curves for a dataset and policy");
  qini->add_option("--config", config_path, "config: estimators, grid size, propensity")
      ->required();
  qini->add_option("--dataset", dataset_path, "dataset CSV")->required();
  qini->add_option("--scores", scores_path,
                   "per-unit policy scores; default is the baseline policy");
  qini->add_option("--epsilon", epsilon, "baseline perturbation in [0, 1]")->default_val(0.0);
  qini->add_option("--seed", seed, "tie-break and noise seed (overrides the config)");
  qini->add_flag("--estimated-cost", estimated_cost,
                 "budgets from estimated policy costs instead of uniform cost");
  qini->add_option("--out", out, "output directory")->default_val(".");

  auto* experiment = app.add_subcommand("experiment", "run a configured experiment");
  experiment->add_option("--config", config_path, "experiment config")->required();
  experiment->add_option("--seed", seed, "master seed (overrides the config)");
  experiment->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  experiment->add_option("--out", out, "output directory (overrides the config)");
  experiment->add_flag("--keep-going", keep_going, "succeed even if repetitions fail");
  experiment->add_flag("--per-curve-files", per_curve, "also write one CSV per curve under curves/");
  experiment->add_flag("--quiet", quiet, "no progress on standard error");

  auto* report = app.add_subcommand("report", "re-aggregate raw curve CSVs");
  report->add_option("--curves", curves_path, "curves.csv or a directory of curve CSVs")
      ->required();
  report->add_option("--out", out, "output directory")->default_val(".");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitValidation;
  }

  try {
    if (*simulate) return RunSimulate(config_path, seed, out);
    if (*qini) {
      return RunQini(config_path, seed, dataset_path, scores_path, epsilon, estimated_cost, out);
    }
    if (*experiment) {
      const int rc =
          RunExperimentCommand(config_path, seed, workers, out, keep_going, per_curve, quiet);
      return rc;
    }
    if (*report) return RunReport(curves_path, out);
  } catch (const Failure& f) {
    const char* message = qinet_last_error();
    std::cerr << "qinet: " << qinet_status_name(f.status);
    if (message != nullptr && *message != '\0') std::cerr << ": " << message;
    std::cerr << '\n';
    return ExitCode(f.status);
  } catch (const std::exception& e) {
    std::cerr << "qinet: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
