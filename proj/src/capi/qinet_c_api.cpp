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

#include "qinet/qinet.h"

#include <algorithm>
#include <iostream>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "core/dataset.hpp"
#include "core/dataset_csv.hpp"
#include "core/error.hpp"
#include "core/propensity.hpp"
#include "estimators/outcome_model.hpp"
#include "estimators/registry.hpp"
#include "experiment/config.hpp"
#include "experiment/curve_table.hpp"
#include "experiment/report.hpp"
#include "experiment/runner.hpp"
#include "qini/qini.hpp"
#include "simulator/ground_truth.hpp"
#include "simulator/marketplace.hpp"

struct qinet_config {
  qinet::ExperimentConfig config;
  std::vector<std::string> estimator_ids;
};

struct qinet_dataset {
  qinet::ClusterDataset dataset;
};

struct qinet_sample {
  qinet::sim::SimulatedSample sample;
  qinet_dataset dataset_view;
};

struct qinet_curve {
  qinet::QiniCurve curve;
};

namespace {

thread_local std::string last_error;

qinet_status ToStatus(qinet::ErrorCode code) {
  switch (code) {
    case qinet::ErrorCode::kInvalidArgument: return QINET_ERR_INVALID_ARGUMENT;
    case qinet::ErrorCode::kValidation: return QINET_ERR_VALIDATION;
    case qinet::ErrorCode::kIo: return QINET_ERR_IO;
    case qinet::ErrorCode::kNumeric: return QINET_ERR_NUMERIC;
    case qinet::ErrorCode::kRuntime: return QINET_ERR_RUNTIME;
  }
  return QINET_ERR_RUNTIME;
}

// Runs `body`, translating exceptions into a status plus last_error.
template <typename Body>
qinet_status Guard(Body&& body) {
  last_error.clear();
  try {
    body();
    return QINET_OK;
  } catch (const qinet::Error& e) {
    last_error = e.what();
    return ToStatus(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return QINET_ERR_RUNTIME;
  } catch (const std::exception& e) {
    last_error = e.what();
    return QINET_ERR_RUNTIME;
  } catch (...) {
    last_error = "unknown error";
    return QINET_ERR_RUNTIME;
  }
}

template <typename T>
void Require(const T* pointer, const char* name) {
  if (pointer == nullptr) qinet::ThrowInvalidArgument(fmt::format("{} is NULL", name));
}

void CheckCount(size_t count, size_t units) {
  if (count != units) {
    qinet::ThrowInvalidArgument(fmt::format("{} values for {} units", count, units));
  }
}

void RefreshIds(qinet_config& c) {
  c.estimator_ids.clear();
  for (const auto& e : c.config.estimators) c.estimator_ids.push_back(e.Id());
}

}  // namespace

extern "C" {

const char* qinet_version(void) { return QINET_VERSION_STRING; }

const char* qinet_last_error(void) { return last_error.c_str(); }

const char* qinet_status_name(qinet_status status) {
  switch (status) {
    case QINET_OK: return "ok";
    case QINET_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QINET_ERR_VALIDATION: return "validation error";
    case QINET_ERR_IO: return "i/o error";
    case QINET_ERR_NUMERIC: return "numeric error";
    case QINET_ERR_RUNTIME: return "runtime error";
  }
  return "unknown status";
}

qinet_status qinet_config_load(const char* path, qinet_config** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    auto handle = std::make_unique<qinet_config>();
    handle->config = qinet::ParseConfigFile(path);
    RefreshIds(*handle);
    *out = handle.release();
  });
}

qinet_status qinet_config_parse(const char* text, qinet_config** out) {
  return Guard([&] {
    Require(text, "text");
    Require(out, "out");
    auto handle = std::make_unique<qinet_config>();
    handle->config = qinet::ParseConfigString(text);
    RefreshIds(*handle);
    *out = handle.release();
  });
}

void qinet_config_destroy(qinet_config* config) { delete config; }

qinet_status qinet_config_set_seed(qinet_config* config, uint64_t seed) {
  return Guard([&] {
    Require(config, "config");
    config->config.seed = seed;
  });
}

qinet_status qinet_config_set_workers(qinet_config* config, size_t workers) {
  return Guard([&] {
    Require(config, "config");
    if (workers == 0) qinet::ThrowValidation("workers must be positive");
    config->config.workers = workers;
  });
}

qinet_status qinet_config_set_output(qinet_config* config, const char* dir) {
  return Guard([&] {
    Require(config, "config");
    Require(dir, "dir");
    config->config.output = dir;
  });
}

qinet_status qinet_config_set_per_curve_files(qinet_config* config, int enabled) {
  return Guard([&] {
    Require(config, "config");
    config->config.per_curve_files = enabled != 0;
  });
}

qinet_status qinet_config_hash(const qinet_config* config, uint64_t* out) {
  return Guard([&] {
    Require(config, "config");
    Require(out, "out");
    *out = config->config.Hash();
  });
}

uint64_t qinet_config_seed(const qinet_config* config) {
  return config == nullptr ? 0 : config->config.seed;
}

size_t qinet_config_grid_size(const qinet_config* config) {
  return config == nullptr ? 0 : config->config.grid_size;
}

double qinet_config_treat_prob(const qinet_config* config) {
  return config == nullptr ? 0.0 : config->config.simulator.treat_prob;
}

size_t qinet_config_num_estimators(const qinet_config* config) {
  return config == nullptr ? 0 : config->estimator_ids.size();
}

const char* qinet_config_estimator(const qinet_config* config, size_t index) {
  if (config == nullptr || index >= config->estimator_ids.size()) return nullptr;
  return config->estimator_ids[index].c_str();
}

qinet_status qinet_dataset_read_csv(const char* path, qinet_dataset** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new qinet_dataset{qinet::ReadDatasetCsv(std::filesystem::path(path))};
  });
}

qinet_status qinet_dataset_write_csv(const qinet_dataset* dataset, const char* path) {
  return Guard([&] {
    Require(dataset, "dataset");
    Require(path, "path");
    qinet::WriteDatasetCsv(dataset->dataset, std::filesystem::path(path));
  });
}

void qinet_dataset_destroy(qinet_dataset* dataset) { delete dataset; }

size_t qinet_dataset_num_clusters(const qinet_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->dataset.num_clusters();
}

size_t qinet_dataset_num_units(const qinet_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->dataset.num_units();
}

qinet_status qinet_simulate(const qinet_config* config, qinet_sample** out) {
  return Guard([&] {
    Require(config, "config");
    Require(out, "out");
    const auto params = qinet::LoadSimulatorParams(config->config);
    auto sample = qinet::sim::SampleDataset(params, qinet::RepetitionSeed(config->config.seed, 0));
    qinet_dataset view{sample.dataset};
    *out = new qinet_sample{std::move(sample), std::move(view)};
  });
}

void qinet_sample_destroy(qinet_sample* sample) { delete sample; }

const qinet_dataset* qinet_sample_dataset(const qinet_sample* sample) {
  return sample == nullptr ? nullptr : &sample->dataset_view;
}

qinet_status qinet_sample_baseline_scores(const qinet_sample* sample, double epsilon,
                                          uint64_t noise_seed, double* scores,
                                          size_t count) {
  return Guard([&] {
    Require(sample, "sample");
    Require(scores, "scores");
    CheckCount(count, sample->sample.dataset.num_units());
    const auto perturbed = qinet::sim::PerturbScores(
        qinet::sim::BaselineScores(sample->sample.truth), epsilon, noise_seed);
    std::copy(perturbed.begin(), perturbed.end(), scores);
  });
}

qinet_status qinet_baseline_scores(const qinet_config* config, const qinet_dataset* dataset,
                                   double epsilon, uint64_t noise_seed, double* scores,
                                   size_t count) {
  return Guard([&] {
    Require(config, "config");
    Require(dataset, "dataset");
    Require(scores, "scores");
    CheckCount(count, dataset->dataset.num_units());
    const auto params = qinet::LoadSimulatorParams(config->config);
    const auto perturbed = qinet::sim::PerturbScores(
        qinet::sim::BaselineScores(dataset->dataset, params), epsilon, noise_seed);
    std::copy(perturbed.begin(), perturbed.end(), scores);
  });
}

qinet_status qinet_sample_true_value(const qinet_sample* sample, const uint8_t* decisions,
                                     size_t count, double* out) {
  return Guard([&] {
    Require(sample, "sample");
    Require(decisions, "decisions");
    Require(out, "out");
    const auto& truth = sample->sample.truth;
    CheckCount(count, truth.layout()->num_units());
    const qinet::PolicyAssignment assignment(
        truth.layout(), std::vector<std::uint8_t>(decisions, decisions + count));
    *out = qinet::sim::TruePolicyValue(truth, assignment);
  });
}

qinet_status qinet_sample_true_curve(const qinet_sample* sample, const double* scores,
                                     size_t count, size_t grid_size, uint64_t tie_seed,
                                     qinet_curve** out) {
  return Guard([&] {
    Require(sample, "sample");
    Require(scores, "scores");
    Require(out, "out");
    CheckCount(count, sample->sample.dataset.num_units());
    *out = new qinet_curve{qinet::sim::TrueQiniCurve(sample->sample.truth, {scores, count},
                                                     grid_size, tie_seed)};
  });
}

qinet_qini_options qinet_qini_options_default(void) {
  qinet_qini_options options;
  options.grid_size = 10;
  options.treat_prob = 0.5;
  options.tie_seed = 0;
  options.max_budget = 1.0;
  options.uniform_cost = 1;
  options.folds = 2;
  options.crossfit_seed = 0;
  return options;
}

qinet_status qinet_estimate_curve(const qinet_dataset* dataset, const double* scores,
                                  size_t count, const qinet_qini_options* options,
                                  const char* estimator_id, qinet_curve** out) {
  return Guard([&] {
    Require(dataset, "dataset");
    Require(scores, "scores");
    Require(estimator_id, "estimator_id");
    Require(out, "out");
    const qinet_qini_options opts = options ? *options : qinet_qini_options_default();
    const auto& ds = dataset->dataset;
    CheckCount(count, ds.num_units());
    const auto spec = qinet::EstimatorSpec::Parse(estimator_id);
    const qinet::PropensityTable propensity(
        std::vector<double>(ds.num_clusters(), opts.treat_prob));

    std::vector<double> value_predictions, cost_predictions;
    if (spec.augmented()) {
      value_predictions = qinet::CrossFitPredictions(ds, qinet::Channel::kOutcome, opts.folds,
                                                     opts.crossfit_seed)
                              .predictions;
      if (opts.uniform_cost == 0) {
        cost_predictions = qinet::CrossFitPredictions(ds, qinet::Channel::kCost, opts.folds,
                                                      opts.crossfit_seed)
                               .predictions;
      }
    }
    const auto value =
        qinet::MakeValueFunction(spec, ds, propensity, qinet::Channel::kOutcome, value_predictions);
    const qinet::PolicyGrid grid(ds.layout(), {scores, count}, opts.grid_size, opts.tie_seed);
    if (opts.uniform_cost != 0) {
      *out = new qinet_curve{
          qinet::EvaluateQiniCurve(grid, value, nullptr, opts.max_budget, true, spec.Id())};
      return;
    }
    const auto cost =
        qinet::MakeValueFunction(spec, ds, propensity, qinet::Channel::kCost, cost_predictions);
    const double max_budget = cost(grid.policy(grid.grid_size()));
    if (!(max_budget > 0.0)) {
      qinet::ThrowNumeric("estimated cost of treating everyone is not positive");
    }
    *out = new qinet_curve{
        qinet::EvaluateQiniCurve(grid, value, &cost, max_budget, false, spec.Id())};
  });
}

void qinet_curve_destroy(qinet_curve* curve) { delete curve; }

size_t qinet_curve_num_points(const qinet_curve* curve) {
  return curve == nullptr ? 0 : curve->curve.points.size();
}

qinet_status qinet_curve_point(const qinet_curve* curve, size_t k, double* budget,
                               double* qini) {
  return Guard([&] {
    Require(curve, "curve");
    if (k >= curve->curve.points.size()) {
      qinet::ThrowInvalidArgument(fmt::format("point {} of {}", k, curve->curve.points.size()));
    }
    if (budget) *budget = curve->curve.points[k].budget;
    if (qini) *qini = curve->curve.points[k].qini;
  });
}

const char* qinet_curve_estimator_id(const qinet_curve* curve) {
  return curve == nullptr ? nullptr : curve->curve.estimator_id.c_str();
}

qinet_status qinet_curve_auc(const qinet_curve* curve, double* out) {
  return Guard([&] {
    Require(curve, "curve");
    Require(out, "out");
    *out = qinet::QiniAuc(curve->curve);
  });
}

qinet_status qinet_curves_write_csv(const qinet_curve* const* curves, size_t count,
                                    const qinet_dataset* dataset, const char* eta,
                                    double epsilon, uint64_t seed, size_t repetition,
                                    const char* path) {
  return Guard([&] {
    Require(curves, "curves");
    Require(dataset, "dataset");
    Require(path, "path");
    std::vector<qinet::CurveRecord> records;
    for (size_t c = 0; c < count; ++c) {
      Require(curves[c], "curve");
      qinet::CurveRecord r;
      r.n_buyers = dataset->dataset.num_clusters();
      r.n_items = dataset->dataset.layout()->max_cluster_size();
      r.eta = eta != nullptr ? eta : "na";
      r.epsilon = epsilon;
      r.seed = seed;
      r.repetition = repetition;
      r.curve = curves[c]->curve;
      records.push_back(std::move(r));
    }
    qinet::WriteCurveTable(records, std::filesystem::path(path));
  });
}

qinet_status qinet_experiment_run(const qinet_config* config, const qinet_run_options* options,
                                  size_t* failures) {
  return Guard([&] {
    Require(config, "config");
    const bool keep_going = options != nullptr && options->keep_going != 0;
    qinet::RunOptions run;
    // Failures are judged here so that their count can be reported.
    run.keep_going = true;
    run.log = options != nullptr && options->verbose != 0 ? &std::cerr : nullptr;
    if (failures) *failures = 0;
    const auto result = qinet::RunExperiment(config->config, run);
    if (failures) *failures = result.failures.size();
    if (!result.failures.empty() && !keep_going) {
      const auto& first = result.failures.front();
      throw qinet::Error(qinet::ErrorCode::kRuntime,
                         fmt::format("{} repetition(s) failed; first: repetition {} seed {}: {}",
                                     result.failures.size(), first.repetition, first.seed,
                                     first.message));
    }
  });
}

qinet_status qinet_report(const char* curves_path, const char* out_dir) {
  return Guard([&] {
    Require(curves_path, "curves_path");
    Require(out_dir, "out_dir");
    const std::filesystem::path source(curves_path);
    std::vector<qinet::CurveRecord> records;
    if (std::filesystem::is_directory(source)) {
      std::vector<std::filesystem::path> files;
      for (const auto& entry : std::filesystem::directory_iterator(source)) {
        if (entry.path().extension() == ".csv") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& file : files) {
        auto part = qinet::ReadCurveTable(file);
        for (auto& r : part) records.push_back(std::move(r));
      }
    } else {
      records = qinet::ReadCurveTable(source);
    }
    if (records.empty()) qinet::ThrowValidation("no curves to aggregate");
    qinet::WriteSummary(qinet::Summarize(records), out_dir);
  });
}

}  // extern "C"
