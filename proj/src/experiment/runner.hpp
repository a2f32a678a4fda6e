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

// Experiment orchestration. Work is split into (setting, repetition) tasks
// that a pool of workers pulls by index; every task derives its randomness
// from (master seed, repetition) alone and results are gathered by index, so
// outputs do not depend on the worker count.

#ifndef QINET_EXPERIMENT_RUNNER_HPP_
#define QINET_EXPERIMENT_RUNNER_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "experiment/config.hpp"
#include "experiment/curve_table.hpp"
#include "experiment/report.hpp"
#include "simulator/params.hpp"

namespace qinet {

// Seed of repetition r, shared by every setting of a sweep.
std::uint64_t RepetitionSeed(std::uint64_t master_seed, std::size_t repetition);

struct RepetitionSpec {
  SweepPoint point;
  std::vector<EstimatorSpec> estimators;
  std::vector<double> epsilons{0.0};
  std::size_t grid_size = 10;
  std::size_t folds = 2;
  std::uint64_t seed = 0;
  std::size_t repetition = 0;
};

// One repetition: sample a dataset, build the perturbed baseline policies,
// and estimate one curve per (policy, estimator) plus the oracle curve per
// policy, all on a policy grid shared across estimators. Records are ordered
// by policy, with the oracle first.
std::vector<CurveRecord> RunRepetition(const sim::SimulatorParams& base,
                                       const RepetitionSpec& spec);

struct RunOptions {
  std::optional<std::size_t> workers;  // overrides the config
  bool keep_going = false;
  bool write_outputs = true;
  std::optional<std::filesystem::path> output;  // overrides the config
  std::ostream* log = nullptr;                  // progress lines; null is silent
  // Called at the start of each task, on the worker thread. An exception
  // thrown here fails that task like any other error.
  std::function<void(std::size_t point_index, std::size_t repetition)> before_repetition;
};

struct TaskFailure {
  SweepPoint point;
  std::size_t repetition = 0;
  std::uint64_t seed = 0;
  std::string message;
};

struct ExperimentResult {
  std::vector<CurveRecord> records;
  std::vector<TaskFailure> failures;
  ExperimentSummary summary;
  double wall_seconds = 0.0;
  std::uint64_t config_hash = 0;
};

// Runs every task, then aggregates and (optionally) writes curves.csv or
// curves/, the metric CSVs, panels, report.txt and manifest.json. When a task
// fails the remaining tasks still run; the call then throws Error(kRuntime)
// unless keep_going is set. Outputs and the manifest are written either way.
ExperimentResult RunExperiment(const ExperimentConfig& config,
                               const RunOptions& options = {});

}  // namespace qinet

#endif  // QINET_EXPERIMENT_RUNNER_HPP_
