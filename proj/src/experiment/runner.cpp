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

#include "experiment/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "core/error.hpp"
#include "core/propensity.hpp"
#include "core/random.hpp"
#include "estimators/outcome_model.hpp"
#include "qini/qini.hpp"
#include "simulator/ground_truth.hpp"
#include "simulator/marketplace.hpp"

namespace qinet {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

void WriteManifest(const ExperimentConfig& config, const ExperimentResult& result,
                   std::size_t workers, const std::filesystem::path& dir) {
  nlohmann::ordered_json manifest;
  manifest["config_hash"] = fmt::format("{:016x}", result.config_hash);
  manifest["master_seed"] = config.seed;
  manifest["version"] = QINET_VERSION_STRING;
  manifest["kind"] = std::string(ExperimentKindName(config.kind));
  manifest["repetitions"] = config.repetitions;
  manifest["workers"] = workers;
  manifest["wall_time_seconds"] = result.wall_seconds;
  manifest["metric_conventions"] =
      "population variance over repetitions of Q^_k - Q_k; grid point k = 0 "
      "excluded from averages; standard errors across repetitions (jackknife "
      "for variance)";
  manifest["config"] = config.Canonical();
  auto failures = nlohmann::ordered_json::array();
  for (const auto& f : result.failures) {
    failures.push_back({{"n_buyers", f.point.n_buyers},
                        {"n_items", f.point.n_items},
                        {"eta", std::string(sim::EtaKindName(f.point.eta))},
                        {"repetition", f.repetition},
                        {"seed", f.seed},
                        {"error", f.message}});
  }
  manifest["failures"] = failures;
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) ThrowIo(fmt::format("cannot write '{}'", (dir / "manifest.json").string()));
  out << manifest.dump(2) << '\n';
}

}  // namespace

std::uint64_t RepetitionSeed(std::uint64_t master_seed, std::size_t repetition) {
  return DeriveSeed(master_seed, {static_cast<std::uint64_t>(repetition)});
}

std::vector<CurveRecord> RunRepetition(const sim::SimulatorParams& base,
                                       const RepetitionSpec& spec) {
  sim::SimulatorParams params = base;
  params.n_buyers = spec.point.n_buyers;
  params.n_items = spec.point.n_items;
  params.eta = spec.point.eta;
  const auto sample = sim::SampleDataset(params, spec.seed);
  const ClusterDataset& dataset = sample.dataset;
  const PropensityTable propensity(
      std::vector<double>(dataset.num_clusters(), params.treat_prob));
  const std::vector<double> baseline = sim::BaselineScores(sample.truth);

  std::vector<double> predictions;
  const bool augmented = std::any_of(spec.estimators.begin(), spec.estimators.end(),
                                     [](const auto& e) { return e.augmented(); });
  if (augmented) {
    predictions =
        CrossFitPredictions(dataset, Channel::kOutcome, spec.folds, spec.seed).predictions;
  }
  std::vector<ValueFunction> values;
  for (const auto& e : spec.estimators) {
    values.push_back(MakeValueFunction(e, dataset, propensity, Channel::kOutcome, predictions));
  }
  const ValueFunction oracle = sim::OracleValueFunction(sample.truth);

  CurveRecord prototype;
  prototype.n_buyers = params.n_buyers;
  prototype.n_items = params.n_items;
  prototype.eta = std::string(sim::EtaKindName(params.eta));
  prototype.seed = spec.seed;
  prototype.repetition = spec.repetition;

  std::vector<CurveRecord> records;
  for (double epsilon : spec.epsilons) {
    // Same noise draw for every epsilon: the policies differ only in weight.
    const auto scores = sim::PerturbScores(baseline, epsilon, spec.seed);
    const PolicyGrid grid(dataset.layout(), scores, spec.grid_size, spec.seed);
    prototype.epsilon = epsilon;
    CurveRecord record = prototype;
    record.curve = EvaluateQiniCurve(grid, oracle, nullptr, 1.0, true, kOracleId);
    records.push_back(std::move(record));
    for (std::size_t e = 0; e < values.size(); ++e) {
      CurveRecord r = prototype;
      r.curve = EvaluateQiniCurve(grid, values[e], nullptr, 1.0, true, spec.estimators[e].Id());
      records.push_back(std::move(r));
    }
  }
  return records;
}

ExperimentResult RunExperiment(const ExperimentConfig& config, const RunOptions& options) {
  config.Validate();
  const auto start = Clock::now();
  const sim::SimulatorParams base = LoadSimulatorParams(config);
  const std::vector<SweepPoint> points = config.Points();
  const std::size_t reps = config.repetitions;
  const std::size_t tasks = points.size() * reps;
  const std::size_t workers =
      std::max<std::size_t>(1, std::min(options.workers.value_or(config.workers), tasks));

  std::vector<std::vector<CurveRecord>> outputs(tasks);
  std::vector<std::optional<TaskFailure>> failures(tasks);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  const auto log = [&](const std::string& line) {
    if (options.log == nullptr) return;
    std::lock_guard lock(log_mutex);
    *options.log << line << '\n' << std::flush;
  };

  const auto work = [&] {
    for (std::size_t t = next++; t < tasks; t = next++) {
      const std::size_t p = t / reps;
      const std::size_t r = t % reps;
      const SweepPoint& point = points[p];
      const std::uint64_t seed = RepetitionSeed(config.seed, r);
      const auto task_start = Clock::now();
      const std::string where =
          fmt::format("setting {}/{} ({} N={} M={}) repetition {}/{} seed {}", p + 1,
                      points.size(), sim::EtaKindName(point.eta), point.n_buyers,
                      point.n_items, r + 1, reps, seed);
      try {
        if (options.before_repetition) options.before_repetition(p, r);
        RepetitionSpec spec{point,   config.estimators, config.epsilons, config.grid_size,
                            config.folds, seed, r};
        outputs[t] = RunRepetition(base, spec);
        log(fmt::format("[qinet] {} done in {:.2f} s", where, Seconds(task_start)));
      } catch (const std::exception& e) {
        failures[t] = TaskFailure{point, r, seed, e.what()};
        log(fmt::format("[qinet] {} FAILED: {}", where, e.what()));
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& thread : pool) thread.join();
  }

  ExperimentResult result;
  result.config_hash = config.Hash();
  for (std::size_t t = 0; t < tasks; ++t) {
    if (failures[t]) result.failures.push_back(*failures[t]);
    for (auto& record : outputs[t]) result.records.push_back(std::move(record));
  }
  result.summary = Summarize(result.records);
  result.wall_seconds = Seconds(start);

  if (options.write_outputs) {
    const auto dir = options.output.value_or(config.output);
    std::filesystem::create_directories(dir);
    if (config.per_curve_files) {
      WriteCurveFiles(result.records, dir / "curves");
    } else {
      WriteCurveTable(result.records, dir / "curves.csv");
    }
    WriteSummary(result.summary, dir);
    WriteManifest(config, result, workers, dir);
  }
  if (!result.failures.empty() && !options.keep_going) {
    const auto& first = result.failures.front();
    throw Error(ErrorCode::kRuntime,
                fmt::format("{} of {} repetitions failed; first: repetition {} seed {}: {}",
                            result.failures.size(), tasks, first.repetition, first.seed,
                            first.message));
  }
  return result;
}

}  // namespace qinet
