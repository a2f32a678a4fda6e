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

// Experiment configuration, read from an INI-style file:
//
//   [experiment]
//   kind = calibration          ; calibration | variance_scaling | ranking | figure1
//   estimators = naive, ipw, beta_ipw:1
//   repetitions = 30
//   epsilons = 0, 1/6, 1/3      ; perturbations of the baseline policy
//   sweep_m = 3, 7, 11          ; defaults to [simulator] n_items
//
//   [simulator]
//   n_buyers = 20000
//   n_items = 3
//   eta = exp_decay
//
// Unknown sections and keys are rejected.

#ifndef QINET_EXPERIMENT_CONFIG_HPP_
#define QINET_EXPERIMENT_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "estimators/registry.hpp"
#include "simulator/params.hpp"

namespace qinet {

enum class ExperimentKind { kCalibration, kVarianceScaling, kRanking, kFigure1 };

std::string_view ExperimentKindName(ExperimentKind kind);
ExperimentKind ParseExperimentKind(std::string_view text);

// One simulator setting of a sweep.
struct SweepPoint {
  std::size_t n_buyers = 0;
  std::size_t n_items = 0;
  sim::EtaKind eta = sim::EtaKind::kExpDecay;
  bool operator==(const SweepPoint&) const = default;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kCalibration;
  sim::SimulatorParams simulator;  // base setting; omegas resolved at run time
  std::optional<std::filesystem::path> omega0_path;
  std::optional<std::filesystem::path> omega1_path;

  std::vector<EstimatorSpec> estimators;
  std::vector<double> epsilons{0.0};
  std::vector<std::size_t> sweep_n;  // empty: base n_buyers only
  std::vector<std::size_t> sweep_m;  // empty: base n_items only
  std::vector<sim::EtaKind> sweep_eta;  // empty: base eta only

  std::size_t repetitions = 1;
  std::size_t grid_size = 10;
  std::size_t folds = 2;  // cross-fitting folds of augmented estimators
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  std::filesystem::path output = "qinet-out";
  bool per_curve_files = false;

  // Simulator settings in run order. variance_scaling varies one axis at a
  // time around the base setting; every other kind takes the cartesian
  // product eta x n x m.
  std::vector<SweepPoint> Points() const;

  // Full resolved configuration as sorted key = value lines.
  std::string Canonical() const;
  // FNV-1a over Canonical() plus the contents of any omega files.
  std::uint64_t Hash() const;

  // Throws Error(kValidation) naming the offending field.
  void Validate() const;
};

// Relative omega paths resolve against `base_dir`.
ExperimentConfig ParseConfigString(std::string_view text,
                                   const std::filesystem::path& base_dir = ".");
ExperimentConfig ParseConfigFile(const std::filesystem::path& path);

// Base simulator parameters with Omega either loaded from the configured CSV
// files or sampled from the master seed.
sim::SimulatorParams LoadSimulatorParams(const ExperimentConfig& config);

std::uint64_t Fnv1a64(std::string_view data,
                      std::uint64_t state = 0xcbf29ce484222325ULL);

}  // namespace qinet

#endif  // QINET_EXPERIMENT_CONFIG_HPP_
