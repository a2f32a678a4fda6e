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

#ifndef QINET_SIMULATOR_PARAMS_HPP_
#define QINET_SIMULATOR_PARAMS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace qinet::sim {

// Purchase probability as a function of a buyer's attractiveness row.
enum class EtaKind {
  kMax,       // max_j A_ij
  kProduct,   // 1 - prod_j (1 - A_ij)
  kExpDecay,  // sum_j 2^-rank(A_ij) A_ij, top item rank 1
};

// Which part of the attractiveness the per-unit mask delta_ij switches off.
enum class MaskMode {
  kIncrement,  // A = clip(A0 + delta * W * A1)
  kWhole,      // A = clip(delta * (A0 + W * A1))
};

std::string_view EtaKindName(EtaKind kind);
EtaKind ParseEtaKind(std::string_view text);
std::string_view MaskModeName(MaskMode mode);
MaskMode ParseMaskMode(std::string_view text);

struct SimulatorParams {
  std::size_t n_buyers = 1000;  // clusters N
  std::size_t n_items = 3;      // units per cluster M, identical for all buyers
  EtaKind eta = EtaKind::kExpDecay;
  MaskMode mask_mode = MaskMode::kIncrement;
  double temperature = 0.1;  // softmax lambda for item choice
  double treat_prob = 0.5;
  double mask_prob = 0.5;  // P(delta_ij = 1)

  double price_base = 20.0;
  double price_slope = 100.0;  // price = base + slope * z_0
  double margin_base = 0.01;
  double margin_slope = 0.05;  // margin = base + slope * z_1
  double discount = 0.08;      // discount fraction d paid on a treated sale

  std::size_t x_dim = 12;
  std::size_t z_dim = 11;
  // Multiplies X^T Omega_w Z. Unset means 1 / (x_dim * z_dim), which keeps
  // A_ij inside [0, 1] for uniform covariates and matrices.
  std::optional<double> attractiveness_scale;

  Eigen::MatrixXd omega0;  // x_dim x z_dim
  Eigen::MatrixXd omega1;

  double AttractivenessScale() const {
    return attractiveness_scale.value_or(
        1.0 / static_cast<double>(x_dim * z_dim));
  }

  // Throws Error(kInvalidArgument) on the first offending field.
  void Validate() const;
};

// Fills omega0 and omega1 with U[0, 1] entries drawn from the omega stream of
// `seed`.
void SampleOmegas(SimulatorParams& params, std::uint64_t seed);

// Headerless numeric CSV, one matrix row per line.
Eigen::MatrixXd ReadMatrixCsv(const std::filesystem::path& path);

}  // namespace qinet::sim

#endif  // QINET_SIMULATOR_PARAMS_HPP_
