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

#include "simulator/params.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "core/dataset_csv.hpp"
#include "core/error.hpp"
#include "core/random.hpp"

namespace qinet::sim {

std::string_view EtaKindName(EtaKind kind) {
  switch (kind) {
    case EtaKind::kMax:
      return "max";
    case EtaKind::kProduct:
      return "product";
    case EtaKind::kExpDecay:
      return "exp_decay";
  }
  return "?";
}

EtaKind ParseEtaKind(std::string_view text) {
  if (text == "max") return EtaKind::kMax;
  if (text == "product") return EtaKind::kProduct;
  if (text == "exp_decay") return EtaKind::kExpDecay;
  ThrowValidation(fmt::format(
      "unknown eta '{}' (expected max, product or exp_decay)", text));
}

std::string_view MaskModeName(MaskMode mode) {
  return mode == MaskMode::kIncrement ? "increment" : "whole";
}

MaskMode ParseMaskMode(std::string_view text) {
  if (text == "increment") return MaskMode::kIncrement;
  if (text == "whole") return MaskMode::kWhole;
  ThrowValidation(fmt::format(
      "unknown mask_mode '{}' (expected increment or whole)", text));
}

namespace {

bool IsProbability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

}  // namespace

void SimulatorParams::Validate() const {
  if (n_buyers == 0) ThrowInvalidArgument("n_buyers must be positive");
  if (n_items == 0) ThrowInvalidArgument("n_items must be positive");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    ThrowInvalidArgument("temperature must be positive");
  }
  if (!(treat_prob > 0.0 && treat_prob < 1.0)) {
    ThrowInvalidArgument("treat_prob must lie strictly inside (0, 1)");
  }
  if (!IsProbability(mask_prob)) {
    ThrowInvalidArgument("mask_prob must lie in [0, 1]");
  }
  if (!IsProbability(discount)) {
    ThrowInvalidArgument("discount must lie in [0, 1]");
  }
  for (double v : {price_base, price_slope, margin_base, margin_slope}) {
    if (!std::isfinite(v)) ThrowInvalidArgument("price/margin coefficients must be finite");
  }
  if (x_dim == 0 || z_dim < 2) {
    ThrowInvalidArgument("x_dim must be >= 1 and z_dim >= 2");
  }
  const double scale = AttractivenessScale();
  if (!std::isfinite(scale) || scale <= 0.0) {
    ThrowInvalidArgument("attractiveness_scale must be positive");
  }
  for (const auto* omega : {&omega0, &omega1}) {
    if (static_cast<std::size_t>(omega->rows()) != x_dim ||
        static_cast<std::size_t>(omega->cols()) != z_dim) {
      ThrowInvalidArgument(fmt::format(
          "omega matrices must be {} x {}, got {} x {}", x_dim, z_dim,
          omega->rows(), omega->cols()));
    }
    if (!omega->allFinite()) ThrowInvalidArgument("omega has non-finite entries");
  }
}

void SampleOmegas(SimulatorParams& params, std::uint64_t seed) {
  Rng rng(seed, Stream::kOmega);
  const auto rows = static_cast<Eigen::Index>(params.x_dim);
  const auto cols = static_cast<Eigen::Index>(params.z_dim);
  for (auto* omega : {&params.omega0, &params.omega1}) {
    omega->resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) (*omega)(r, c) = rng.Uniform();
    }
  }
}

Eigen::MatrixXd ReadMatrixCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) ThrowIo(fmt::format("cannot open '{}' for reading", path.string()));
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) row.push_back(ParseDouble(field));
    if (!rows.empty() && row.size() != rows.front().size()) {
      ThrowValidation(fmt::format("ragged matrix CSV '{}'", path.string()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) ThrowValidation(fmt::format("empty matrix CSV '{}'", path.string()));
  Eigen::MatrixXd matrix(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) matrix(r, c) = rows[r][c];
  }
  return matrix;
}

}  // namespace qinet::sim
