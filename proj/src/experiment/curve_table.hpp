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

// Raw per-repetition curves in tall CSV form, one row per curve point:
//
//   k,budget,qini,estimator_id,seed,repetition,n_buyers,n_items,eta,epsilon
//
// The oracle curve of each repetition is stored under estimator id "oracle".

#ifndef QINET_EXPERIMENT_CURVE_TABLE_HPP_
#define QINET_EXPERIMENT_CURVE_TABLE_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qini/qini.hpp"

namespace qinet {

inline constexpr const char* kOracleId = "oracle";

struct CurveRecord {
  std::size_t n_buyers = 0;
  std::size_t n_items = 0;
  std::string eta;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::size_t repetition = 0;
  QiniCurve curve;  // carries the estimator id
};

void WriteCurveTable(const std::vector<CurveRecord>& records, std::ostream& out);
void WriteCurveTable(const std::vector<CurveRecord>& records,
                     const std::filesystem::path& path);
// One file per (setting, policy, estimator, repetition) under `dir`.
void WriteCurveFiles(const std::vector<CurveRecord>& records,
                     const std::filesystem::path& dir);
// File name used by WriteCurveFiles.
std::string CurveFileName(const CurveRecord& record, std::size_t epsilon_index);

// Reads a tall table (or a single per-curve file). Rows of one curve must be
// contiguous with k = 0, 1, ..., K.
std::vector<CurveRecord> ReadCurveTable(std::istream& in);
std::vector<CurveRecord> ReadCurveTable(const std::filesystem::path& path);

}  // namespace qinet

#endif  // QINET_EXPERIMENT_CURVE_TABLE_HPP_
