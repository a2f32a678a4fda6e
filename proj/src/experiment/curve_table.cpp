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

#include "experiment/curve_table.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <tuple>
#include <ostream>

#include <fmt/format.h>

#include "core/dataset_csv.hpp"
#include "core/error.hpp"

namespace qinet {
namespace {

constexpr const char* kHeader =
    "k,budget,qini,estimator_id,seed,repetition,n_buyers,n_items,eta,epsilon";

void WriteRows(const CurveRecord& r, std::ostream& out) {
  const std::string eps = FormatDouble(r.epsilon);
  for (std::size_t k = 0; k < r.curve.points.size(); ++k) {
    const auto& p = r.curve.points[k];
    out << k << ',' << FormatDouble(p.budget) << ',' << FormatDouble(p.qini) << ','
        << r.curve.estimator_id << ',' << r.seed << ',' << r.repetition << ','
        << r.n_buyers << ',' << r.n_items << ',' << r.eta << ',' << eps << '\n';
  }
}

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) ThrowIo(fmt::format("cannot open '{}' for writing", path.string()));
  return out;
}

}  // namespace

void WriteCurveTable(const std::vector<CurveRecord>& records, std::ostream& out) {
  out << kHeader << '\n';
  for (const auto& r : records) WriteRows(r, out);
  if (!out) ThrowIo("failed writing the curve table");
}

void WriteCurveTable(const std::vector<CurveRecord>& records,
                     const std::filesystem::path& path) {
  auto out = OpenForWrite(path);
  WriteCurveTable(records, out);
}

std::string CurveFileName(const CurveRecord& record, std::size_t epsilon_index) {
  std::string id = record.curve.estimator_id;
  std::replace(id.begin(), id.end(), ':', '-');
  return fmt::format("{}_n{}_m{}_eps{}_{}_rep{}.csv", record.eta, record.n_buyers,
                     record.n_items, epsilon_index, id, record.repetition);
}

void WriteCurveFiles(const std::vector<CurveRecord>& records,
                     const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  // Epsilon index within each setting, in order of first appearance.
  std::map<std::tuple<std::size_t, std::size_t, std::string>, std::vector<double>> seen;
  for (const auto& r : records) {
    auto& eps = seen[{r.n_buyers, r.n_items, r.eta}];
    auto it = std::find(eps.begin(), eps.end(), r.epsilon);
    if (it == eps.end()) it = eps.insert(eps.end(), r.epsilon);
    const auto index = static_cast<std::size_t>(it - eps.begin());
    auto out = OpenForWrite(dir / CurveFileName(r, index));
    out << kHeader << '\n';
    WriteRows(r, out);
  }
}

std::vector<CurveRecord> ReadCurveTable(std::istream& in) {
  const CsvTable table = ReadCsv(in);
  const std::vector<std::string> expected = {
      "k", "budget", "qini", "estimator_id", "seed", "repetition",
      "n_buyers", "n_items", "eta", "epsilon"};
  if (table.header != expected) {
    ThrowValidation(fmt::format("curve table header must be '{}'", kHeader));
  }
  std::vector<CurveRecord> records;
  for (std::size_t row = 0; row < table.rows.size(); ++row) {
    const auto& f = table.rows[row];
    const auto k = static_cast<std::size_t>(ParseUnsigned(f[0]));
    CurveRecord key;
    key.curve.estimator_id = f[3];
    key.seed = ParseUnsigned(f[4]);
    key.repetition = static_cast<std::size_t>(ParseUnsigned(f[5]));
    key.n_buyers = static_cast<std::size_t>(ParseUnsigned(f[6]));
    key.n_items = static_cast<std::size_t>(ParseUnsigned(f[7]));
    key.eta = f[8];
    key.epsilon = ParseDouble(f[9]);
    const QiniPoint point{ParseDouble(f[1]), ParseDouble(f[2])};
    if (k == 0) {
      records.push_back(std::move(key));
    } else {
      if (records.empty()) ThrowValidation(fmt::format("row {}: curve does not start at k = 0", row + 2));
      const auto& last = records.back();
      if (last.curve.points.size() != k || last.curve.estimator_id != key.curve.estimator_id ||
          last.repetition != key.repetition || last.seed != key.seed ||
          last.n_buyers != key.n_buyers || last.n_items != key.n_items ||
          last.eta != key.eta || last.epsilon != key.epsilon) {
        ThrowValidation(fmt::format("row {}: curve rows are not contiguous", row + 2));
      }
    }
    records.back().curve.points.push_back(point);
  }
  for (auto& r : records) {
    r.curve.grid_size = r.curve.points.size() - 1;
    r.curve.max_budget = r.curve.points.back().budget > 0.0 ? r.curve.points.back().budget : 1.0;
    r.curve.uniform_cost = true;
  }
  return records;
}

std::vector<CurveRecord> ReadCurveTable(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowIo(fmt::format("cannot open '{}' for reading", path.string()));
  return ReadCurveTable(in);
}

}  // namespace qinet
