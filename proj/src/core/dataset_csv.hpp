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

// Dataset CSV schema:
//
//   cluster_id,unit_id,x_0,...,x_{dx-1},z_0,...,z_{dz-1},w,y,c
//
// One row per unit, header required, rows of a cluster contiguous. X_i is
// repeated on every row of its cluster and must agree across those rows.
// Doubles are written with 17 significant digits so files round-trip exactly.

#ifndef QINET_CORE_DATASET_CSV_HPP_
#define QINET_CORE_DATASET_CSV_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "core/dataset.hpp"

namespace qinet {

void WriteDatasetCsv(const ClusterDataset& dataset, std::ostream& out);
void WriteDatasetCsv(const ClusterDataset& dataset,
                     const std::filesystem::path& path);

ClusterDataset ReadDatasetCsv(std::istream& in);
ClusterDataset ReadDatasetCsv(const std::filesystem::path& path);

// Minimal CSV plumbing shared by the file formats of this library. Fields
// never contain commas or quotes.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column; throws Error(kValidation) when missing.
  std::size_t Column(std::string_view name) const;
};

CsvTable ReadCsv(std::istream& in);
CsvTable ReadCsvFile(const std::filesystem::path& path);

double ParseDouble(std::string_view text);
long long ParseInteger(std::string_view text);
unsigned long long ParseUnsigned(std::string_view text);

// Shortest text that parses back to the identical double.
std::string FormatDouble(double value);

}  // namespace qinet

#endif  // QINET_CORE_DATASET_CSV_HPP_
