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

#include "core/dataset_csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <fmt/format.h>

#include "core/error.hpp"

namespace qinet {
namespace {

std::vector<std::string> SplitLine(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      break;
    }
    fields.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

// Counts columns named prefix_0, prefix_1, ... starting at `first`.
std::size_t CountPrefixed(const std::vector<std::string>& header,
                          std::size_t first, std::string_view prefix) {
  std::size_t count = 0;
  while (first + count < header.size() &&
         header[first + count] == fmt::format("{}_{}", prefix, count)) {
    ++count;
  }
  return count;
}

}  // namespace

std::size_t CsvTable::Column(std::string_view name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  ThrowValidation(fmt::format("CSV is missing column '{}'", name));
}

CsvTable ReadCsv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool have_header = false;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = SplitLine(line);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      ThrowValidation(fmt::format("CSV line {} has {} fields, header has {}",
                                  line_number, fields.size(),
                                  table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (!have_header) ThrowValidation("CSV input has no header row");
  return table;
}

CsvTable ReadCsvFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) ThrowIo(fmt::format("cannot open '{}' for reading", path.string()));
  return ReadCsv(in);
}

double ParseDouble(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    ThrowValidation(fmt::format("'{}' is not a number", text));
  }
  return value;
}

long long ParseInteger(std::string_view text) {
  long long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    ThrowValidation(fmt::format("'{}' is not an integer", text));
  }
  return value;
}

unsigned long long ParseUnsigned(std::string_view text) {
  unsigned long long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    ThrowValidation(fmt::format("'{}' is not a non-negative integer", text));
  }
  return value;
}

std::string FormatDouble(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) ThrowNumeric("cannot format double");
  return std::string(buffer, ptr);
}

void WriteDatasetCsv(const ClusterDataset& dataset, std::ostream& out) {
  out << "cluster_id,unit_id";
  for (std::size_t d = 0; d < dataset.x_dim(); ++d) out << ",x_" << d;
  for (std::size_t d = 0; d < dataset.z_dim(); ++d) out << ",z_" << d;
  out << ",w,y,c\n";
  const auto& layout = *dataset.layout();
  std::string row;
  for (std::size_t i = 0; i < dataset.num_clusters(); ++i) {
    std::string cluster_prefix;
    for (double v : dataset.x(i)) cluster_prefix += "," + FormatDouble(v);
    for (std::size_t u = layout.begin(i); u < layout.end(i); ++u) {
      row = fmt::format("{},{}", i, u - layout.begin(i));
      row += cluster_prefix;
      for (double v : dataset.z(u)) row += "," + FormatDouble(v);
      row += fmt::format(",{},{},{}\n", static_cast<int>(dataset.w(u)),
                         FormatDouble(dataset.y(u)), FormatDouble(dataset.c(u)));
      out << row;
    }
  }
}

void WriteDatasetCsv(const ClusterDataset& dataset,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) ThrowIo(fmt::format("cannot open '{}' for writing", path.string()));
  WriteDatasetCsv(dataset, out);
  if (!out) ThrowIo(fmt::format("failed writing '{}'", path.string()));
}

ClusterDataset ReadDatasetCsv(std::istream& in) {
  const CsvTable table = ReadCsv(in);
  const auto& header = table.header;
  if (header.size() < 5 || header[0] != "cluster_id" || header[1] != "unit_id") {
    ThrowValidation("dataset CSV must start with cluster_id,unit_id");
  }
  const std::size_t x_dim = CountPrefixed(header, 2, "x");
  const std::size_t z_dim = CountPrefixed(header, 2 + x_dim, "z");
  const std::size_t tail = 2 + x_dim + z_dim;
  if (header.size() != tail + 3 || header[tail] != "w" ||
      header[tail + 1] != "y" || header[tail + 2] != "c") {
    ThrowValidation(
        "dataset CSV header must be cluster_id,unit_id,x_*,z_*,w,y,c");
  }

  DatasetColumns columns;
  columns.x_dim = x_dim;
  columns.z_dim = z_dim;
  std::unordered_set<std::string> seen_clusters;
  std::string current_cluster;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const bool new_cluster = r == 0 || row[0] != current_cluster;
    if (new_cluster) {
      if (!seen_clusters.insert(row[0]).second) {
        ThrowValidation(fmt::format(
            "rows of cluster '{}' are not contiguous (data row {})", row[0],
            r + 1));
      }
      current_cluster = row[0];
      for (std::size_t d = 0; d < x_dim; ++d) {
        columns.x.push_back(ParseDouble(row[2 + d]));
      }
      columns.offsets.push_back(columns.offsets.back());
    } else {
      const std::size_t base = (columns.offsets.size() - 2) * x_dim;
      for (std::size_t d = 0; d < x_dim; ++d) {
        if (ParseDouble(row[2 + d]) != columns.x[base + d]) {
          ThrowValidation(fmt::format(
              "cluster '{}' has inconsistent x_{} across rows", row[0], d));
        }
      }
    }
    for (std::size_t d = 0; d < z_dim; ++d) {
      columns.z.push_back(ParseDouble(row[2 + x_dim + d]));
    }
    const long long w = ParseInteger(row[tail]);
    if (w < 0 || w > 1) {
      ThrowValidation(fmt::format("treatment '{}' is not 0/1 (data row {})",
                                  row[tail], r + 1));
    }
    columns.w.push_back(static_cast<std::uint8_t>(w));
    columns.y.push_back(ParseDouble(row[tail + 1]));
    columns.c.push_back(ParseDouble(row[tail + 2]));
    ++columns.offsets.back();
  }
  return ClusterDataset(std::move(columns));
}

ClusterDataset ReadDatasetCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) ThrowIo(fmt::format("cannot open '{}' for reading", path.string()));
  return ReadDatasetCsv(in);
}

}  // namespace qinet
