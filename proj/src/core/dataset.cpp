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

#include "core/dataset.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "core/error.hpp"

namespace qinet {

ClusterLayout::ClusterLayout(std::vector<std::size_t> offsets)
    : offsets_(std::move(offsets)) {
  if (offsets_.empty() || offsets_.front() != 0) {
    ThrowInvalidArgument("cluster offsets must start at 0");
  }
  if (!std::is_sorted(offsets_.begin(), offsets_.end())) {
    ThrowInvalidArgument("cluster offsets must be nondecreasing");
  }
}

ClusterLayout ClusterLayout::Uniform(std::size_t num_clusters,
                                     std::size_t cluster_size) {
  std::vector<std::size_t> offsets(num_clusters + 1);
  for (std::size_t i = 0; i <= num_clusters; ++i) {
    offsets[i] = i * cluster_size;
  }
  return ClusterLayout(std::move(offsets));
}

std::size_t ClusterLayout::max_cluster_size() const {
  std::size_t best = 0;
  for (std::size_t i = 0; i < num_clusters(); ++i) {
    best = std::max(best, size(i));
  }
  return best;
}

bool SameLayout(const LayoutPtr& a, const LayoutPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

std::string Violation::ToString() const {
  if (unit.has_value()) {
    return fmt::format("{} (cluster {}, unit {})", rule, cluster, *unit);
  }
  return fmt::format("{} (cluster {})", rule, cluster);
}

std::vector<Violation> ValidateDataset(const DatasetColumns& columns) {
  std::vector<Violation> violations;
  const auto& offsets = columns.offsets;
  if (offsets.empty() || offsets.front() != 0 ||
      !std::is_sorted(offsets.begin(), offsets.end())) {
    violations.push_back({"malformed cluster offsets", 0, std::nullopt});
    return violations;
  }
  const std::size_t num_clusters = offsets.size() - 1;
  const std::size_t num_units = offsets.back();
  if (columns.x.size() != num_clusters * columns.x_dim ||
      columns.z.size() != num_units * columns.z_dim ||
      columns.w.size() != num_units || columns.y.size() != num_units ||
      columns.c.size() != num_units) {
    violations.push_back({"column length mismatch", 0, std::nullopt});
    return violations;
  }

  for (std::size_t i = 0; i < num_clusters; ++i) {
    if (offsets[i + 1] == offsets[i]) {
      violations.push_back({"empty cluster", i, std::nullopt});
    }
    for (std::size_t d = 0; d < columns.x_dim; ++d) {
      if (!std::isfinite(columns.x[i * columns.x_dim + d])) {
        violations.push_back({"non-finite cluster covariate", i, std::nullopt});
        break;
      }
    }
    for (std::size_t u = offsets[i]; u < offsets[i + 1]; ++u) {
      const std::size_t j = u - offsets[i];
      for (std::size_t d = 0; d < columns.z_dim; ++d) {
        if (!std::isfinite(columns.z[u * columns.z_dim + d])) {
          violations.push_back({"non-finite unit covariate", i, j});
          break;
        }
      }
      if (columns.w[u] > 1) {
        violations.push_back({"treatment not binary", i, j});
      }
      if (!std::isfinite(columns.y[u])) {
        violations.push_back({"non-finite outcome", i, j});
      }
      if (!std::isfinite(columns.c[u])) {
        violations.push_back({"non-finite cost", i, j});
      } else if (columns.c[u] < 0.0) {
        violations.push_back({"negative cost", i, j});
      } else if (columns.w[u] == 0 && columns.c[u] != 0.0) {
        violations.push_back({"cost without treatment", i, j});
      }
    }
  }
  return violations;
}

ClusterDataset::ClusterDataset(DatasetColumns columns)
    : columns_(std::move(columns)) {
  const auto violations = ValidateDataset(columns_);
  if (!violations.empty()) {
    std::string message = fmt::format("dataset has {} violation(s):",
                                      violations.size());
    const std::size_t shown = std::min<std::size_t>(violations.size(), 10);
    for (std::size_t k = 0; k < shown; ++k) {
      message += "\n  " + violations[k].ToString();
    }
    if (shown < violations.size()) message += "\n  ...";
    ThrowValidation(message);
  }
  layout_ = std::make_shared<const ClusterLayout>(columns_.offsets);
}

ClusterTotals AggregateCluster(const ClusterDataset& dataset,
                               std::size_t cluster) {
  const auto& layout = *dataset.layout();
  ClusterTotals totals;
  for (std::size_t u = layout.begin(cluster); u < layout.end(cluster); ++u) {
    totals.outcome += dataset.y(u);
    totals.cost += dataset.c(u);
  }
  return totals;
}

DatasetBuilder::DatasetBuilder(std::size_t x_dim, std::size_t z_dim) {
  columns_.x_dim = x_dim;
  columns_.z_dim = z_dim;
}

DatasetBuilder& DatasetBuilder::AddCluster(std::vector<double> x) {
  if (x.size() != columns_.x_dim) {
    ThrowInvalidArgument(fmt::format("cluster covariates have length {}, want {}",
                                     x.size(), columns_.x_dim));
  }
  columns_.x.insert(columns_.x.end(), x.begin(), x.end());
  columns_.offsets.push_back(columns_.offsets.back());
  return *this;
}

DatasetBuilder& DatasetBuilder::AddUnit(std::vector<double> z, int w, double y,
                                        double c) {
  if (columns_.offsets.size() < 2) {
    ThrowInvalidArgument("AddUnit called before AddCluster");
  }
  if (z.size() != columns_.z_dim) {
    ThrowInvalidArgument(fmt::format("unit covariates have length {}, want {}",
                                     z.size(), columns_.z_dim));
  }
  if (w < 0 || w > 255) ThrowInvalidArgument("treatment out of range");
  columns_.z.insert(columns_.z.end(), z.begin(), z.end());
  columns_.w.push_back(static_cast<std::uint8_t>(w));
  columns_.y.push_back(y);
  columns_.c.push_back(c);
  ++columns_.offsets.back();
  return *this;
}

}  // namespace qinet
