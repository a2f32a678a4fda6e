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

// Clustered observational data: N clusters, each with cluster covariates X_i
// and M_i units carrying unit covariates Z_ij, a binary treatment W_ij, an
// outcome Y_ij and a non-negative cost C_ij.
//
// Storage is columnar. A ClusterDataset is immutable once constructed and can
// be shared freely across threads.

#ifndef QINET_CORE_DATASET_HPP_
#define QINET_CORE_DATASET_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qinet {

// Cluster boundaries over a flat unit index. offsets has N+1 entries and the
// units of cluster i are [offsets[i], offsets[i+1]).
class ClusterLayout {
 public:
  explicit ClusterLayout(std::vector<std::size_t> offsets);

  // Layout with `num_clusters` clusters of `cluster_size` units each.
  static ClusterLayout Uniform(std::size_t num_clusters,
                               std::size_t cluster_size);

  std::size_t num_clusters() const { return offsets_.size() - 1; }
  std::size_t num_units() const { return offsets_.back(); }
  std::size_t begin(std::size_t cluster) const { return offsets_[cluster]; }
  std::size_t end(std::size_t cluster) const { return offsets_[cluster + 1]; }
  std::size_t size(std::size_t cluster) const {
    return offsets_[cluster + 1] - offsets_[cluster];
  }
  std::size_t max_cluster_size() const;
  const std::vector<std::size_t>& offsets() const { return offsets_; }

  bool operator==(const ClusterLayout& other) const {
    return offsets_ == other.offsets_;
  }

 private:
  std::vector<std::size_t> offsets_;
};

using LayoutPtr = std::shared_ptr<const ClusterLayout>;

// True when both pointers describe the same cluster structure.
bool SameLayout(const LayoutPtr& a, const LayoutPtr& b);

// Unvalidated dataset columns. Build one directly or via DatasetBuilder, then
// hand it to ClusterDataset, which validates.
struct DatasetColumns {
  std::size_t x_dim = 0;
  std::size_t z_dim = 0;
  std::vector<std::size_t> offsets{0};
  std::vector<double> x;  // num_clusters * x_dim, row-major
  std::vector<double> z;  // num_units * z_dim, row-major
  std::vector<std::uint8_t> w;
  std::vector<double> y;
  std::vector<double> c;
};

struct Violation {
  std::string rule;  // e.g. "empty cluster", "cost without treatment"
  std::size_t cluster = 0;
  std::optional<std::size_t> unit;  // index within the cluster

  std::string ToString() const;
};

// Checks every dataset invariant and returns all violations found.
std::vector<Violation> ValidateDataset(const DatasetColumns& columns);

struct ClusterTotals {
  double outcome = 0.0;  // sum_j Y_ij
  double cost = 0.0;     // sum_j C_ij
};

class ClusterDataset {
 public:
  // Throws Error(kValidation) listing every violation.
  explicit ClusterDataset(DatasetColumns columns);

  std::size_t num_clusters() const { return layout_->num_clusters(); }
  std::size_t num_units() const { return layout_->num_units(); }
  std::size_t x_dim() const { return columns_.x_dim; }
  std::size_t z_dim() const { return columns_.z_dim; }
  std::size_t cluster_size(std::size_t i) const { return layout_->size(i); }
  const LayoutPtr& layout() const { return layout_; }

  std::span<const double> x(std::size_t cluster) const {
    return {columns_.x.data() + cluster * columns_.x_dim, columns_.x_dim};
  }
  // Unit accessors take the flat unit index.
  std::span<const double> z(std::size_t unit) const {
    return {columns_.z.data() + unit * columns_.z_dim, columns_.z_dim};
  }
  std::uint8_t w(std::size_t unit) const { return columns_.w[unit]; }
  double y(std::size_t unit) const { return columns_.y[unit]; }
  double c(std::size_t unit) const { return columns_.c[unit]; }

  std::span<const std::uint8_t> treatments() const { return columns_.w; }
  std::span<const double> outcomes() const { return columns_.y; }
  std::span<const double> costs() const { return columns_.c; }
  const DatasetColumns& columns() const { return columns_; }

 private:
  DatasetColumns columns_;
  LayoutPtr layout_;
};

// Exact sums of unit outcomes and costs in one cluster.
ClusterTotals AggregateCluster(const ClusterDataset& dataset,
                               std::size_t cluster);

// Row-oriented helper for assembling small datasets.
class DatasetBuilder {
 public:
  DatasetBuilder(std::size_t x_dim, std::size_t z_dim);

  DatasetBuilder& AddCluster(std::vector<double> x);
  DatasetBuilder& AddUnit(std::vector<double> z, int w, double y,
                          double c = 0.0);

  const DatasetColumns& columns() const { return columns_; }
  ClusterDataset Build() const { return ClusterDataset(columns_); }

 private:
  DatasetColumns columns_;
};

}  // namespace qinet

#endif  // QINET_CORE_DATASET_HPP_
