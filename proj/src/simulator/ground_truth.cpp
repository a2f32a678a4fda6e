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

#include "simulator/ground_truth.hpp"

#include <fmt/format.h>

#include "core/error.hpp"
#include "simulator/marketplace.hpp"

namespace qinet::sim {

GroundTruth::GroundTruth(LayoutPtr layout, EtaKind eta, MaskMode mask_mode,
                         std::vector<double> base, std::vector<double> increment,
                         std::vector<std::uint8_t> mask,
                         std::vector<double> profit)
    : layout_(std::move(layout)),
      eta_(eta),
      mask_mode_(mask_mode),
      base_(std::move(base)),
      increment_(std::move(increment)),
      mask_(std::move(mask)),
      profit_(std::move(profit)) {
  const std::size_t n = layout_->num_units();
  if (base_.size() != n || increment_.size() != n || mask_.size() != n ||
      profit_.size() != n) {
    ThrowInvalidArgument("ground truth arrays do not match the layout");
  }
}

double GroundTruth::ClusterPurchaseProbability(
    std::size_t cluster, std::span<const std::uint8_t> decisions) const {
  const std::size_t begin = layout_->begin(cluster);
  const std::size_t size = layout_->size(cluster);
  if (decisions.size() != size) {
    ThrowInvalidArgument("decision vector does not match the cluster size");
  }
  thread_local std::vector<double> row;
  row.resize(size);
  for (std::size_t j = 0; j < size; ++j) {
    const std::size_t u = begin + j;
    row[j] = CombineAttractiveness(base_[u], increment_[u], decisions[j],
                                   mask_[u], mask_mode_);
  }
  return PurchaseProbability(row, eta_);
}

double TruePolicyValue(const GroundTruth& truth,
                       const PolicyAssignment& assignment) {
  if (!SameLayout(truth.layout(), assignment.layout())) {
    ThrowInvalidArgument("policy assignment is on a different sample");
  }
  long double total = 0.0L;
  const std::size_t n = truth.layout()->num_clusters();
  for (std::size_t i = 0; i < n; ++i) {
    total += truth.ClusterPurchaseProbability(i, assignment.cluster_decisions(i));
  }
  return static_cast<double>(total / static_cast<long double>(n));
}

ValueFunction OracleValueFunction(const GroundTruth& truth) {
  return [&truth](const PolicyAssignment& assignment) {
    return TruePolicyValue(truth, assignment);
  };
}

QiniCurve TrueQiniCurve(const GroundTruth& truth, std::span<const double> scores,
                        std::size_t grid_size, std::uint64_t tie_seed) {
  QiniSettings settings;
  settings.grid_size = grid_size;
  settings.tie_seed = tie_seed;
  return EstimateQiniCurve(truth.layout(), scores, settings,
                           OracleValueFunction(truth), nullptr, "oracle");
}

}  // namespace qinet::sim
