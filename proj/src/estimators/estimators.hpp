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

// Policy value (or cost) estimators under clustered interference. Every
// estimator reports a per-cluster mean, N^-1 sum_i contribution_i.

#ifndef QINET_ESTIMATORS_ESTIMATORS_HPP_
#define QINET_ESTIMATORS_ESTIMATORS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/policy.hpp"
#include "core/propensity.hpp"

namespace qinet {

// Which unit column feeds the estimator: Y (value) or C (cost).
enum class Channel { kOutcome, kCost };

struct EstimateOptions {
  Channel channel = Channel::kOutcome;
  bool keep_contributions = false;
};

struct ValueEstimate {
  double value = 0.0;
  std::string estimator_id;
  // Per-cluster terms; value is their mean.
  std::optional<std::vector<double>> contributions;
};

// N^-1 sum_i sum_j 1(W_ij = pi_ij) / e_{pi_ij} * Y_ij. Ignores interference.
ValueEstimate NaiveValue(const ClusterDataset& dataset,
                         const PolicyAssignment& assignment,
                         const PropensityTable& propensity,
                         const EstimateOptions& options = {});

// Cluster totals weighted by 1(W_i = pi_i) / prod_j e_{pi_ij}.
ValueEstimate IpwValue(const ClusterDataset& dataset,
                       const PolicyAssignment& assignment,
                       const PropensityTable& propensity,
                       const EstimateOptions& options = {});

// Unit outcomes weighted by 1(W_ij = pi_ij, W_bar_i = pi_bar_i) / q_ij.
ValueEstimate FracIpwValue(const ClusterDataset& dataset,
                           const PolicyAssignment& assignment,
                           const PropensityTable& propensity,
                           const EstimateOptions& options = {});

// Cluster totals weighted by BetaWeight. beta is clamped to M_i in clusters
// smaller than beta, where the weight equals the IPW weight.
ValueEstimate BetaIpwValue(const ClusterDataset& dataset,
                           const PolicyAssignment& assignment,
                           const PropensityTable& propensity, std::size_t beta,
                           const EstimateOptions& options = {});

// Weighting function augmented by an outcome model: beta == 0 selects the IPW
// weight, beta >= 1 the beta-IPW weight.
struct AugmentedBase {
  std::size_t beta = 0;
};

// N^-1 sum_i omega_i (Y~_i - g_i) + g_i with given cluster predictions g_i
// (normally cross-fitted).
ValueEstimate AugmentedValue(const ClusterDataset& dataset,
                             const PolicyAssignment& assignment,
                             const PropensityTable& propensity,
                             AugmentedBase base,
                             std::span<const double> predictions,
                             const EstimateOptions& options = {});

}  // namespace qinet

#endif  // QINET_ESTIMATORS_ESTIMATORS_HPP_
