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

#include "estimators/estimators.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "core/error.hpp"
#include "estimators/weights.hpp"

namespace qinet {
namespace {

void CheckInputs(const ClusterDataset& dataset,
                 const PolicyAssignment& assignment,
                 const PropensityTable& propensity) {
  if (!SameLayout(dataset.layout(), assignment.layout())) {
    ThrowInvalidArgument("policy assignment does not match the dataset");
  }
  if (propensity.size() != dataset.num_clusters()) {
    ThrowInvalidArgument(fmt::format("{} propensities for {} clusters",
                                     propensity.size(), dataset.num_clusters()));
  }
  for (std::size_t i = 0; i < propensity.size(); ++i) {
    const double e1 = propensity.e1(i);
    if (!(e1 >= kMinPropensity && e1 <= 1.0 - kMinPropensity)) {
      ThrowNumeric(fmt::format("propensity {} in cluster {} violates positivity",
                               e1, i));
    }
  }
}

std::span<const double> Target(const ClusterDataset& dataset, Channel channel) {
  return channel == Channel::kOutcome ? dataset.outcomes() : dataset.costs();
}

double ClusterTotal(std::span<const double> target, const ClusterLayout& layout,
                    std::size_t cluster) {
  long double total = 0.0L;
  for (std::size_t u = layout.begin(cluster); u < layout.end(cluster); ++u) {
    total += target[u];
  }
  return static_cast<double>(total);
}

// Averages contribution(i) over clusters in extended precision.
template <typename Contribution>
ValueEstimate Average(const ClusterDataset& dataset, std::string id,
                      const EstimateOptions& options,
                      Contribution&& contribution) {
  const std::size_t n = dataset.num_clusters();
  ValueEstimate estimate;
  estimate.estimator_id = std::move(id);
  if (options.keep_contributions) estimate.contributions.emplace(n);
  long double total = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const double term = contribution(i);
    total += term;
    if (estimate.contributions) (*estimate.contributions)[i] = term;
  }
  estimate.value = static_cast<double>(total / static_cast<long double>(n));
  return estimate;
}

std::span<const std::uint8_t> ClusterTreatments(const ClusterDataset& dataset,
                                                std::size_t cluster) {
  return dataset.treatments().subspan(dataset.layout()->begin(cluster),
                                      dataset.cluster_size(cluster));
}

}  // namespace

ValueEstimate NaiveValue(const ClusterDataset& dataset,
                         const PolicyAssignment& assignment,
                         const PropensityTable& propensity,
                         const EstimateOptions& options) {
  CheckInputs(dataset, assignment, propensity);
  const auto target = Target(dataset, options.channel);
  const auto& layout = *dataset.layout();
  return Average(dataset, "naive", options, [&](std::size_t i) {
    long double total = 0.0L;
    for (std::size_t u = layout.begin(i); u < layout.end(i); ++u) {
      const int pi = assignment.decision(u);
      if (dataset.w(u) != pi) continue;
      total += target[u] / propensity.e(pi, i);
    }
    return static_cast<double>(total);
  });
}

ValueEstimate IpwValue(const ClusterDataset& dataset,
                       const PolicyAssignment& assignment,
                       const PropensityTable& propensity,
                       const EstimateOptions& options) {
  CheckInputs(dataset, assignment, propensity);
  const auto target = Target(dataset, options.channel);
  const auto& layout = *dataset.layout();
  return Average(dataset, "ipw", options, [&](std::size_t i) {
    const double weight =
        IpwClusterWeight(ClusterTreatments(dataset, i),
                         assignment.cluster_decisions(i), propensity.e1(i));
    return weight == 0.0 ? 0.0 : weight * ClusterTotal(target, layout, i);
  });
}

ValueEstimate FracIpwValue(const ClusterDataset& dataset,
                           const PolicyAssignment& assignment,
                           const PropensityTable& propensity,
                           const EstimateOptions& options) {
  CheckInputs(dataset, assignment, propensity);
  const auto target = Target(dataset, options.channel);
  const auto& layout = *dataset.layout();
  return Average(dataset, "frac_ipw", options, [&](std::size_t i) {
    const std::size_t m = layout.size(i);
    const std::size_t policy_treated = assignment.treated_count(i);
    std::size_t observed_treated = 0;
    for (std::size_t u = layout.begin(i); u < layout.end(i); ++u) {
      observed_treated += dataset.w(u);
    }
    if (observed_treated != policy_treated) return 0.0;
    long double total = 0.0L;
    for (std::size_t u = layout.begin(i); u < layout.end(i); ++u) {
      const int pi = assignment.decision(u);
      if (dataset.w(u) != pi) continue;
      total += target[u] / QWeightFromCount(pi, policy_treated, m, propensity.e1(i));
    }
    return static_cast<double>(total);
  });
}

ValueEstimate BetaIpwValue(const ClusterDataset& dataset,
                           const PolicyAssignment& assignment,
                           const PropensityTable& propensity, std::size_t beta,
                           const EstimateOptions& options) {
  if (beta < 1) ThrowInvalidArgument("beta must be >= 1");
  CheckInputs(dataset, assignment, propensity);
  const auto target = Target(dataset, options.channel);
  const auto& layout = *dataset.layout();
  return Average(dataset, fmt::format("beta_ipw:{}", beta), options,
                 [&](std::size_t i) {
                   const double total = ClusterTotal(target, layout, i);
                   if (total == 0.0) return 0.0;
                   const double weight = BetaWeight(
                       ClusterTreatments(dataset, i), assignment.cluster_decisions(i),
                       propensity.e1(i), std::min(beta, layout.size(i)));
                   return weight * total;
                 });
}

ValueEstimate AugmentedValue(const ClusterDataset& dataset,
                             const PolicyAssignment& assignment,
                             const PropensityTable& propensity,
                             AugmentedBase base,
                             std::span<const double> predictions,
                             const EstimateOptions& options) {
  CheckInputs(dataset, assignment, propensity);
  if (predictions.size() != dataset.num_clusters()) {
    ThrowInvalidArgument(fmt::format("{} predictions for {} clusters",
                                     predictions.size(), dataset.num_clusters()));
  }
  const auto target = Target(dataset, options.channel);
  const auto& layout = *dataset.layout();
  const std::string id =
      base.beta == 0 ? "aug_ipw" : fmt::format("aug_beta_ipw:{}", base.beta);
  return Average(dataset, id, options, [&](std::size_t i) {
    const auto w = ClusterTreatments(dataset, i);
    const auto pi = assignment.cluster_decisions(i);
    const double weight =
        base.beta == 0
            ? IpwClusterWeight(w, pi, propensity.e1(i))
            : BetaWeight(w, pi, propensity.e1(i), std::min(base.beta, layout.size(i)));
    const double g = predictions[i];
    return weight * (ClusterTotal(target, layout, i) - g) + g;
  });
}

}  // namespace qinet
