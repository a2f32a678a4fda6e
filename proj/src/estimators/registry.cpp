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

#include "estimators/registry.hpp"

#include <charconv>

#include <fmt/format.h>

#include "core/error.hpp"

namespace qinet {
namespace {

std::size_t ParseBeta(std::string_view id, std::string_view digits) {
  std::size_t beta = 0;
  const auto* end = digits.data() + digits.size();
  const auto [ptr, ec] = std::from_chars(digits.data(), end, beta);
  if (digits.empty() || ec != std::errc() || ptr != end || beta < 1) {
    ThrowValidation(fmt::format("estimator '{}': beta must be an integer >= 1", id));
  }
  return beta;
}

}  // namespace

EstimatorSpec EstimatorSpec::Parse(std::string_view id) {
  if (id == "naive") return {EstimatorKind::kNaive, 0};
  if (id == "ipw") return {EstimatorKind::kIpw, 0};
  if (id == "frac_ipw") return {EstimatorKind::kFracIpw, 0};
  if (id == "aug_ipw") return {EstimatorKind::kAugIpw, 0};
  constexpr std::string_view kBeta = "beta_ipw:";
  constexpr std::string_view kAugBeta = "aug_beta_ipw:";
  if (id.starts_with(kBeta)) {
    return {EstimatorKind::kBetaIpw, ParseBeta(id, id.substr(kBeta.size()))};
  }
  if (id.starts_with(kAugBeta)) {
    return {EstimatorKind::kAugBetaIpw, ParseBeta(id, id.substr(kAugBeta.size()))};
  }
  ThrowValidation(fmt::format("unknown estimator id '{}'", id));
}

std::string EstimatorSpec::Id() const {
  switch (kind) {
    case EstimatorKind::kNaive: return "naive";
    case EstimatorKind::kIpw: return "ipw";
    case EstimatorKind::kFracIpw: return "frac_ipw";
    case EstimatorKind::kBetaIpw: return fmt::format("beta_ipw:{}", beta);
    case EstimatorKind::kAugIpw: return "aug_ipw";
    case EstimatorKind::kAugBetaIpw: return fmt::format("aug_beta_ipw:{}", beta);
  }
  return "";
}

ValueFunction MakeValueFunction(const EstimatorSpec& spec,
                                const ClusterDataset& dataset,
                                const PropensityTable& propensity,
                                Channel channel,
                                std::span<const double> predictions) {
  if (spec.augmented() && predictions.size() != dataset.num_clusters()) {
    ThrowInvalidArgument(
        fmt::format("estimator {} needs one prediction per cluster", spec.Id()));
  }
  const EstimateOptions options{channel, false};
  const ClusterDataset* ds = &dataset;
  const PropensityTable* table = &propensity;
  switch (spec.kind) {
    case EstimatorKind::kNaive:
      return [=](const PolicyAssignment& a) { return NaiveValue(*ds, a, *table, options).value; };
    case EstimatorKind::kIpw:
      return [=](const PolicyAssignment& a) { return IpwValue(*ds, a, *table, options).value; };
    case EstimatorKind::kFracIpw:
      return [=](const PolicyAssignment& a) {
        return FracIpwValue(*ds, a, *table, options).value;
      };
    case EstimatorKind::kBetaIpw: {
      const std::size_t beta = spec.beta;
      return [=](const PolicyAssignment& a) {
        return BetaIpwValue(*ds, a, *table, beta, options).value;
      };
    }
    case EstimatorKind::kAugIpw:
    case EstimatorKind::kAugBetaIpw: {
      const AugmentedBase base{spec.kind == EstimatorKind::kAugIpw ? 0 : spec.beta};
      return [=](const PolicyAssignment& a) {
        return AugmentedValue(*ds, a, *table, base, predictions, options).value;
      };
    }
  }
  ThrowInvalidArgument("unhandled estimator kind");
}

}  // namespace qinet
