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

// String ids for estimators: naive, ipw, frac_ipw, beta_ipw:<b>, aug_ipw,
// aug_beta_ipw:<b>. The ids are a stable interface used by configs and CSVs.

#ifndef QINET_ESTIMATORS_REGISTRY_HPP_
#define QINET_ESTIMATORS_REGISTRY_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "core/dataset.hpp"
#include "core/propensity.hpp"
#include "estimators/estimators.hpp"
#include "qini/qini.hpp"

namespace qinet {

enum class EstimatorKind { kNaive, kIpw, kFracIpw, kBetaIpw, kAugIpw, kAugBetaIpw };

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::kIpw;
  std::size_t beta = 0;  // only for the beta variants, >= 1

  // Throws Error(kValidation) on an unknown id or a malformed beta.
  static EstimatorSpec Parse(std::string_view id);
  std::string Id() const;
  bool augmented() const {
    return kind == EstimatorKind::kAugIpw || kind == EstimatorKind::kAugBetaIpw;
  }
  bool operator==(const EstimatorSpec&) const = default;
};

// Binds an estimator to one dataset. The dataset, propensities and
// predictions must outlive the returned function; predictions are required
// exactly for augmented estimators.
ValueFunction MakeValueFunction(const EstimatorSpec& spec,
                                const ClusterDataset& dataset,
                                const PropensityTable& propensity,
                                Channel channel,
                                std::span<const double> predictions = {});

}  // namespace qinet

#endif  // QINET_ESTIMATORS_REGISTRY_HPP_
