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

#include "core/propensity.hpp"

#include <cmath>

#include <fmt/format.h>

#include "core/error.hpp"

namespace qinet {

PropensityModel::PropensityModel(TreatProbability treat_probability)
    : treat_probability_(std::move(treat_probability)) {
  if (!treat_probability_) ThrowInvalidArgument("empty propensity function");
}

PropensityModel PropensityModel::Constant(double treat_probability) {
  return PropensityModel(
      [treat_probability](std::span<const double>) { return treat_probability; });
}

PropensityTable::PropensityTable(const PropensityModel& model,
                                 const ClusterDataset& dataset) {
  e1_.reserve(dataset.num_clusters());
  for (std::size_t i = 0; i < dataset.num_clusters(); ++i) {
    e1_.push_back(model.e1(dataset.x(i)));
  }
  Check();
}

PropensityTable::PropensityTable(std::vector<double> treat_probabilities)
    : e1_(std::move(treat_probabilities)) {
  Check();
}

void PropensityTable::Check() const {
  for (std::size_t i = 0; i < e1_.size(); ++i) {
    const double p = e1_[i];
    if (!std::isfinite(p) || p < kMinPropensity || p > 1.0 - kMinPropensity) {
      ThrowNumeric(fmt::format(
          "positivity violated in cluster {}: e1 = {} outside [{}, 1 - {}]", i,
          p, kMinPropensity, kMinPropensity));
    }
  }
}

}  // namespace qinet
