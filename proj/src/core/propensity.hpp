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

#ifndef QINET_CORE_PROPENSITY_HPP_
#define QINET_CORE_PROPENSITY_HPP_

#include <functional>
#include <span>
#include <vector>

#include "core/dataset.hpp"

namespace qinet {

// Propensities outside [kMinPropensity, 1 - kMinPropensity] are rejected.
inline constexpr double kMinPropensity = 1e-6;

// Known treatment probability e_1(x) as a function of the cluster covariates
// only, so every unit of a cluster shares it. e_0(x) = 1 - e_1(x).
class PropensityModel {
 public:
  using TreatProbability = std::function<double(std::span<const double>)>;

  explicit PropensityModel(TreatProbability treat_probability);

  static PropensityModel Constant(double treat_probability);

  double e1(std::span<const double> x) const { return treat_probability_(x); }
  double e(int level, std::span<const double> x) const {
    const double p = e1(x);
    return level == 1 ? p : 1.0 - p;
  }

 private:
  TreatProbability treat_probability_;
};

// e_1 evaluated once per cluster of a dataset, with positivity checked.
class PropensityTable {
 public:
  // Throws Error(kNumeric) naming the first cluster outside the positivity
  // bounds.
  PropensityTable(const PropensityModel& model, const ClusterDataset& dataset);
  explicit PropensityTable(std::vector<double> treat_probabilities);

  double e1(std::size_t cluster) const { return e1_[cluster]; }
  double e(int level, std::size_t cluster) const {
    return level == 1 ? e1_[cluster] : 1.0 - e1_[cluster];
  }
  std::size_t size() const { return e1_.size(); }

 private:
  void Check() const;

  std::vector<double> e1_;
};

}  // namespace qinet

#endif  // QINET_CORE_PROPENSITY_HPP_
