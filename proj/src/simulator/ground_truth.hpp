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

#ifndef QINET_SIMULATOR_GROUND_TRUTH_HPP_
#define QINET_SIMULATOR_GROUND_TRUTH_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "core/dataset.hpp"
#include "core/policy.hpp"
#include "qini/qini.hpp"
#include "simulator/params.hpp"

namespace qinet::sim {

// Frozen latent state of one simulated sample: per-unit attractiveness
// components, masks and profits. Policy values computed from it are exact
// conditional on the covariate and mask draw and never touch realized
// treatments or outcomes.
class GroundTruth {
 public:
  GroundTruth(LayoutPtr layout, EtaKind eta, MaskMode mask_mode,
              std::vector<double> base, std::vector<double> increment,
              std::vector<std::uint8_t> mask, std::vector<double> profit);

  const LayoutPtr& layout() const { return layout_; }
  EtaKind eta() const { return eta_; }
  MaskMode mask_mode() const { return mask_mode_; }

  std::span<const double> base() const { return base_; }
  std::span<const double> increment() const { return increment_; }
  std::span<const std::uint8_t> mask() const { return mask_; }
  std::span<const double> profit() const { return profit_; }

  // eta(A_i) with the cluster's units treated according to `decisions`.
  double ClusterPurchaseProbability(std::size_t cluster,
                                    std::span<const std::uint8_t> decisions) const;

 private:
  LayoutPtr layout_;
  EtaKind eta_;
  MaskMode mask_mode_;
  std::vector<double> base_;
  std::vector<double> increment_;
  std::vector<std::uint8_t> mask_;
  std::vector<double> profit_;
};

// V(pi) as a per-cluster mean: N^-1 sum_i eta(A_i(pi_i)). Since a buyer buys
// at most one item, sum_j Y_ij is the purchase indicator and its conditional
// mean is eta. Throws when the assignment is on a different layout.
double TruePolicyValue(const GroundTruth& truth,
                       const PolicyAssignment& assignment);

// Value function wrapper usable wherever an estimator is expected.
ValueFunction OracleValueFunction(const GroundTruth& truth);

// Qini curve with the oracle value in place of an estimate (uniform cost).
QiniCurve TrueQiniCurve(const GroundTruth& truth, std::span<const double> scores,
                        std::size_t grid_size, std::uint64_t tie_seed);

}  // namespace qinet::sim

#endif  // QINET_SIMULATOR_GROUND_TRUTH_HPP_
