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

#ifndef QINET_CORE_POLICY_HPP_
#define QINET_CORE_POLICY_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "core/dataset.hpp"

namespace qinet {

// S(x, z): larger means the unit is expected to gain more from treatment.
using ScoringRule =
    std::function<double(std::span<const double> x, std::span<const double> z)>;

// Treat a unit iff S(x, z) >= threshold.
struct Policy {
  ScoringRule score;
  double threshold = 0.0;
};

// Materialized per-unit decisions pi_ij of a policy on a cluster layout.
class PolicyAssignment {
 public:
  // decisions has one 0/1 entry per unit of `layout`.
  PolicyAssignment(LayoutPtr layout, std::vector<std::uint8_t> decisions);

  // The reference policy pi_0 = 0 (treat none).
  static PolicyAssignment TreatNone(LayoutPtr layout);
  static PolicyAssignment TreatAll(LayoutPtr layout);

  const LayoutPtr& layout() const { return layout_; }
  std::size_t num_clusters() const { return layout_->num_clusters(); }

  std::uint8_t decision(std::size_t unit) const { return decisions_[unit]; }
  std::span<const std::uint8_t> decisions() const { return decisions_; }
  std::span<const std::uint8_t> cluster_decisions(std::size_t cluster) const {
    return std::span<const std::uint8_t>(decisions_)
        .subspan(layout_->begin(cluster), layout_->size(cluster));
  }

  // Number of policy-treated units in a cluster, i.e. M_i * pi_bar_i.
  std::size_t treated_count(std::size_t cluster) const {
    return treated_[cluster];
  }
  // pi_bar_i = M_i^-1 sum_j pi_ij.
  double treated_fraction(std::size_t cluster) const {
    return static_cast<double>(treated_[cluster]) /
           static_cast<double>(layout_->size(cluster));
  }
  std::size_t total_treated() const { return total_treated_; }

 private:
  LayoutPtr layout_;
  std::vector<std::uint8_t> decisions_;
  std::vector<std::uint32_t> treated_;
  std::size_t total_treated_ = 0;
};

// Evaluates S on every unit. Throws Error(kNumeric) naming the first unit with
// a non-finite score.
std::vector<double> ScoreUnits(const ScoringRule& rule,
                               const ClusterDataset& dataset);

// pi_ij = 1 iff score >= threshold. Scores are per flat unit index.
PolicyAssignment AssignByThreshold(const LayoutPtr& layout,
                                   std::span<const double> scores,
                                   double threshold);

PolicyAssignment AssignPolicy(const Policy& policy,
                              const ClusterDataset& dataset);

}  // namespace qinet

#endif  // QINET_CORE_POLICY_HPP_
