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

// Qini curve estimation by a threshold sweep over a scoring rule.
//
// Units are sorted by score, descending. For k = 1..K the k-th policy treats
// every unit scoring at least the score of the i_k-th sorted unit, where
// i_k = round(k / K * |D|) (half away from zero, clamped to >= 1). The curve
// point is (budget_k, value(policy_k) - value(treat none)), preceded by (0, 0).

#ifndef QINET_QINI_QINI_HPP_
#define QINET_QINI_QINI_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/policy.hpp"

namespace qinet {

using ValueFunction = std::function<double(const PolicyAssignment&)>;

struct QiniPoint {
  double budget = 0.0;
  double qini = 0.0;
};

struct QiniCurve {
  std::vector<QiniPoint> points;  // K + 1 points, points[0] == (0, 0)
  std::string estimator_id;
  std::size_t grid_size = 0;
  bool uniform_cost = true;
  double max_budget = 1.0;
};

// Adds seeded uniform noise of half-width 1e-9 * (max - min), or 1e-9 when all
// scores are equal. Originally distinct scores keep their order: the noise is
// shrunk and redrawn until that holds.
std::vector<double> ApplyTieBreak(std::span<const double> scores,
                                  std::uint64_t seed);

// 1-based rank i_k of the threshold unit for grid step k of K over n units.
std::size_t ThresholdRank(std::size_t k, std::size_t grid_size,
                          std::size_t num_units);

// The K + 1 policies of a sweep: the reference policy followed by the K
// threshold policies. Built once and shared by every estimator.
class PolicyGrid {
 public:
  PolicyGrid(LayoutPtr layout, std::span<const double> scores,
             std::size_t grid_size, std::uint64_t tie_seed);

  std::size_t grid_size() const { return thresholds_.size(); }
  const PolicyAssignment& reference() const { return policies_.front(); }
  // k in [1, K].
  const PolicyAssignment& policy(std::size_t k) const { return policies_[k]; }
  double threshold(std::size_t k) const { return thresholds_[k - 1]; }
  std::span<const double> tie_broken_scores() const { return scores_; }

 private:
  std::vector<double> scores_;
  std::vector<double> thresholds_;
  std::vector<PolicyAssignment> policies_;
};

struct QiniSettings {
  std::size_t grid_size = 10;
  double max_budget = 1.0;
  bool uniform_cost = true;
  std::uint64_t tie_seed = 0;
};

// `cost` is required when the cost is not uniform; budgets are then the
// estimated policy costs, reported as-is even if they are not monotone.
QiniCurve EvaluateQiniCurve(const PolicyGrid& grid, const ValueFunction& value,
                            const ValueFunction* cost, double max_budget,
                            bool uniform_cost, std::string estimator_id);

QiniCurve EstimateQiniCurve(const LayoutPtr& layout,
                            std::span<const double> scores,
                            const QiniSettings& settings,
                            const ValueFunction& value,
                            const ValueFunction* cost = nullptr,
                            std::string estimator_id = "");

// Trapezoidal area under the curve over the budget axis, divided by the
// curve's max_budget. Throws when budgets decrease.
double QiniAuc(const QiniCurve& curve);

}  // namespace qinet

#endif  // QINET_QINI_QINI_HPP_
