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

#include "qini/qini.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "core/error.hpp"
#include "core/random.hpp"

namespace qinet {
namespace {

constexpr double kTieNoiseRelative = 1e-9;
constexpr int kMaxTieBreakAttempts = 64;

void CheckFinite(std::span<const double> scores) {
  for (std::size_t u = 0; u < scores.size(); ++u) {
    if (!std::isfinite(scores[u])) {
      ThrowNumeric(fmt::format("non-finite score at unit {}", u));
    }
  }
}

// True when every score group (equal original scores, in ascending order) is
// strictly below the next group after perturbation.
bool PreservesOrder(std::span<const double> original,
                    std::span<const double> perturbed,
                    const std::vector<std::size_t>& ascending) {
  double group_max = -std::numeric_limits<double>::infinity();
  double previous_group_max = group_max;
  for (std::size_t r = 0; r < ascending.size(); ++r) {
    const std::size_t u = ascending[r];
    if (r > 0 && original[u] != original[ascending[r - 1]]) {
      previous_group_max = group_max;
      group_max = -std::numeric_limits<double>::infinity();
    }
    if (perturbed[u] <= previous_group_max) return false;
    group_max = std::max(group_max, perturbed[u]);
  }
  return true;
}

}  // namespace

std::vector<double> ApplyTieBreak(std::span<const double> scores,
                                  std::uint64_t seed) {
  CheckFinite(scores);
  std::vector<double> perturbed(scores.begin(), scores.end());
  if (scores.empty()) return perturbed;

  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  const double range = *hi - *lo;
  double half_width = range > 0.0 ? kTieNoiseRelative * range : kTieNoiseRelative;
  // Keep the noise resolvable at the magnitude of the scores.
  const double magnitude = std::max(std::abs(*lo), std::abs(*hi));
  half_width = std::max(half_width,
                        8.0 * std::numeric_limits<double>::epsilon() * magnitude);

  std::vector<std::size_t> ascending(scores.size());
  std::iota(ascending.begin(), ascending.end(), 0);
  std::stable_sort(ascending.begin(), ascending.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  Rng rng(seed, Stream::kTieBreak);
  for (int attempt = 0; attempt < kMaxTieBreakAttempts; ++attempt) {
    for (std::size_t u = 0; u < scores.size(); ++u) {
      perturbed[u] = scores[u] + rng.Uniform(-half_width, half_width);
    }
    if (PreservesOrder(scores, perturbed, ascending)) return perturbed;
    half_width *= 0.5;
  }
  ThrowNumeric("tie-break noise could not preserve the score order");
}

std::size_t ThresholdRank(std::size_t k, std::size_t grid_size,
                          std::size_t num_units) {
  if (grid_size == 0) ThrowInvalidArgument("grid size must be positive");
  // round(k * n / K) half away from zero, in exact integer arithmetic.
  const std::size_t rank = (2 * k * num_units + grid_size) / (2 * grid_size);
  return std::max<std::size_t>(rank, 1);
}

PolicyGrid::PolicyGrid(LayoutPtr layout, std::span<const double> scores,
                       std::size_t grid_size, std::uint64_t tie_seed) {
  const std::size_t n = layout->num_units();
  if (scores.size() != n) {
    ThrowInvalidArgument(fmt::format("{} scores for {} units", scores.size(), n));
  }
  if (grid_size < 1) ThrowInvalidArgument("grid size K must be >= 1");
  if (grid_size > n) {
    ThrowInvalidArgument(
        fmt::format("grid size K = {} exceeds the {} units", grid_size, n));
  }
  scores_ = ApplyTieBreak(scores, tie_seed);

  std::vector<std::size_t> descending(n);
  std::iota(descending.begin(), descending.end(), 0);
  std::stable_sort(descending.begin(), descending.end(),
                   [&](std::size_t a, std::size_t b) { return scores_[a] > scores_[b]; });

  policies_.reserve(grid_size + 1);
  policies_.push_back(PolicyAssignment::TreatNone(layout));
  thresholds_.reserve(grid_size);
  for (std::size_t k = 1; k <= grid_size; ++k) {
    const std::size_t rank = ThresholdRank(k, grid_size, n);
    const double threshold = scores_[descending[rank - 1]];
    thresholds_.push_back(threshold);
    policies_.push_back(AssignByThreshold(layout, scores_, threshold));
  }
  if (policies_.back().total_treated() != n) {
    ThrowNumeric("the last grid policy must treat every unit");
  }
}

QiniCurve EvaluateQiniCurve(const PolicyGrid& grid, const ValueFunction& value,
                            const ValueFunction* cost, double max_budget,
                            bool uniform_cost, std::string estimator_id) {
  if (!uniform_cost && (cost == nullptr || !*cost)) {
    ThrowInvalidArgument("a cost estimator is required when cost is not uniform");
  }
  const std::size_t grid_size = grid.grid_size();
  QiniCurve curve;
  curve.estimator_id = std::move(estimator_id);
  curve.grid_size = grid_size;
  curve.uniform_cost = uniform_cost;
  curve.max_budget = max_budget;
  curve.points.reserve(grid_size + 1);
  curve.points.push_back({0.0, 0.0});

  const double reference_value = value(grid.reference());
  for (std::size_t k = 1; k <= grid_size; ++k) {
    const auto& policy = grid.policy(k);
    QiniPoint point;
    point.budget = uniform_cost ? static_cast<double>(k) /
                                      static_cast<double>(grid_size) * max_budget
                                : (*cost)(policy);
    point.qini = value(policy) - reference_value;
    curve.points.push_back(point);
  }
  return curve;
}

QiniCurve EstimateQiniCurve(const LayoutPtr& layout,
                            std::span<const double> scores,
                            const QiniSettings& settings,
                            const ValueFunction& value,
                            const ValueFunction* cost,
                            std::string estimator_id) {
  const PolicyGrid grid(layout, scores, settings.grid_size, settings.tie_seed);
  return EvaluateQiniCurve(grid, value, cost, settings.max_budget,
                           settings.uniform_cost, std::move(estimator_id));
}

double QiniAuc(const QiniCurve& curve) {
  const auto& points = curve.points;
  if (points.size() < 2) ThrowInvalidArgument("AUC needs at least two points");
  if (!(curve.max_budget > 0.0)) ThrowInvalidArgument("max budget must be positive");
  double area = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k) {
    const double width = points[k].budget - points[k - 1].budget;
    if (width < 0.0) {
      ThrowNumeric(fmt::format("budgets decrease between points {} and {}", k - 1, k));
    }
    area += 0.5 * width * (points[k].qini + points[k - 1].qini);
  }
  return area / curve.max_budget;
}

}  // namespace qinet
