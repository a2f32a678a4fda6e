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

#include "core/policy.hpp"

#include <cmath>

#include <fmt/format.h>

#include "core/error.hpp"

namespace qinet {

PolicyAssignment::PolicyAssignment(LayoutPtr layout,
                                   std::vector<std::uint8_t> decisions)
    : layout_(std::move(layout)), decisions_(std::move(decisions)) {
  if (!layout_) ThrowInvalidArgument("policy assignment without layout");
  if (decisions_.size() != layout_->num_units()) {
    ThrowInvalidArgument(fmt::format("{} decisions for {} units",
                                     decisions_.size(), layout_->num_units()));
  }
  treated_.assign(layout_->num_clusters(), 0);
  for (std::size_t i = 0; i < layout_->num_clusters(); ++i) {
    std::uint32_t count = 0;
    for (std::size_t u = layout_->begin(i); u < layout_->end(i); ++u) {
      if (decisions_[u] > 1) {
        ThrowInvalidArgument(fmt::format("decision at unit {} is not 0/1", u));
      }
      count += decisions_[u];
    }
    treated_[i] = count;
    total_treated_ += count;
  }
}

PolicyAssignment PolicyAssignment::TreatNone(LayoutPtr layout) {
  const std::size_t n = layout->num_units();
  return PolicyAssignment(std::move(layout), std::vector<std::uint8_t>(n, 0));
}

PolicyAssignment PolicyAssignment::TreatAll(LayoutPtr layout) {
  const std::size_t n = layout->num_units();
  return PolicyAssignment(std::move(layout), std::vector<std::uint8_t>(n, 1));
}

std::vector<double> ScoreUnits(const ScoringRule& rule,
                               const ClusterDataset& dataset) {
  std::vector<double> scores(dataset.num_units());
  const auto& layout = *dataset.layout();
  for (std::size_t i = 0; i < layout.num_clusters(); ++i) {
    for (std::size_t u = layout.begin(i); u < layout.end(i); ++u) {
      const double s = rule(dataset.x(i), dataset.z(u));
      if (!std::isfinite(s)) {
        ThrowNumeric(fmt::format("non-finite score {} at cluster {}, unit {}",
                                 s, i, u - layout.begin(i)));
      }
      scores[u] = s;
    }
  }
  return scores;
}

PolicyAssignment AssignByThreshold(const LayoutPtr& layout,
                                   std::span<const double> scores,
                                   double threshold) {
  if (scores.size() != layout->num_units()) {
    ThrowInvalidArgument(fmt::format("{} scores for {} units", scores.size(),
                                     layout->num_units()));
  }
  std::vector<std::uint8_t> decisions(scores.size());
  for (std::size_t u = 0; u < scores.size(); ++u) {
    if (!std::isfinite(scores[u])) {
      ThrowNumeric(fmt::format("non-finite score at unit {}", u));
    }
    decisions[u] = scores[u] >= threshold ? 1 : 0;
  }
  return PolicyAssignment(layout, std::move(decisions));
}

PolicyAssignment AssignPolicy(const Policy& policy,
                              const ClusterDataset& dataset) {
  const auto scores = ScoreUnits(policy.score, dataset);
  return AssignByThreshold(dataset.layout(), scores, policy.threshold);
}

}  // namespace qinet
