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

// Aggregation of raw curves into metric tables and plot-ready panels.
//
// Files written by WriteSummary:
//   calibration.csv   one row per (setting, policy, estimator, metric)
//   auc.csv           mean AUC per (setting, policy, estimator)
//   ranking.csv       mean Kendall tau per (setting, estimator)
//   panel_*.csv       x,estimator_id,mean,stderr,n_buyers,n_items,eta,epsilon
//   report.txt        human-readable tables

#ifndef QINET_EXPERIMENT_REPORT_HPP_
#define QINET_EXPERIMENT_REPORT_HPP_

#include <compare>
#include <filesystem>
#include <string>
#include <vector>

#include "experiment/curve_table.hpp"
#include "metrics/metrics.hpp"

namespace qinet {

struct SettingKey {
  std::size_t n_buyers = 0;
  std::size_t n_items = 0;
  std::string eta;
  auto operator<=>(const SettingKey&) const = default;
};

struct CalibrationEntry {
  SettingKey setting;
  double epsilon = 0.0;
  CalibrationReport report;
};

struct AucEntry {
  SettingKey setting;
  double epsilon = 0.0;
  std::string estimator_id;
  std::size_t repetitions = 0;
  Estimate auc;
};

struct CurveSummaryEntry {
  SettingKey setting;
  double epsilon = 0.0;
  std::string estimator_id;
  std::vector<double> budget;
  PointSummary qini;
};

struct RankingEntry {
  SettingKey setting;
  std::size_t repetitions = 0;
  RankingReport report;
};

struct ExperimentSummary {
  std::vector<CalibrationEntry> calibration;
  std::vector<AucEntry> auc;
  std::vector<CurveSummaryEntry> curves;
  std::vector<RankingEntry> ranking;
};

// Calibration is against the oracle curve of the same repetition; settings
// with two or more policies are also ranked by AUC. Estimator order follows
// first appearance in `records`.
ExperimentSummary Summarize(const std::vector<CurveRecord>& records);

void WriteSummary(const ExperimentSummary& summary, const std::filesystem::path& dir);

// Tables laid out as estimator rows against setting columns.
std::string FormatTables(const ExperimentSummary& summary);

}  // namespace qinet

#endif  // QINET_EXPERIMENT_REPORT_HPP_
