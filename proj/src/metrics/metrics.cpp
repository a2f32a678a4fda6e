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

#include "metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "core/error.hpp"

namespace qinet {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double Mean(std::span<const double> values) {
  long double total = 0.0L;
  for (double v : values) total += v;
  return static_cast<double>(total / static_cast<long double>(values.size()));
}

// Standard error of the mean with the sample standard deviation.
double StandardError(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return kNaN;
  const double mean = Mean(values);
  long double squares = 0.0L;
  for (double v : values) squares += (v - mean) * (v - mean);
  return std::sqrt(static_cast<double>(squares / (n - 1)) / static_cast<double>(n));
}

void CheckRectangular(const CurveMatrix& m, std::size_t columns, const char* what) {
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (m[r].size() != columns) {
      ThrowInvalidArgument(fmt::format("{} row {} has {} points, expected {}", what, r,
                                       m[r].size(), columns));
    }
  }
}

std::vector<std::size_t> OrderDescending(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

CalibrationReport Calibrate(const CurveMatrix& estimates, const CurveMatrix& truth,
                            std::string estimator_id) {
  const std::size_t reps = estimates.size();
  if (reps == 0) ThrowInvalidArgument("calibration needs at least one repetition");
  const std::size_t points = estimates.front().size();
  if (points < 2) ThrowInvalidArgument("curves need at least two points");
  CheckRectangular(estimates, points, "estimate");
  if (truth.size() != 1 && truth.size() != reps) {
    ThrowInvalidArgument(fmt::format("{} truth rows for {} repetitions", truth.size(), reps));
  }
  CheckRectangular(truth, points, "truth (grid mismatch)");

  const std::size_t grid = points - 1;
  CalibrationReport report;
  report.estimator_id = std::move(estimator_id);
  report.repetitions = reps;
  report.grid_size = grid;
  report.bias_by_point.resize(grid);
  report.bias_se_by_point.resize(grid);
  report.variance_by_point.resize(grid);
  report.mse_by_point.resize(grid);

  // errors[k][r] for k = 1..K.
  std::vector<std::vector<double>> errors(grid, std::vector<double>(reps));
  for (std::size_t r = 0; r < reps; ++r) {
    const auto& t = truth.size() == 1 ? truth.front() : truth[r];
    for (std::size_t k = 1; k < points; ++k) {
      errors[k - 1][r] = estimates[r][k] - t[k];
    }
  }

  std::vector<long double> sum(grid), sum_sq(grid);
  for (std::size_t k = 0; k < grid; ++k) {
    for (double e : errors[k]) {
      sum[k] += e;
      sum_sq[k] += static_cast<long double>(e) * e;
    }
    const double bias = static_cast<double>(sum[k] / reps);
    const double mse = static_cast<double>(sum_sq[k] / reps);
    long double centered = 0.0L;
    for (double e : errors[k]) centered += (e - bias) * (e - bias);
    report.bias_by_point[k] = bias;
    report.mse_by_point[k] = mse;
    report.variance_by_point[k] = static_cast<double>(centered / reps);
    report.bias_se_by_point[k] = StandardError(errors[k]);
  }
  report.bias.value = Mean(report.bias_by_point);
  report.variance.value = Mean(report.variance_by_point);
  report.mse.value = Mean(report.mse_by_point);

  // Per-repetition averages over the grid.
  std::vector<double> rep_bias(reps), rep_mse(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    long double b = 0.0L, s = 0.0L;
    for (std::size_t k = 0; k < grid; ++k) {
      b += errors[k][r];
      s += static_cast<long double>(errors[k][r]) * errors[k][r];
    }
    rep_bias[r] = static_cast<double>(b / grid);
    rep_mse[r] = static_cast<double>(s / grid);
  }
  report.bias.standard_error = StandardError(rep_bias);
  report.mse.standard_error = StandardError(rep_mse);

  if (reps < 2) {
    report.variance.standard_error = kNaN;
  } else {
    std::vector<double> leave_out(reps);
    const long double m = static_cast<long double>(reps - 1);
    for (std::size_t r = 0; r < reps; ++r) {
      long double total = 0.0L;
      for (std::size_t k = 0; k < grid; ++k) {
        const long double e = errors[k][r];
        const long double mean = (sum[k] - e) / m;
        total += (sum_sq[k] - e * e) / m - mean * mean;
      }
      leave_out[r] = static_cast<double>(total / grid);
    }
    const double jack_mean = Mean(leave_out);
    long double spread = 0.0L;
    for (double v : leave_out) spread += (v - jack_mean) * (v - jack_mean);
    report.variance.standard_error =
        std::sqrt(static_cast<double>(spread * m / static_cast<long double>(reps)));
  }
  return report;
}

PointSummary SummarizePoints(const CurveMatrix& curves) {
  if (curves.empty()) ThrowInvalidArgument("no curves to summarize");
  const std::size_t points = curves.front().size();
  CheckRectangular(curves, points, "curve");
  PointSummary summary;
  summary.mean.resize(points);
  summary.standard_error.resize(points);
  std::vector<double> column(curves.size());
  for (std::size_t k = 0; k < points; ++k) {
    for (std::size_t r = 0; r < curves.size(); ++r) column[r] = curves[r][k];
    summary.mean[k] = Mean(column);
    summary.standard_error[k] = StandardError(column);
  }
  return summary;
}

double KendallTau(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  if (b.size() != n) ThrowInvalidArgument("Kendall tau inputs differ in length");
  if (n < 2) ThrowInvalidArgument("Kendall tau needs at least 2 items");
  long long concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double da = a[i] - a[j];
      const double db = b[i] - b[j];
      if (da == 0.0) ++ties_a;
      if (db == 0.0) ++ties_b;
      if (da == 0.0 || db == 0.0) continue;
      ((da > 0.0) == (db > 0.0) ? concordant : discordant) += 1;
    }
  }
  const long long pairs = static_cast<long long>(n * (n - 1) / 2);
  const double denominator = std::sqrt(static_cast<double>(pairs - ties_a) *
                                       static_cast<double>(pairs - ties_b));
  if (denominator == 0.0) return 0.0;
  return static_cast<double>(concordant - discordant) / denominator;
}

double KendallTau(const std::map<std::string, double>& a,
                  const std::map<std::string, double>& b) {
  if (a.size() != b.size()) ThrowInvalidArgument("rankings cover different ids");
  std::vector<double> va, vb;
  for (const auto& [id, score] : a) {
    const auto it = b.find(id);
    if (it == b.end()) ThrowInvalidArgument(fmt::format("id '{}' missing from ranking", id));
    va.push_back(score);
    vb.push_back(it->second);
  }
  return KendallTau(va, vb);
}

RankingReport RankPolicies(const std::vector<std::string>& policy_ids,
                           const CurveMatrix& true_auc,
                           const std::map<std::string, CurveMatrix>& estimated_auc) {
  const std::size_t policies = policy_ids.size();
  if (policies < 2) ThrowInvalidArgument("ranking needs at least 2 policies");
  const std::size_t reps = true_auc.size();
  if (reps == 0) ThrowInvalidArgument("ranking needs at least one repetition");
  CheckRectangular(true_auc, policies, "true AUC");

  RankingReport report;
  report.policy_ids = policy_ids;
  const auto column_means = [&](const CurveMatrix& m) {
    std::vector<double> means(policies), column(reps);
    for (std::size_t p = 0; p < policies; ++p) {
      for (std::size_t r = 0; r < reps; ++r) column[r] = m[r][p];
      means[p] = Mean(column);
    }
    return means;
  };
  report.true_auc = column_means(true_auc);
  report.true_order = OrderDescending(report.true_auc);

  for (const auto& [id, matrix] : estimated_auc) {
    if (matrix.size() != reps) {
      ThrowInvalidArgument(fmt::format("estimator {} has {} repetitions, expected {}",
                                       id, matrix.size(), reps));
    }
    CheckRectangular(matrix, policies, "estimated AUC (missing policy curve)");
    EstimatorRanking ranking;
    ranking.estimator_id = id;
    ranking.taus.resize(reps);
    for (std::size_t r = 0; r < reps; ++r) {
      ranking.taus[r] = KendallTau(matrix[r], true_auc[r]);
    }
    ranking.mean_tau = {Mean(ranking.taus), StandardError(ranking.taus)};
    ranking.mean_auc = column_means(matrix);
    ranking.order = OrderDescending(ranking.mean_auc);
    report.estimators.push_back(std::move(ranking));
  }
  return report;
}

}  // namespace qinet
