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

// Aggregation of repeated Qini estimates: calibration (bias, variance, MSE)
// and discrimination (AUC ranking, Kendall rank correlation).
//
// Conventions: curves are R x (K + 1) matrices of qini values with point 0
// excluded from every average; variances divide by R, so that per point
// mse = bias^2 + variance exactly.

#ifndef QINET_METRICS_METRICS_HPP_
#define QINET_METRICS_METRICS_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace qinet {

// Row r holds repetition r; column k holds grid point k.
using CurveMatrix = std::vector<std::vector<double>>;

struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;  // NaN with fewer than 2 repetitions
};

struct CalibrationReport {
  std::string estimator_id;
  std::size_t repetitions = 0;
  std::size_t grid_size = 0;
  Estimate bias;
  Estimate variance;
  Estimate mse;
  // Per grid point k = 1..K (index k - 1).
  std::vector<double> bias_by_point;
  std::vector<double> bias_se_by_point;
  std::vector<double> variance_by_point;
  std::vector<double> mse_by_point;
};

// `truth` has either one row shared by all repetitions or one row per
// repetition. Variance is taken over the errors Q^_rk - Q_rk, which reduces to
// the variance of Q^_k when the truth is shared.
//
// Standard errors: bias and mse use the across-repetition standard error of
// the per-repetition averages; variance uses the delete-one jackknife.
CalibrationReport Calibrate(const CurveMatrix& estimates, const CurveMatrix& truth,
                            std::string estimator_id = "");

// Pointwise mean and standard error of the mean over repetitions.
struct PointSummary {
  std::vector<double> mean;
  std::vector<double> standard_error;
};
PointSummary SummarizePoints(const CurveMatrix& curves);

// Kendall tau-b of two score vectors over the same items; 0 when either side
// is constant. Throws for fewer than 2 items.
double KendallTau(std::span<const double> a, std::span<const double> b);
// Same over id-keyed scores; the id sets must match.
double KendallTau(const std::map<std::string, double>& a,
                  const std::map<std::string, double>& b);

struct EstimatorRanking {
  std::string estimator_id;
  std::vector<double> taus;  // one per repetition
  Estimate mean_tau;
  std::vector<double> mean_auc;    // per policy
  std::vector<std::size_t> order;  // policies by mean AUC, best first
};

struct RankingReport {
  std::vector<std::string> policy_ids;
  std::vector<double> true_auc;  // per policy, mean over repetitions
  std::vector<std::size_t> true_order;
  std::vector<EstimatorRanking> estimators;
};

// true_auc and every estimated matrix are R x P (repetition x policy). Each
// repetition's estimated AUCs are ranked against that repetition's truth.
RankingReport RankPolicies(const std::vector<std::string>& policy_ids,
                           const CurveMatrix& true_auc,
                           const std::map<std::string, CurveMatrix>& estimated_auc);

}  // namespace qinet

#endif  // QINET_METRICS_METRICS_HPP_
