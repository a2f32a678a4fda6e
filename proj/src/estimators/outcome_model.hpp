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

// Cluster-level logistic outcome model g(X) used by the augmented estimators.

#ifndef QINET_ESTIMATORS_OUTCOME_MODEL_HPP_
#define QINET_ESTIMATORS_OUTCOME_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "core/dataset.hpp"
#include "estimators/estimators.hpp"

namespace qinet {

struct SolverSettings {
  double tolerance = 1e-8;  // on the max absolute mean score
  int max_iterations = 100;
  double ridge = 1e-6;  // L2 penalty on every coefficient, intercept included
};

struct OutcomeModel {
  double intercept = 0.0;
  std::vector<double> coefficients;
  bool degenerate = false;  // fitted on a single label: intercept only
  int iterations = 0;
  bool converged = false;

  // Logistic prediction in (0, 1).
  double Predict(std::span<const double> x) const;
};

// Penalized maximum likelihood by damped Newton steps. `x` is row-major with
// labels.size() rows; labels must be 0 or 1.
OutcomeModel FitOutcomeModel(std::span<const double> x, std::size_t x_dim,
                             std::span<const double> labels,
                             const SolverSettings& settings = {});

struct CrossFitResult {
  std::vector<double> predictions;  // one per cluster
  bool degenerate = false;          // some fold saw a single label
};

// Clusters are shuffled with `seed` and dealt into `folds` folds; each
// cluster's prediction comes from the model fitted on the other folds. Cluster
// totals of the channel are the labels and must be binary.
CrossFitResult CrossFitPredictions(const ClusterDataset& dataset, Channel channel,
                                   std::size_t folds, std::uint64_t seed,
                                   const SolverSettings& settings = {});

}  // namespace qinet

#endif  // QINET_ESTIMATORS_OUTCOME_MODEL_HPP_
