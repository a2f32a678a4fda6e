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

#include "estimators/outcome_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "core/error.hpp"
#include "core/random.hpp"

namespace qinet {
namespace {

// Bounds the linear predictor so predictions stay strictly inside (0, 1).
constexpr double kMaxLogit = 30.0;

double Sigmoid(double eta) {
  eta = std::clamp(eta, -kMaxLogit, kMaxLogit);
  return 1.0 / (1.0 + std::exp(-eta));
}

// Mean negative log-likelihood plus the ridge term.
double Objective(const Eigen::MatrixXd& design, const Eigen::VectorXd& labels,
                 const Eigen::VectorXd& beta, double ridge) {
  const Eigen::VectorXd eta = design * beta;
  double loss = 0.0;
  for (Eigen::Index r = 0; r < eta.size(); ++r) {
    // log(1 + exp(eta)) - y * eta, evaluated stably.
    const double e = eta[r];
    loss += (e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e))) -
            labels[r] * e;
  }
  return loss / static_cast<double>(eta.size()) + 0.5 * ridge * beta.squaredNorm();
}

}  // namespace

double OutcomeModel::Predict(std::span<const double> x) const {
  if (x.size() != coefficients.size()) {
    ThrowInvalidArgument(fmt::format("outcome model expects {} covariates, got {}",
                                     coefficients.size(), x.size()));
  }
  double eta = intercept;
  for (std::size_t d = 0; d < x.size(); ++d) eta += coefficients[d] * x[d];
  return Sigmoid(eta);
}

OutcomeModel FitOutcomeModel(std::span<const double> x, std::size_t x_dim,
                             std::span<const double> labels,
                             const SolverSettings& settings) {
  const std::size_t n = labels.size();
  if (n == 0) ThrowInvalidArgument("outcome model needs at least one cluster");
  if (x.size() != n * x_dim) ThrowInvalidArgument("covariate matrix shape mismatch");
  std::size_t positives = 0;
  for (double y : labels) {
    if (y != 0.0 && y != 1.0) {
      ThrowValidation(fmt::format("logistic outcome model needs 0/1 labels, got {}", y));
    }
    positives += y == 1.0;
  }

  OutcomeModel model;
  model.coefficients.assign(x_dim, 0.0);
  model.degenerate = positives == 0 || positives == n;

  // Intercept-only design when the labels carry no contrast.
  const std::size_t p = model.degenerate ? 1 : x_dim + 1;
  Eigen::MatrixXd design(n, p);
  design.col(0).setOnes();
  if (!model.degenerate) {
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t d = 0; d < x_dim; ++d) design(r, d + 1) = x[r * x_dim + d];
    }
  }
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(labels.data(), n);
  const double inv_n = 1.0 / static_cast<double>(n);

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double objective = Objective(design, y, beta, settings.ridge);
  for (int iteration = 0; iteration < settings.max_iterations; ++iteration) {
    Eigen::VectorXd prob(n);
    const Eigen::VectorXd eta = design * beta;
    for (std::size_t r = 0; r < n; ++r) prob[r] = Sigmoid(eta[r]);
    const Eigen::VectorXd score =
        design.transpose() * (y - prob) * inv_n - settings.ridge * beta;
    model.iterations = iteration;
    if (score.cwiseAbs().maxCoeff() < settings.tolerance) {
      model.converged = true;
      break;
    }
    const Eigen::VectorXd curvature = (prob.array() * (1.0 - prob.array())).matrix();
    Eigen::MatrixXd hessian =
        design.transpose() * curvature.asDiagonal() * design * inv_n;
    hessian.diagonal().array() += settings.ridge;
    const Eigen::VectorXd step = hessian.ldlt().solve(score);

    // Halve the step until the penalized objective does not increase.
    double scale = 1.0;
    Eigen::VectorXd candidate = beta + step;
    double candidate_objective = Objective(design, y, candidate, settings.ridge);
    for (int halving = 0; halving < 30 && candidate_objective > objective; ++halving) {
      scale *= 0.5;
      candidate = beta + scale * step;
      candidate_objective = Objective(design, y, candidate, settings.ridge);
    }
    beta = candidate;
    objective = candidate_objective;
    model.iterations = iteration + 1;
  }

  model.intercept = beta[0];
  if (!model.degenerate) {
    for (std::size_t d = 0; d < x_dim; ++d) model.coefficients[d] = beta[d + 1];
  }
  return model;
}

CrossFitResult CrossFitPredictions(const ClusterDataset& dataset, Channel channel,
                                   std::size_t folds, std::uint64_t seed,
                                   const SolverSettings& settings) {
  const std::size_t n = dataset.num_clusters();
  if (folds < 2) ThrowInvalidArgument("cross-fitting needs at least 2 folds");
  if (folds > n) {
    ThrowInvalidArgument(fmt::format("{} folds for {} clusters", folds, n));
  }
  const std::size_t x_dim = dataset.x_dim();
  const auto target = channel == Channel::kOutcome ? dataset.outcomes() : dataset.costs();
  const auto& layout = *dataset.layout();

  std::vector<double> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    long double total = 0.0L;
    for (std::size_t u = layout.begin(i); u < layout.end(i); ++u) total += target[u];
    labels[i] = static_cast<double>(total);
  }

  // Seeded Fisher-Yates shuffle, then round-robin fold assignment.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed, Stream::kCrossFit);
  for (std::size_t r = n - 1; r > 0; --r) std::swap(order[r], order[rng.Below(r + 1)]);
  std::vector<std::size_t> fold_of(n);
  for (std::size_t r = 0; r < n; ++r) fold_of[order[r]] = r % folds;

  CrossFitResult result;
  result.predictions.assign(n, 0.0);
  std::vector<double> train_x;
  std::vector<double> train_y;
  for (std::size_t f = 0; f < folds; ++f) {
    train_x.clear();
    train_y.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (fold_of[i] == f) continue;
      const auto xi = dataset.x(i);
      train_x.insert(train_x.end(), xi.begin(), xi.end());
      train_y.push_back(labels[i]);
    }
    const OutcomeModel model = FitOutcomeModel(train_x, x_dim, train_y, settings);
    result.degenerate = result.degenerate || model.degenerate;
    for (std::size_t i = 0; i < n; ++i) {
      if (fold_of[i] == f) result.predictions[i] = model.Predict(dataset.x(i));
    }
  }
  return result;
}

}  // namespace qinet
