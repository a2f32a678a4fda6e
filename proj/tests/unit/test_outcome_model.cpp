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

#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "core/error.hpp"
#include "estimators/outcome_model.hpp"
#include "simulator/marketplace.hpp"

using namespace qinet;

TEST_CASE("balanced labels with zero covariates give an intercept-only 0.5 model") {
  const std::vector<double> x(2 * 6, 0.0);
  const std::vector<double> labels{0, 1, 0, 1, 1, 0};
  const auto model = FitOutcomeModel(x, 2, labels);
  CHECK(model.converged);
  CHECK_FALSE(model.degenerate);
  CHECK(model.intercept == doctest::Approx(0.0).epsilon(1e-9).scale(1.0));
  const std::vector<double> any{3.0, -2.0};
  CHECK(model.Predict(any) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("single-label data yields a flagged constant model") {
  std::vector<double> x(3 * 20);
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = 0.1 * k;
  const std::vector<double> zeros(20, 0.0);
  const auto model = FitOutcomeModel(x, 3, zeros);
  CHECK(model.degenerate);
  for (double c : model.coefficients) CHECK(c == 0.0);
  const double p = model.Predict(std::vector<double>{1, 1, 1});
  CHECK(p > 0.0);
  CHECK(p < 1e-3);
  const std::vector<double> bad{0, 1, 2, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
  CHECK_THROWS_AS(FitOutcomeModel(x, 3, bad), Error);
}

TEST_CASE("coefficients are recovered within three standard errors") {
  const std::size_t n = 50000, d = 3;
  const std::vector<double> beta{0.8, -1.2, 0.5};
  const double intercept = -0.3;
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(n * d), labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    double eta = intercept;
    for (std::size_t k = 0; k < d; ++k) {
      x[i * d + k] = normal(gen);
      eta += beta[k] * x[i * d + k];
    }
    labels[i] = u(gen) < 1.0 / (1.0 + std::exp(-eta)) ? 1.0 : 0.0;
  }
  const auto model = FitOutcomeModel(x, d, labels);
  REQUIRE(model.converged);

  // Standard errors from the observed information at the fit.
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(d + 1, d + 1);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd row(d + 1);
    row(0) = 1.0;
    for (std::size_t k = 0; k < d; ++k) row(k + 1) = x[i * d + k];
    const double p = model.Predict(std::span<const double>(x.data() + i * d, d));
    info += p * (1 - p) * row * row.transpose();
  }
  const Eigen::MatrixXd cov = info.inverse();
  CHECK(std::abs(model.intercept - intercept) < 3 * std::sqrt(cov(0, 0)));
  for (std::size_t k = 0; k < d; ++k) {
    CHECK(std::abs(model.coefficients[k] - beta[k]) < 3 * std::sqrt(cov(k + 1, k + 1)));
  }

  const auto again = FitOutcomeModel(x, d, labels);
  CHECK(again.intercept == model.intercept);
  CHECK(again.coefficients == model.coefficients);
}

TEST_CASE("separable data stays finite under the ridge") {
  std::vector<double> x, labels;
  for (int i = 0; i < 40; ++i) {
    x.push_back(i < 20 ? -1.0 - i : 1.0 + i);
    labels.push_back(i < 20 ? 0.0 : 1.0);
  }
  const auto model = FitOutcomeModel(x, 1, labels);
  CHECK(std::isfinite(model.intercept));
  CHECK(std::isfinite(model.coefficients[0]));
  CHECK(model.Predict(std::vector<double>{5.0}) > 0.99);
  CHECK(model.Predict(std::vector<double>{-5.0}) < 0.01);
}

TEST_CASE("cross-fitted predictions") {
  sim::SimulatorParams p;
  p.n_buyers = 400;
  p.n_items = 3;
  sim::SampleOmegas(p, 3);
  const auto s = sim::SampleDataset(p, 9);
  const auto a = CrossFitPredictions(s.dataset, Channel::kOutcome, 2, 11);
  const auto b = CrossFitPredictions(s.dataset, Channel::kOutcome, 2, 11);
  REQUIRE(a.predictions.size() == 400);
  CHECK(a.predictions == b.predictions);
  for (double g : a.predictions) CHECK((g > 0.0 && g < 1.0));
  const auto c = CrossFitPredictions(s.dataset, Channel::kOutcome, 2, 12);
  CHECK(c.predictions != a.predictions);
  CHECK_THROWS_AS(CrossFitPredictions(s.dataset, Channel::kOutcome, 1, 11), Error);
  CHECK_THROWS_AS(CrossFitPredictions(s.dataset, Channel::kOutcome, 401, 11), Error);
}
