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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "core/error.hpp"
#include "metrics/metrics.hpp"
#include "oracles/enumeration.hpp"

using namespace qinet;

namespace {

CurveMatrix RandomCurves(std::size_t reps, std::size_t points, std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CurveMatrix m(reps, std::vector<double>(points, 0.0));
  for (auto& row : m) {
    for (std::size_t k = 1; k < points; ++k) row[k] = normal(gen);
  }
  return m;
}

}  // namespace

TEST_CASE("calibration of exact and shifted estimates") {
  const CurveMatrix truth{{0.0, 0.1, 0.3, 0.4}};
  const CurveMatrix exact(5, truth.front());
  auto r = Calibrate(exact, truth, "x");
  CHECK(r.bias.value == 0.0);
  CHECK(r.variance.value == 0.0);
  CHECK(r.mse.value == 0.0);
  CHECK(r.repetitions == 5);
  CHECK(r.grid_size == 3);

  CurveMatrix shifted = exact;
  for (auto& row : shifted) {
    for (std::size_t k = 1; k < row.size(); ++k) row[k] += 0.25;
  }
  r = Calibrate(shifted, truth);
  CHECK(r.bias.value == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(r.variance.value == doctest::Approx(0.0).epsilon(1e-14).scale(1.0));
  CHECK(r.mse.value == doctest::Approx(0.0625).epsilon(1e-14));
}

TEST_CASE("calibration uses the population variance convention") {
  const CurveMatrix truth{{0.0, 1.0, 2.0}};
  const double c = 0.3;
  const CurveMatrix est{{0.0, 1.0 + c, 2.0 + c}, {0.0, 1.0 - c, 2.0 - c}};
  const auto r = Calibrate(est, truth);
  CHECK(r.bias.value == doctest::Approx(0.0).scale(1.0));
  CHECK(r.variance.value == doctest::Approx(c * c).epsilon(1e-14));
  CHECK(r.mse.value == doctest::Approx(c * c).epsilon(1e-14));
}

TEST_CASE("calibration identities on random data") {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto est = RandomCurves(7, 6, gen);
    const auto truth = RandomCurves(1, 6, gen);
    const auto r = Calibrate(est, truth);
    for (std::size_t k = 0; k < r.grid_size; ++k) {
      // mse = bias^2 + variance per point, hence mse >= bias^2.
      CHECK(r.mse_by_point[k] ==
            doctest::Approx(r.bias_by_point[k] * r.bias_by_point[k] + r.variance_by_point[k])
                .epsilon(1e-12));
      CHECK(r.mse_by_point[k] >= r.bias_by_point[k] * r.bias_by_point[k] - 1e-15);
    }
    CHECK(r.mse.value >= 0.0);
    // Repetition order does not matter.
    auto reversed = est;
    std::reverse(reversed.begin(), reversed.end());
    const auto r2 = Calibrate(reversed, truth);
    CHECK(r2.bias.value == doctest::Approx(r.bias.value).epsilon(1e-13));
    CHECK(r2.variance.value == doctest::Approx(r.variance.value).epsilon(1e-13));
    CHECK(r2.mse.value == doctest::Approx(r.mse.value).epsilon(1e-13));
    // Direct evaluation of the bias definition.
    double bias = 0.0;
    for (std::size_t k = 1; k < 6; ++k) {
      for (const auto& row : est) bias += row[k] - truth[0][k];
    }
    CHECK(r.bias.value == doctest::Approx(bias / (5 * 7)).epsilon(1e-12));
  }
}

TEST_CASE("calibration standard errors") {
  // Bias SE is the standard error of per-repetition grid averages.
  const CurveMatrix truth{{0.0, 0.0, 0.0}};
  const CurveMatrix est{{0.0, 1.0, 3.0}, {0.0, 0.0, 0.0}, {0.0, -1.0, 1.0}};
  const auto r = Calibrate(est, truth);
  const std::vector<double> per_rep{2.0, 0.0, 0.0};
  const double mean = 2.0 / 3.0;
  double ss = 0.0;
  for (double v : per_rep) ss += (v - mean) * (v - mean);
  CHECK(r.bias.standard_error == doctest::Approx(std::sqrt(ss / 2.0 / 3.0)).epsilon(1e-13));
  CHECK(r.variance.standard_error >= 0.0);
  const auto single = Calibrate({{0.0, 1.0}}, {{0.0, 0.5}});
  CHECK(std::isnan(single.bias.standard_error));
  CHECK(std::isnan(single.variance.standard_error));
}

TEST_CASE("calibration rejects grid mismatches") {
  CHECK_THROWS_AS(Calibrate({{0, 1, 2}}, {{0, 1}}), Error);
  CHECK_THROWS_AS(Calibrate({{0, 1, 2}, {0, 1}}, {{0, 1, 2}}), Error);
  CHECK_THROWS_AS(Calibrate({{0, 1}, {0, 1}, {0, 1}}, {{0, 1}, {0, 1}}), Error);
  CHECK_THROWS_AS(Calibrate({}, {{0, 1}}), Error);
}

TEST_CASE("per-repetition truth") {
  const CurveMatrix truth{{0.0, 1.0}, {0.0, 2.0}};
  const CurveMatrix est{{0.0, 1.5}, {0.0, 2.5}};
  const auto r = Calibrate(est, truth);
  CHECK(r.bias.value == doctest::Approx(0.5));
  CHECK(r.variance.value == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("point summaries") {
  const auto s = SummarizePoints({{0.0, 1.0}, {0.0, 3.0}});
  CHECK(s.mean[1] == 2.0);
  CHECK(s.standard_error[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Kendall tau examples") {
  const std::vector<double> seven{7, 6, 5, 4, 3, 2, 1};
  std::vector<double> reversed(seven.rbegin(), seven.rend());
  CHECK(KendallTau(seven, seven) == 1.0);
  CHECK(KendallTau(seven, reversed) == -1.0);
  CHECK(KendallTau(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 2}) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(KendallTau(std::vector<double>{1}, std::vector<double>{1}), Error);
  CHECK_THROWS_AS(KendallTau(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), Error);
}

TEST_CASE("Kendall tau without ties matches the pair-count oracle") {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(2 + trial % 9), b(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      a[k] = u(gen);
      b[k] = u(gen);
    }
    const double tau = KendallTau(a, b);
    CHECK(tau == doctest::Approx(oracle::KendallTauA(a, b)).epsilon(1e-14));
    CHECK((tau >= -1.0 && tau <= 1.0));
    std::vector<double> r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = -a[k];
    CHECK(KendallTau(a, r) == -1.0);
  }
}

TEST_CASE("Kendall tau-b with ties") {
  // a has one tie; by hand: n0 = 6, n1 = 1, concordant 5, discordant 0.
  const std::vector<double> a{1, 1, 2, 3}, b{1, 2, 3, 4};
  CHECK(KendallTau(a, b) == doctest::Approx(5.0 / std::sqrt(5.0 * 6.0)).epsilon(1e-14));
  // All tied: defined as zero.
  CHECK(KendallTau(std::vector<double>{2, 2, 2}, std::vector<double>{1, 2, 3}) == 0.0);
}

TEST_CASE("Kendall tau over keyed rankings") {
  const std::map<std::string, double> a{{"p", 3}, {"q", 2}, {"r", 1}};
  const std::map<std::string, double> b{{"p", 0.9}, {"q", 0.1}, {"r", 0.5}};
  CHECK(KendallTau(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  const std::map<std::string, double> c{{"p", 1}, {"q", 2}, {"s", 3}};
  CHECK_THROWS_AS(KendallTau(a, c), Error);
}

TEST_CASE("policy ranking") {
  const std::vector<std::string> ids{"a", "b", "c"};
  const CurveMatrix truth{{0.3, 0.2, 0.1}, {0.31, 0.19, 0.12}};
  std::map<std::string, CurveMatrix> est;
  est["oracle"] = truth;
  est["good"] = {{0.5, 0.4, 0.3}, {0.6, 0.4, 0.1}};
  est["swap"] = {{0.5, 0.4, 0.45}, {0.1, 0.4, 0.3}};
  const auto report = RankPolicies(ids, truth, est);
  CHECK(report.true_order == std::vector<std::size_t>{0, 1, 2});
  for (const auto& e : report.estimators) {
    if (e.estimator_id == "oracle" || e.estimator_id == "good") {
      CHECK(e.mean_tau.value == 1.0);
    }
    if (e.estimator_id == "swap") {
      // Rep 1: (a,c,b) -> 1/3; rep 2: order (b,c,a) -> -1/3.
      REQUIRE(e.taus.size() == 2);
      CHECK(e.taus[0] == doctest::Approx(1.0 / 3.0));
      CHECK(e.taus[1] == doctest::Approx(-1.0 / 3.0));
      CHECK(e.mean_tau.value == doctest::Approx(0.0).scale(1.0));
    }
  }
  est["short"] = {{0.5, 0.4}};
  CHECK_THROWS_AS(RankPolicies(ids, truth, est), Error);
  CHECK_THROWS_AS(RankPolicies({"a"}, {{0.1}}, {}), Error);
}
