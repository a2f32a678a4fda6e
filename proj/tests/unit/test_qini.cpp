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
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "core/error.hpp"
#include "oracles/enumeration.hpp"
#include "qini/qini.hpp"
#include "simulator/ground_truth.hpp"
#include "simulator/marketplace.hpp"

using namespace qinet;

namespace {

LayoutPtr Uniform(std::size_t n, std::size_t m) {
  return std::make_shared<const ClusterLayout>(ClusterLayout::Uniform(n, m));
}

std::vector<double> RandomScores(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> s(n);
  for (double& v : s) v = u(gen);
  return s;
}

QiniCurve Curve(std::vector<QiniPoint> points) {
  QiniCurve c;
  c.points = std::move(points);
  c.grid_size = c.points.size() - 1;
  return c;
}

// Counts treated units of a value function's argument.
ValueFunction TreatedCount() {
  return [](const PolicyAssignment& a) { return static_cast<double>(a.total_treated()); };
}

}  // namespace

TEST_CASE("threshold rank rounds half away from zero and clamps at one") {
  CHECK(ThresholdRank(1, 4, 2) == 1);   // 0.5
  CHECK(ThresholdRank(3, 4, 2) == 2);   // 1.5
  CHECK(ThresholdRank(5, 8, 4) == 3);   // 2.5
  CHECK(ThresholdRank(1, 10, 4) == 1);  // 0.4 rounds to 0, clamped
  CHECK(ThresholdRank(7, 7, 9) == 9);
  for (std::size_t n = 1; n < 40; ++n) {
    for (std::size_t grid = 1; grid <= n; ++grid) {
      for (std::size_t k = 1; k <= grid; ++k) {
        const double exact = static_cast<double>(k) * n / grid;
        const auto expected = std::max<long>(1, std::lround(exact));
        CHECK(ThresholdRank(k, grid, n) == static_cast<std::size_t>(expected));
      }
    }
  }
}

TEST_CASE("K = |D| walks one unit at a time") {
  const auto layout = Uniform(4, 3);
  const auto scores = RandomScores(12, 1);
  const PolicyGrid grid(layout, scores, 12, 0);
  CHECK(grid.reference().total_treated() == 0);
  for (std::size_t k = 1; k <= 12; ++k) CHECK(grid.policy(k).total_treated() == k);
}

TEST_CASE("curve starts at the origin and k = K treats everyone") {
  const auto layout = Uniform(5, 2);
  QiniSettings settings;
  settings.grid_size = 5;
  settings.max_budget = 2.0;
  const auto curve = EstimateQiniCurve(layout, RandomScores(10, 2), settings, TreatedCount());
  REQUIRE(curve.points.size() == 6);
  CHECK(curve.points[0].budget == 0.0);
  CHECK(curve.points[0].qini == 0.0);
  CHECK(curve.points[5].qini == 10.0);
  for (std::size_t k = 1; k <= 5; ++k) {
    CHECK(curve.points[k].budget == doctest::Approx(0.4 * k).epsilon(1e-15));
    CHECK(curve.points[k].qini == 2.0 * k);
  }
}

TEST_CASE("input validation") {
  const auto layout = Uniform(2, 2);
  QiniSettings settings;
  settings.grid_size = 5;
  CHECK_THROWS_AS(EstimateQiniCurve(layout, RandomScores(4, 1), settings, TreatedCount()), Error);
  settings.grid_size = 0;
  CHECK_THROWS_AS(EstimateQiniCurve(layout, RandomScores(4, 1), settings, TreatedCount()), Error);
  settings.grid_size = 2;
  auto bad = RandomScores(4, 1);
  bad[2] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(EstimateQiniCurve(layout, bad, settings, TreatedCount()), Error);
  settings.uniform_cost = false;
  CHECK_THROWS_AS(EstimateQiniCurve(layout, RandomScores(4, 1), settings, TreatedCount()), Error);
}

TEST_CASE("tie break keeps distinct orderings and resolves ties by seed") {
  const auto scores = RandomScores(1000, 3);
  const auto broken = ApplyTieBreak(scores, 17);
  std::vector<std::size_t> a(1000), b(1000);
  std::iota(a.begin(), a.end(), 0);
  std::iota(b.begin(), b.end(), 0);
  std::sort(a.begin(), a.end(), [&](auto i, auto j) { return scores[i] < scores[j]; });
  std::sort(b.begin(), b.end(), [&](auto i, auto j) { return broken[i] < broken[j]; });
  CHECK(a == b);
  CHECK(ApplyTieBreak(scores, 17) == broken);

  const std::vector<double> flat(50, 2.0);
  const auto t1 = ApplyTieBreak(flat, 1);
  const auto t2 = ApplyTieBreak(flat, 2);
  CHECK(std::set<double>(t1.begin(), t1.end()).size() == 50);
  CHECK(t1 != t2);
  CHECK(ApplyTieBreak(flat, 1) == t1);
}

TEST_CASE("random targeting with identical units is linear in k") {
  const std::size_t n = 60;
  const auto layout = Uniform(n, 1);
  const sim::GroundTruth truth(layout, sim::EtaKind::kMax, sim::MaskMode::kIncrement,
                               std::vector<double>(n, 0.2), std::vector<double>(n, 0.3),
                               std::vector<std::uint8_t>(n, 1), std::vector<double>(n, 1.0));
  const auto curve = sim::TrueQiniCurve(truth, std::vector<double>(n, 1.0), 6, 4);
  for (std::size_t k = 0; k <= 6; ++k) {
    CHECK(curve.points[k].qini == doctest::Approx(0.3 * k / 6.0).epsilon(1e-12));
  }
}

TEST_CASE("oracle curve matches a direct threshold computation") {
  sim::SimulatorParams p;
  p.n_buyers = 300;
  p.n_items = 4;
  sim::SampleOmegas(p, 5);
  const auto s = sim::SampleDataset(p, 6);
  const auto scores = sim::BaselineScores(s.truth);
  const auto curve = sim::TrueQiniCurve(s.truth, scores, 10, 9);

  // Distinct scores: sorting the raw scores gives the same thresholds.
  std::vector<double> sorted = scores;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const std::size_t n = scores.size();
  const double v0 = sim::TruePolicyValue(s.truth, PolicyAssignment::TreatNone(s.dataset.layout()));
  for (std::size_t k = 1; k <= 10; ++k) {
    const std::size_t rank = std::max<std::size_t>(1, std::lround(k * n / 10.0));
    std::vector<std::uint8_t> decisions(n);
    for (std::size_t u = 0; u < n; ++u) decisions[u] = scores[u] >= sorted[rank - 1];
    const PolicyAssignment a(s.dataset.layout(), decisions);
    CHECK(curve.points[k].qini ==
          doctest::Approx(sim::TruePolicyValue(s.truth, a) - v0).epsilon(1e-12));
  }
}

TEST_CASE("oracle curve is invariant to monotone score transforms") {
  sim::SimulatorParams p;
  p.n_buyers = 200;
  p.n_items = 3;
  sim::SampleOmegas(p, 7);
  const auto s = sim::SampleDataset(p, 8);
  const auto scores = RandomScores(600, 9);
  std::vector<double> transformed(600);
  for (std::size_t u = 0; u < 600; ++u) transformed[u] = std::exp(3.0 * scores[u]) - 5.0;
  const auto a = sim::TrueQiniCurve(s.truth, scores, 10, 1);
  const auto b = sim::TrueQiniCurve(s.truth, transformed, 10, 1);
  for (std::size_t k = 0; k <= 10; ++k) CHECK(a.points[k].qini == b.points[k].qini);
}

TEST_CASE("doubling K refines the grid") {
  const auto layout = Uniform(25, 4);
  const auto scores = RandomScores(100, 10);
  const PolicyGrid coarse(layout, scores, 5, 2);
  const PolicyGrid fine(layout, scores, 10, 2);
  for (std::size_t k = 1; k <= 5; ++k) {
    bool found = false;
    for (std::size_t f = 1; f <= 10; ++f) {
      const auto da = coarse.policy(k).decisions();
      const auto db = fine.policy(f).decisions();
      if (std::equal(da.begin(), da.end(), db.begin(), db.end())) found = true;
    }
    CHECK(found);
  }
}

TEST_CASE("non-uniform cost uses the cost estimator, unsorted") {
  const auto layout = Uniform(3, 2);
  QiniSettings settings;
  settings.grid_size = 3;
  settings.uniform_cost = false;
  int calls = 0;
  const ValueFunction cost = [&](const PolicyAssignment& a) {
    ++calls;
    // Deliberately non-monotone.
    return a.total_treated() == 4 ? 1.0 : static_cast<double>(a.total_treated());
  };
  const auto curve = EstimateQiniCurve(layout, RandomScores(6, 1), settings, TreatedCount(), &cost);
  CHECK(calls == 3);
  CHECK(curve.points[1].budget == 2.0);
  CHECK(curve.points[2].budget == 1.0);
  CHECK(curve.points[3].budget == 6.0);
  CHECK_FALSE(curve.uniform_cost);
  CHECK_THROWS_AS(QiniAuc(curve), Error);
}

TEST_CASE("area under the curve") {
  CHECK(QiniAuc(Curve({{0, 0}, {1, 0}})) == 0.0);
  CHECK(QiniAuc(Curve({{0, 0}, {1, 1}})) == 0.5);
  CHECK(QiniAuc(Curve({{0, 0}, {0.5, 1}, {1, 1}})) == 0.75);
  auto scaled = Curve({{0, 0}, {2, 2}});
  scaled.max_budget = 2.0;
  CHECK(QiniAuc(scaled) == 1.0);
  CHECK_THROWS_AS(QiniAuc(Curve({{0, 0}})), Error);

  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<QiniPoint> pts{{0, 0}};
    std::vector<double> x{0}, y{0};
    for (int k = 1; k <= 10; ++k) {
      pts.push_back({k / 10.0, u(gen)});
      x.push_back(pts.back().budget);
      y.push_back(pts.back().qini);
    }
    CHECK(QiniAuc(Curve(pts)) == doctest::Approx(oracle::Trapezoid(x, y)).epsilon(1e-13));
  }
}
