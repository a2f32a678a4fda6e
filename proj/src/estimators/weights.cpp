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

#include "estimators/weights.hpp"

#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "core/error.hpp"

namespace qinet {
namespace {

void CheckCluster(std::span<const std::uint8_t> w,
                  std::span<const std::uint8_t> pi, double e1) {
  if (w.size() != pi.size()) {
    ThrowInvalidArgument("treatment and decision vectors differ in length");
  }
  if (!(e1 >= kMinPropensity && e1 <= 1.0 - kMinPropensity)) {
    ThrowNumeric(fmt::format("propensity {} violates positivity", e1));
  }
}

// P(Binomial(m, e1) = k).
long double BinomialPmf(std::size_t k, std::size_t m, double e1) {
  const long double p = e1;
  const long double q = 1.0L - p;
  if (m <= 64) {
    // C(m, k) exactly, then the powers; no overflow in this range.
    long double choose = 1.0L;
    const std::size_t r = std::min(k, m - k);
    for (std::size_t t = 1; t <= r; ++t) {
      choose = choose * static_cast<long double>(m - r + t) / static_cast<long double>(t);
    }
    return choose * std::pow(p, static_cast<long double>(k)) *
           std::pow(q, static_cast<long double>(m - k));
  }
  const long double log_choose = std::lgamma(static_cast<long double>(m) + 1) -
                                 std::lgamma(static_cast<long double>(k) + 1) -
                                 std::lgamma(static_cast<long double>(m - k) + 1);
  return std::exp(log_choose + static_cast<long double>(k) * std::log(p) +
                  static_cast<long double>(m - k) * std::log(q));
}

}  // namespace

double IpwClusterWeight(std::span<const std::uint8_t> w,
                        std::span<const std::uint8_t> pi, double e1) {
  CheckCluster(w, pi, e1);
  long double weight = 1.0L;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] != pi[j]) return 0.0;
    weight /= pi[j] != 0 ? e1 : 1.0 - e1;
  }
  return static_cast<double>(weight);
}

double BetaWeight(std::span<const std::uint8_t> w,
                  std::span<const std::uint8_t> pi, double e1,
                  std::size_t beta) {
  CheckCluster(w, pi, e1);
  const std::size_t m = w.size();
  if (beta < 1 || beta > m) {
    ThrowInvalidArgument(fmt::format("beta = {} outside [1, M = {}]", beta, m));
  }
  thread_local std::vector<long double> esp;
  esp.assign(beta + 1, 0.0L);
  esp[0] = 1.0L;
  for (std::size_t j = 0; j < m; ++j) {
    const long double e = pi[j] != 0 ? e1 : 1.0 - e1;
    const long double term = (w[j] == pi[j] ? 1.0L / e : 0.0L) - 1.0L;
    for (std::size_t k = std::min(j + 1, beta); k >= 1; --k) {
      esp[k] += term * esp[k - 1];
    }
  }
  long double weight = 0.0L;
  for (long double value : esp) weight += value;
  return static_cast<double>(weight);
}

double QWeightFromCount(int pi_ij, std::size_t treated, std::size_t cluster_size,
                        double e1) {
  if (cluster_size == 0) ThrowInvalidArgument("empty cluster");
  if (treated > cluster_size) ThrowInvalidArgument("treated count exceeds M");
  if (!(e1 > 0.0 && e1 < 1.0)) ThrowNumeric("propensity violates positivity");
  if ((pi_ij == 1 && treated == 0) || (pi_ij == 0 && treated == cluster_size)) {
    ThrowInvalidArgument("unit decision inconsistent with the treated fraction");
  }
  const long double fraction =
      static_cast<long double>(treated) / static_cast<long double>(cluster_size);
  const long double conditional = pi_ij != 0 ? fraction : 1.0L - fraction;
  return static_cast<double>(conditional * BinomialPmf(treated, cluster_size, e1));
}

double QWeight(int pi_ij, double pi_bar, std::size_t cluster_size, double e1) {
  const double scaled = pi_bar * static_cast<double>(cluster_size);
  const double rounded = std::round(scaled);
  if (!std::isfinite(scaled) || std::abs(scaled - rounded) > 1e-9 ||
      rounded < 0.0) {
    ThrowInvalidArgument(fmt::format(
        "pi_bar * M = {} * {} is not an integer", pi_bar, cluster_size));
  }
  return QWeightFromCount(pi_ij, static_cast<std::size_t>(rounded), cluster_size, e1);
}

double IpwVarianceFactor(std::span<const std::uint8_t> pi, double e1) {
  if (!(e1 >= kMinPropensity && e1 <= 1.0 - kMinPropensity)) {
    ThrowNumeric(fmt::format("propensity {} violates positivity", e1));
  }
  const long double e0 = 1.0L - e1;
  long double product = 1.0L;
  for (std::uint8_t decision : pi) {
    const long double e = decision != 0 ? e1 : e0;
    product *= e1 * e0 / (e * e) + 1.0L;
  }
  return static_cast<double>(product - 1.0L);
}

double IpwVarianceFactor(const PropensityTable& propensity,
                         const PolicyAssignment& assignment,
                         std::size_t cluster) {
  return IpwVarianceFactor(assignment.cluster_decisions(cluster),
                           propensity.e1(cluster));
}

}  // namespace qinet
