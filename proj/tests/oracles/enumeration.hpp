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

// Brute-force reference implementations for tests. Everything here is written
// from the definitions, deliberately without sharing code (or shortcuts such
// as recurrences and closed forms) with the library.

#ifndef QINET_TESTS_ORACLES_ENUMERATION_HPP_
#define QINET_TESTS_ORACLES_ENUMERATION_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

using Bits = std::vector<std::uint8_t>;

inline Bits BitsOf(std::uint64_t mask, std::size_t m) {
  Bits bits(m);
  for (std::size_t j = 0; j < m; ++j) bits[j] = (mask >> j) & 1U;
  return bits;
}

inline std::size_t Count(const Bits& bits) {
  std::size_t n = 0;
  for (auto b : bits) n += b;
  return n;
}

// P(W = w) for independent Bernoulli(e1) treatments.
inline double ConfigurationProbability(const Bits& w, double e1) {
  double p = 1.0;
  for (auto b : w) p *= b ? e1 : 1.0 - e1;
  return p;
}

// Sum over all 2^m treatment vectors of P(w) * f(w).
inline double Expectation(std::size_t m, double e1,
                          const std::function<double(const Bits&)>& f) {
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    const Bits w = BitsOf(mask, m);
    total += ConfigurationProbability(w, e1) * f(w);
  }
  return total;
}

// 1(W = pi) / prod_j e_{pi_j}, the product taken literally.
inline double IpwWeight(const Bits& w, const Bits& pi, double e1) {
  double weight = 1.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] != pi[j]) return 0.0;
    weight /= pi[j] ? e1 : 1.0 - e1;
  }
  return weight;
}

// Power-set sum over subsets U with |U| <= beta of prod_{j in U} t_j.
inline double SubsetBetaWeight(const Bits& w, const Bits& pi, double e1,
                               std::size_t beta) {
  const std::size_t m = w.size();
  std::vector<double> t(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double e = pi[j] ? e1 : 1.0 - e1;
    t[j] = (w[j] == pi[j] ? 1.0 / e : 0.0) - 1.0;
  }
  double total = 0.0;
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << m); ++subset) {
    const Bits members = BitsOf(subset, m);
    if (Count(members) > beta) continue;
    double product = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (members[j]) product *= t[j];
    }
    total += product;
  }
  return total;
}

// Sum of |t_j| products over all subsets, i.e. prod (1 + |t_j|).
inline double SubsetBetaMagnitude(const Bits& w, const Bits& pi, double e1) {
  double total = 1.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double e = pi[j] ? e1 : 1.0 - e1;
    total *= 1.0 + std::abs((w[j] == pi[j] ? 1.0 / e : 0.0) - 1.0);
  }
  return total;
}

// P(W_j = pi_j and sum W = sum pi), by summing configuration probabilities.
inline double EnumeratedQ(const Bits& pi, std::size_t j, double e1) {
  const std::size_t m = pi.size();
  const std::size_t treated = Count(pi);
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    const Bits w = BitsOf(mask, m);
    if (w[j] == pi[j] && Count(w) == treated) total += ConfigurationProbability(w, e1);
  }
  return total;
}

// prod_j (e1 e0 / e_{pi_j}^2 + 1) - 1, written out term by term.
inline double VarianceFactor(const Bits& pi, double e1) {
  double product = 1.0;
  for (auto p : pi) {
    const double e = p ? e1 : 1.0 - e1;
    product *= e1 * (1.0 - e1) / (e * e) + 1.0;
  }
  return product - 1.0;
}

// Potential-outcome table of one cluster: outcome[w][j] = Y_j(w), indexed by
// the bitmask of w.
struct OutcomeTable {
  std::size_t m = 0;
  std::vector<std::vector<double>> outcome;

  double Total(std::uint64_t mask) const {
    double sum = 0.0;
    for (double y : outcome[mask]) sum += y;
    return sum;
  }
};

inline std::uint64_t MaskOf(const Bits& bits) {
  std::uint64_t mask = 0;
  for (std::size_t j = 0; j < bits.size(); ++j) {
    if (bits[j]) mask |= std::uint64_t{1} << j;
  }
  return mask;
}

// Builds a table by evaluating y(w, j) on every configuration.
inline OutcomeTable MakeTable(std::size_t m,
                              const std::function<double(const Bits&, std::size_t)>& y) {
  OutcomeTable table;
  table.m = m;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    const Bits w = BitsOf(mask, m);
    std::vector<double> row(m);
    for (std::size_t j = 0; j < m; ++j) row[j] = y(w, j);
    table.outcome.push_back(row);
  }
  return table;
}

// Area under the piecewise-linear curve through (x, y).
inline double Trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double area = 0.0;
  for (std::size_t k = 1; k < x.size(); ++k) {
    area += 0.5 * (x[k] - x[k - 1]) * (y[k] + y[k - 1]);
  }
  return area;
}

// Kendall tau-a over all pairs, without tie handling.
inline double KendallTauA(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  double concordant = 0.0, discordant = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = (a[i] - a[j]) * (b[i] - b[j]);
      if (s > 0) concordant += 1;
      if (s < 0) discordant += 1;
    }
  }
  return (concordant - discordant) / (0.5 * static_cast<double>(n * (n - 1)));
}

}  // namespace oracle

#endif  // QINET_TESTS_ORACLES_ENUMERATION_HPP_
