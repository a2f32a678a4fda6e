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

// Cluster- and unit-level weights of the interference-aware estimators. All
// take the observed treatments W_i and policy decisions pi_i of one cluster
// and its treatment probability e_1.

#ifndef QINET_ESTIMATORS_WEIGHTS_HPP_
#define QINET_ESTIMATORS_WEIGHTS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>

#include "core/policy.hpp"
#include "core/propensity.hpp"

namespace qinet {

// 1(W_i = pi_i) / prod_j e_{pi_ij}.
double IpwClusterWeight(std::span<const std::uint8_t> w,
                        std::span<const std::uint8_t> pi, double e1);

// sum over subsets U of {1..M} with |U| <= beta of
// prod_{j in U} (1(W_ij = pi_ij) / e_{pi_ij} - 1).
//
// Evaluated as the sum of the elementary symmetric polynomials e_0..e_beta of
// the per-unit terms through the recurrence e_k <- e_k + t_j * e_{k-1}, in
// O(M * beta). Requires 1 <= beta <= M.
double BetaWeight(std::span<const std::uint8_t> w,
                  std::span<const std::uint8_t> pi, double e1, std::size_t beta);

// P(W_ij = pi_ij, W_bar_i = pi_bar_i | X_i)
//   = [pi_ij pi_bar + (1 - pi_ij)(1 - pi_bar)] * C(M, pi_bar M) e1^(pi_bar M)
//     e0^((1 - pi_bar) M).
// pi_bar * M must be integral and consistent with pi_ij.
double QWeight(int pi_ij, double pi_bar, std::size_t cluster_size, double e1);
double QWeightFromCount(int pi_ij, std::size_t treated, std::size_t cluster_size,
                        double e1);

// Variance inflation factor prod_j (e1 e0 / e_{pi_ij}^2 + 1) - 1 of the
// standard IPW estimator; grows exponentially in M.
double IpwVarianceFactor(std::span<const std::uint8_t> pi, double e1);
double IpwVarianceFactor(const PropensityTable& propensity,
                         const PolicyAssignment& assignment, std::size_t cluster);

}  // namespace qinet

#endif  // QINET_ESTIMATORS_WEIGHTS_HPP_
