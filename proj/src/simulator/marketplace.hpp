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

// Marketplace data-generating process with cannibalization.
//
// Buyers are clusters and the items shown to a buyer are units. Treating an
// item (a discount) raises its attractiveness A_ij. A buyer purchases at most
// one item: first a purchase happens with probability eta(A_i), then the item
// is drawn from softmax(A_i / lambda). Treatment therefore shifts purchases
// between items of the same buyer.

#ifndef QINET_SIMULATOR_MARKETPLACE_HPP_
#define QINET_SIMULATOR_MARKETPLACE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "core/dataset.hpp"
#include "core/random.hpp"
#include "simulator/ground_truth.hpp"
#include "simulator/params.hpp"

namespace qinet::sim {

// Scaled bilinear forms X^T Omega_0 Z and X^T Omega_1 Z, unclipped.
struct BilinearTerms {
  double base = 0.0;
  double increment = 0.0;
};

BilinearTerms ComputeBilinearTerms(std::span<const double> x,
                                   std::span<const double> z,
                                   const SimulatorParams& params);

// Attractiveness in [0, 1]. The mask gates the treatment increment, or the
// whole sum under MaskMode::kWhole. Clipping happens once, after summation.
double CombineAttractiveness(double base, double increment, int w, int delta,
                             MaskMode mode);

double Attractiveness(std::span<const double> x, std::span<const double> z,
                      int w, int delta, const SimulatorParams& params);

// P(buyer purchases | A_i). Entries must lie in [0, 1]; ties in the
// exponential-decay ranking go to the lower item index.
double PurchaseProbability(std::span<const double> attractiveness, EtaKind kind);

// softmax(A_i / lambda).
std::vector<double> ChoiceProbabilities(std::span<const double> attractiveness,
                                        double temperature);

// Item drawn by inverting the softmax CDF at `uniform` in [0, 1).
std::size_t ChooseItemAt(std::span<const double> attractiveness,
                         double temperature, double uniform);
std::size_t ChooseItem(std::span<const double> attractiveness,
                       double temperature, Rng& rng);

// Profit of a converted treated item, H = (margin - d) * price.
double ItemProfit(std::span<const double> z, const SimulatorParams& params);
double ItemPrice(std::span<const double> z, const SimulatorParams& params);

struct SimulatedSample {
  ClusterDataset dataset;
  GroundTruth truth;
};

// Draws covariates, treatments, masks and outcomes from independent streams of
// `seed`. Realized cost is C_ij = W_ij * Y_ij * d * price_ij.
SimulatedSample SampleDataset(const SimulatorParams& params, std::uint64_t seed);

// Ground-truth profit score A1_ij * H_ij of every unit, using the unmasked
// increment. This is the epsilon = 0 baseline policy.
std::vector<double> BaselineScores(const GroundTruth& truth);
// The same score recomputed from a dataset's covariates and params' Omega.
std::vector<double> BaselineScores(const ClusterDataset& dataset,
                                   const SimulatorParams& params);

// (1 - eps) * S + eps * u with u ~ U(min S, max S) over the given scores.
// Noise comes from the policy-noise stream of `noise_seed`; the same seed
// yields the same u for every epsilon.
std::vector<double> PerturbScores(std::span<const double> scores,
                                  double epsilon, std::uint64_t noise_seed);

}  // namespace qinet::sim

#endif  // QINET_SIMULATOR_MARKETPLACE_HPP_
