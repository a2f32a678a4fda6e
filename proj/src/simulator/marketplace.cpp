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

#include "simulator/marketplace.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "core/error.hpp"

namespace qinet::sim {

BilinearTerms ComputeBilinearTerms(std::span<const double> x,
                                   std::span<const double> z,
                                   const SimulatorParams& params) {
  if (x.size() != params.x_dim || z.size() != params.z_dim ||
      static_cast<std::size_t>(params.omega0.rows()) != x.size() ||
      static_cast<std::size_t>(params.omega0.cols()) != z.size() ||
      params.omega1.rows() != params.omega0.rows() ||
      params.omega1.cols() != params.omega0.cols()) {
    ThrowInvalidArgument(fmt::format(
        "shape mismatch: x has {}, z has {}, omega is {} x {}", x.size(),
        z.size(), params.omega0.rows(), params.omega0.cols()));
  }
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), x.size());
  const Eigen::Map<const Eigen::VectorXd> zv(z.data(), z.size());
  const double scale = params.AttractivenessScale();
  return {scale * xv.dot(params.omega0 * zv), scale * xv.dot(params.omega1 * zv)};
}

double CombineAttractiveness(double base, double increment, int w, int delta,
                             MaskMode mode) {
  double raw = 0.0;
  if (mode == MaskMode::kIncrement) {
    raw = base + (delta != 0 && w != 0 ? increment : 0.0);
  } else {
    raw = delta != 0 ? base + (w != 0 ? increment : 0.0) : 0.0;
  }
  return std::clamp(raw, 0.0, 1.0);
}

double Attractiveness(std::span<const double> x, std::span<const double> z,
                      int w, int delta, const SimulatorParams& params) {
  const auto terms = ComputeBilinearTerms(x, z, params);
  return CombineAttractiveness(terms.base, terms.increment, w, delta,
                               params.mask_mode);
}

double PurchaseProbability(std::span<const double> attractiveness,
                           EtaKind kind) {
  if (attractiveness.empty()) {
    ThrowInvalidArgument("purchase probability of an empty attractiveness row");
  }
  for (double a : attractiveness) {
    if (!(a >= 0.0 && a <= 1.0)) {
      ThrowInvalidArgument(fmt::format("attractiveness {} outside [0, 1]", a));
    }
  }
  switch (kind) {
    case EtaKind::kMax:
      return *std::max_element(attractiveness.begin(), attractiveness.end());
    case EtaKind::kProduct: {
      double none = 1.0;
      for (double a : attractiveness) none *= 1.0 - a;
      return 1.0 - none;
    }
    case EtaKind::kExpDecay: {
      // Rank 1 is the most attractive item; equal values keep index order.
      thread_local std::vector<double> sorted;
      sorted.assign(attractiveness.begin(), attractiveness.end());
      std::stable_sort(sorted.begin(), sorted.end(), std::greater<>());
      double total = 0.0;
      double weight = 0.5;
      for (double a : sorted) {
        total += weight * a;
        weight *= 0.5;
      }
      return total;
    }
  }
  return 0.0;
}

std::vector<double> ChoiceProbabilities(std::span<const double> attractiveness,
                                        double temperature) {
  if (!(temperature > 0.0)) ThrowInvalidArgument("temperature must be positive");
  if (attractiveness.empty()) ThrowInvalidArgument("empty attractiveness row");
  const double top = *std::max_element(attractiveness.begin(), attractiveness.end());
  std::vector<double> probabilities(attractiveness.size());
  double total = 0.0;
  for (std::size_t j = 0; j < attractiveness.size(); ++j) {
    probabilities[j] = std::exp((attractiveness[j] - top) / temperature);
    total += probabilities[j];
  }
  for (double& p : probabilities) p /= total;
  return probabilities;
}

std::size_t ChooseItemAt(std::span<const double> attractiveness,
                         double temperature, double uniform) {
  const auto probabilities = ChoiceProbabilities(attractiveness, temperature);
  double cumulative = 0.0;
  for (std::size_t j = 0; j + 1 < probabilities.size(); ++j) {
    cumulative += probabilities[j];
    if (uniform < cumulative) return j;
  }
  return probabilities.size() - 1;
}

std::size_t ChooseItem(std::span<const double> attractiveness,
                       double temperature, Rng& rng) {
  return ChooseItemAt(attractiveness, temperature, rng.Uniform());
}

double ItemPrice(std::span<const double> z, const SimulatorParams& params) {
  return params.price_base + params.price_slope * z[0];
}

double ItemProfit(std::span<const double> z, const SimulatorParams& params) {
  const double margin = params.margin_base + params.margin_slope * z[1];
  return (margin - params.discount) * ItemPrice(z, params);
}

SimulatedSample SampleDataset(const SimulatorParams& params,
                              std::uint64_t seed) {
  params.Validate();
  const std::size_t n = params.n_buyers;
  const std::size_t m = params.n_items;
  const std::size_t units = n * m;

  Rng covariates(seed, Stream::kCovariates);
  Rng treatments(seed, Stream::kTreatments);
  Rng masks(seed, Stream::kMasks);
  Rng outcomes(seed, Stream::kOutcomes);

  DatasetColumns columns;
  columns.x_dim = params.x_dim;
  columns.z_dim = params.z_dim;
  columns.offsets = ClusterLayout::Uniform(n, m).offsets();
  columns.x.resize(n * params.x_dim);
  columns.z.resize(units * params.z_dim);
  columns.w.resize(units);
  columns.y.assign(units, 0.0);
  columns.c.assign(units, 0.0);

  std::vector<double> base(units), increment(units), profit(units);
  std::vector<std::uint8_t> mask(units);
  std::vector<double> row(m);

  for (std::size_t i = 0; i < n; ++i) {
    double* x = columns.x.data() + i * params.x_dim;
    for (std::size_t d = 0; d < params.x_dim; ++d) x[d] = covariates.Uniform();
    const Eigen::Map<const Eigen::VectorXd> xv(x, params.x_dim);
    const Eigen::RowVectorXd x_omega0 = xv.transpose() * params.omega0;
    const Eigen::RowVectorXd x_omega1 = xv.transpose() * params.omega1;
    const double scale = params.AttractivenessScale();

    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t u = i * m + j;
      double* z = columns.z.data() + u * params.z_dim;
      for (std::size_t d = 0; d < params.z_dim; ++d) z[d] = covariates.Uniform();
      const Eigen::Map<const Eigen::VectorXd> zv(z, params.z_dim);
      base[u] = scale * x_omega0.dot(zv);
      increment[u] = scale * x_omega1.dot(zv);
      profit[u] = ItemProfit({z, params.z_dim}, params);
      columns.w[u] = treatments.Bernoulli(params.treat_prob) ? 1 : 0;
      mask[u] = masks.Bernoulli(params.mask_prob) ? 1 : 0;
      row[j] = CombineAttractiveness(base[u], increment[u], columns.w[u], mask[u],
                                     params.mask_mode);
    }

    // Two draws per buyer regardless of the branch taken keeps the outcome
    // stream aligned across buyers.
    const double purchase_draw = outcomes.Uniform();
    const double choice_draw = outcomes.Uniform();
    if (purchase_draw < PurchaseProbability(row, params.eta)) {
      const std::size_t j = ChooseItemAt(row, params.temperature, choice_draw);
      const std::size_t u = i * m + j;
      columns.y[u] = 1.0;
      if (columns.w[u] != 0) {
        columns.c[u] =
            params.discount * ItemPrice({columns.z.data() + u * params.z_dim,
                                         params.z_dim},
                                        params);
      }
    }
  }

  ClusterDataset dataset(std::move(columns));
  GroundTruth truth(dataset.layout(), params.eta, params.mask_mode,
                    std::move(base), std::move(increment), std::move(mask),
                    std::move(profit));
  return {std::move(dataset), std::move(truth)};
}

std::vector<double> BaselineScores(const GroundTruth& truth) {
  const auto increment = truth.increment();
  const auto profit = truth.profit();
  std::vector<double> scores(increment.size());
  for (std::size_t u = 0; u < scores.size(); ++u) {
    scores[u] = increment[u] * profit[u];
  }
  return scores;
}

std::vector<double> BaselineScores(const ClusterDataset& dataset,
                                   const SimulatorParams& params) {
  std::vector<double> scores(dataset.num_units());
  const auto& layout = *dataset.layout();
  for (std::size_t i = 0; i < dataset.num_clusters(); ++i) {
    for (std::size_t u = layout.begin(i); u < layout.end(i); ++u) {
      const auto terms = ComputeBilinearTerms(dataset.x(i), dataset.z(u), params);
      scores[u] = terms.increment * ItemProfit(dataset.z(u), params);
    }
  }
  return scores;
}

std::vector<double> PerturbScores(std::span<const double> scores,
                                  double epsilon, std::uint64_t noise_seed) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    ThrowInvalidArgument(fmt::format("epsilon {} outside [0, 1]", epsilon));
  }
  std::vector<double> perturbed(scores.begin(), scores.end());
  if (scores.empty()) return perturbed;
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  Rng noise(noise_seed, Stream::kPolicyNoise);
  for (std::size_t u = 0; u < perturbed.size(); ++u) {
    const double draw = noise.Uniform(*lo, *hi);
    perturbed[u] = (1.0 - epsilon) * scores[u] + epsilon * draw;
  }
  return perturbed;
}

}  // namespace qinet::sim
