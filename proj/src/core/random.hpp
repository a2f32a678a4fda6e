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

// Seed derivation and random streams.
//
// A master seed is mixed with a counter path (repetition, stream, ...) through
// the splitmix64 finalizer. Every randomness source of a repetition draws from
// its own named stream, so toggling one source never shifts another, and
// results do not depend on which thread runs a repetition.

#ifndef QINET_CORE_RANDOM_HPP_
#define QINET_CORE_RANDOM_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qinet {

inline constexpr std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Folds a counter path into a seed: DeriveSeed(s, {a, b}) differs from
// DeriveSeed(s, {b, a}).
inline constexpr std::uint64_t DeriveSeed(
    std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t state = SplitMix64(seed);
  for (std::uint64_t step : path) state = SplitMix64(state ^ SplitMix64(step));
  return state;
}

enum class Stream : std::uint64_t {
  kOmega = 1,
  kCovariates = 2,
  kTreatments = 3,
  kMasks = 4,
  kOutcomes = 5,
  kPolicyNoise = 6,
  kTieBreak = 7,
  kCrossFit = 8,
};

inline std::uint64_t StreamSeed(std::uint64_t seed, Stream stream) {
  return DeriveSeed(seed, {static_cast<std::uint64_t>(stream)});
}

// Uniforms are built from raw engine bits rather than std distributions so the
// draws are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, Stream stream) : engine_(StreamSeed(seed, stream)) {}

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  bool Bernoulli(double p) { return Uniform() < p; }
  // Uniform integer on [0, n), unbiased by rejection.
  std::uint64_t Below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return draw % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qinet

#endif  // QINET_CORE_RANDOM_HPP_
