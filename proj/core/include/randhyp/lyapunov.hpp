// Copyright 2026 The randhyp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "randhyp/cocycle.hpp"

namespace randhyp {

/// Estimate of a fibrewise exponent in nats per step. n = batches * batch length.
struct ExponentEstimate {
  double value = 0.0;
  std::size_t n = 0;
  double batch_std_err = 0.0;
  std::size_t batches = 1;
};

/// Exponents sorted ascending. log_det_mean is (1/n) sum log|det D| along the
/// orbit, accumulated independently of the orthonormalisation.
struct SpectrumEstimate {
  std::vector<double> exponents;
  std::size_t n = 0;
  double log_det_mean = 0.0;
};

/// (1/n) sum of phi along the projectivised orbit of p, with batch-means
/// error bars. Requires n >= batches >= 1; a remainder of n mod batches steps
/// is not used.
ExponentEstimate top_exponent(const FiberFamily& family, const UnitTangentPoint& p,
                              std::size_t n, std::size_t batches = 20);

/// Full spectrum by re-orthonormalising a frame after every step and
/// accumulating the log of the Gram-Schmidt diagonal. Requires n >= dim.
SpectrumEstimate oseledets_spectrum(const FiberFamily& family, const BaseState& omega,
                                    const ManifoldPoint& x, std::size_t n);

/// `count` uniformly distributed fibre points, a pure function of (seed, index).
std::vector<ManifoldPoint> sample_points(int dim, std::uint64_t seed, std::size_t count);
/// `count` uniformly distributed unit tangent directions.
std::vector<Vector> sample_directions(int dim, std::uint64_t seed, std::size_t count);

struct PositivitySample {
  std::size_t index = 0;
  ManifoldPoint x;
  std::vector<double> exponents;
};

struct PositivityReport {
  double min_exponent = 0.0;
  double fraction_positive = 0.0;      // all exponents > 0
  double fraction_top_positive = 0.0;  // largest exponent > 0
  std::size_t argmin = 0;
  std::size_t n = 0;
  std::vector<PositivitySample> per_sample;
};

/// Spectrum at `samples` random (omega, x) with omega ~ P and x uniform.
PositivityReport exponent_positivity_report(const FiberFamily& family,
                                            const std::shared_ptr<const BaseSystem>& system,
                                            std::uint64_t seed, std::size_t samples,
                                            std::size_t n, unsigned threads = 1);

nlohmann::json to_json(const PositivityReport& report);

}  // namespace randhyp
