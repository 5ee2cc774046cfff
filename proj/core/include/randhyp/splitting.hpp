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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "randhyp/cocycle.hpp"
#include "randhyp/verdict.hpp"

namespace randhyp {

/// Finite-time surrogate of the splitting Gamma^1 (contracting) + Gamma^2
/// (expanding) at one point. Both directions are unit, sign-canonical.
struct BundlePair {
  Vector gamma1;
  Vector gamma2;
  std::size_t horizon = 0;
  double angle = 0.0;  // principal angle, in [0, pi/2]
};

/// gamma2: top left singular vector of D phi^(h) over the window
/// [theta^{-h} omega, omega) evaluated along the pulled-back orbit of x.
/// gamma1: least expanded right singular vector of D_x phi_omega^(h).
/// Throws UnsupportedError for non-invertible families, ContractError for
/// horizon < 2.
BundlePair finite_time_bundles(const FiberFamily& family, const BaseState& omega,
                               const ManifoldPoint& x, std::size_t horizon);

/// max over i of |sin| between D_x phi_omega Gamma^i(omega) and
/// Gamma^i(theta omega), the latter recomputed at the same horizon.
double invariance_residual(const FiberFamily& family, const BaseState& omega,
                           const ManifoldPoint& x, const BundlePair& pair);

/// Along-orbit data of both bundles over n steps. The expanding bundle is
/// pushed forward from gamma2; the contracting bundle is pulled back with the
/// inverse cocycle from the finite-time gamma1 at theta^n omega, which keeps
/// both sweeps numerically stable.
struct BundleRates {
  std::size_t n = 0;
  double rate1 = 0.0;  // -(1/n) log |D phi^(n) gamma1|
  double rate2 = 0.0;  //  (1/n) log |D phi^(n) gamma2|
  double lambda = 0.0;
  std::size_t depth = 0;
  double log_c1 = 0.0;  // min_{m<=depth} (-lambda m - log |D phi^(m) gamma1|)
  double log_c2 = 0.0;  // min_{m<=depth} (-lambda m + log |D phi^(m) gamma2|)
  double orbit_angle_min = 0.0;
  std::vector<double> log_contraction;  // log |D phi gamma1| at step k < n
  std::vector<double> log_expansion;    // log |D phi gamma2| at step k < n
};

/// C1 = exp(log_c1) and C2 = exp(log_c2) are the truncated-infimum constants
/// of |D phi^(m) xi| <= C1^{-1} e^{-lambda m} |xi| on Gamma^1 and
/// |D phi^(m) eta| >= C2 e^{lambda m} |eta| on Gamma^2. lambda defaults to
/// half the smaller rate of this sample.
BundleRates bundle_rates(const FiberFamily& family, const BaseState& omega, const ManifoldPoint& x,
                         const BundlePair& pair, std::size_t n,
                         std::optional<double> lambda = std::nullopt, std::size_t depth = 50);

struct SplittingOptions {
  std::size_t samples = 50;
  std::size_t horizon = 50;
  std::size_t n = 10000;
  std::size_t depth = 50;
  std::optional<double> lambda;  // default: half the smallest sampled rate
  unsigned threads = 1;
};

struct SplittingSample {
  std::size_t index = 0;
  double angle = 0.0;
  double orbit_angle_min = 0.0;
  double rate1 = 0.0;
  double rate2 = 0.0;
  double residual = 0.0;
  double horizon_difference = 0.0;  // bundle angle change between 4h/5 and 6h/5
  double log_c1 = 0.0;
  double log_c2 = 0.0;
};

struct SplittingCurvePoint {
  std::size_t n = 0;
  double c1 = 0.0;  // mean over samples of (1/n) log C1(theta^n omega)
  double c2 = 0.0;
};

struct SplittingCertificate {
  double lambda = 0.0;
  double angle_min = 0.0;
  double invariance_residual_max = 0.0;
  double horizon_difference_max = 0.0;
  double rate1_mean = 0.0;
  double rate1_std_err = 0.0;
  double rate2_mean = 0.0;
  double rate2_std_err = 0.0;
  double rate_min = 0.0;
  std::vector<SplittingSample> samples;
  std::vector<SplittingCurvePoint> temperedness_curve;
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> notes;
};

/// Certified hyperbolic iff the invariance residual is below 1e-6, every
/// sampled angle is positive and every sampled rate is at least lambda > 0.
SplittingCertificate hyperbolicity_certificate(const FiberFamily& family,
                                               const std::shared_ptr<const BaseSystem>& system,
                                               std::uint64_t seed, const SplittingOptions& options);

nlohmann::json to_json(const BundlePair& pair);
nlohmann::json to_json(const SplittingCertificate& certificate);

}  // namespace randhyp
