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
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "randhyp/cocycle.hpp"
#include "randhyp/verdict.hpp"

namespace randhyp {

// A_n(omega) = min over (x, v) in SM of log |D_x phi_omega^(n) v|, in nats.
// D_n(omega) = exp(A_n(omega)).

struct MinExpansionRow {
  std::size_t n = 0;
  double lower = 0.0;
  double upper = 0.0;
  double slack = 0.0;    // upper - lower; at most L_n h / 2, 0 for exact rows
  double argmin_x = 0.0; // smallest grid point attaining `upper` (circle families)
};

/// Bracketing table of A_n(omega) for n = 1..depth.
///
/// Circle families: `upper` is the minimum over the grid x_j = j / grid_size
/// and `lower` is the larger of upper - L_n h / 2, with
/// L_n = L * sum_{i<n} S^i (L = log-derivative Lipschitz constant, S = sup
/// |D phi|), and the supadditive chain lower_{n-1} + log min_x |D phi_{theta^{n-1} omega}|.
/// Linear families: the derivative does not depend on x and both bounds are
/// the exact log of the smallest singular value of the product.
struct MinExpansionTable {
  BaseState omega;
  std::vector<MinExpansionRow> rows;
  std::size_t grid_size = 0;
  bool certified = true;

  const MinExpansionRow& at(std::size_t n) const { return rows.at(n - 1); }
};

MinExpansionTable min_expansion_table(const FiberFamily& family, const BaseState& omega,
                                      std::size_t depth, std::size_t grid_size);

struct LogExpansionBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Bounds on A_n(omega). Circle families with x-dependent derivative require
/// grid_size >= 64.
LogExpansionBounds min_log_expansion(const FiberFamily& family, const BaseState& omega,
                                     std::size_t n, std::size_t grid_size);

struct SupadditivityEntry {
  std::size_t n = 0;
  std::size_t m = 0;
  double residual = 0.0;  // upper A_{n+m}(w) - lower A_n(w) - lower A_m(theta^n w)
  double gap = 0.0;       // upper A_{n+m}(w) - upper A_n(w) - upper A_m(theta^n w)
};

struct SupadditivityReport {
  double min_residual = 0.0;
  std::size_t strict_gaps = 0;  // entries with gap > 1e-9
  std::vector<SupadditivityEntry> table;
};

/// All splits n + m <= max_n (max_n <= 20).
SupadditivityReport supadditivity_residuals(const FiberFamily& family, const BaseState& omega,
                                            std::size_t max_n, std::size_t grid_size);

struct UniformRateEstimate {
  double a_estimate = 0.0;  // mean over samples of upper A_{n_max} / n_max
  double a_lower = 0.0;     // same with the certified lower bounds
  double std_err = 0.0;
  std::size_t n_max = 0;
  std::size_t samples = 0;
  std::vector<std::size_t> trend_n;   // checkpoints: every n <= 100, then ~10 per decade
  std::vector<double> trend;          // mean upper A_n / n at the checkpoints
  std::vector<double> trend_lower;
  std::vector<double> per_sample;     // upper A_{n_max} / n_max
};

UniformRateEstimate uniform_rate_estimate(const FiberFamily& family,
                                          const std::shared_ptr<const BaseSystem>& system,
                                          std::uint64_t seed, std::size_t samples,
                                          std::size_t n_max, std::size_t grid_size,
                                          unsigned threads = 1);

/// C(omega) = min_{1<=n<=depth} exp(-lambda n) D_n(omega), using the certified
/// lower bound of A_n. Kept in log form as well since it can underflow.
struct TemperedConstant {
  double value = 0.0;
  double log_value = 0.0;
  std::size_t attained_at = 0;
  std::size_t depth = 0;
  bool truncated = true;
};

/// Throws ConfigError unless lambda > 0 and, when rate_bound is given,
/// lambda < rate_bound.
TemperedConstant tempered_constant(const FiberFamily& family, const BaseState& omega,
                                   double lambda, std::size_t depth, std::size_t grid_size,
                                   std::optional<double> rate_bound = std::nullopt);
TemperedConstant tempered_constant(const MinExpansionTable& table, double lambda);

struct CurvePoint {
  std::size_t n = 0;
  double value = 0.0;  // (1/n) log C(theta^n omega)
};

/// ((1/n) log C(theta^n omega)) for n = stride, 2 stride, ... and n_max, with
/// omega the first sample of (system, seed) and C truncated at `depth`.
std::vector<CurvePoint> temperedness_curve(const FiberFamily& family,
                                           const std::shared_ptr<const BaseSystem>& system,
                                           std::uint64_t seed, double lambda,
                                           std::size_t n_max, std::size_t depth,
                                           std::size_t grid_size, std::size_t stride = 1,
                                           unsigned threads = 1);

/// One-step comparison of C(theta omega) with C(omega).
struct CRecursionCheck {
  double log_ratio = 0.0;          // log C(theta w) - log C(w)
  double log_bound = 0.0;          // log max{|D phi_{theta w}|, e^lambda} - log D_1(w)
  bool attained_beyond_first = false;
  double chain_margin = 0.0;       // log C(w) - (log C(theta w) - lambda + log D_1(w))
  bool satisfied = false;          // log_ratio <= log_bound (+1e-12) and, when
                                   // attained at n >= 2, chain_margin >= -1e-12
};

CRecursionCheck c_recursion_check(const FiberFamily& family, const BaseState& omega,
                                  double lambda, std::size_t depth, std::size_t grid_size);

struct CertifyOptions {
  std::size_t samples = 20;
  std::size_t n_max = 12;
  std::size_t grid_size = 4096;
  std::size_t depth = 50;
  std::optional<double> lambda;  // default: A_estimate / 2
  std::size_t supadditivity_n = 12;
  std::size_t supadditivity_samples = 4;
  std::size_t curve_n_max = 64;
  std::size_t curve_samples = 4;
  std::size_t curve_stride = 1;
  double temperedness_threshold = 0.02;
  unsigned threads = 1;
};

struct ConstantSample {
  std::size_t index = 0;
  double value = 0.0;
  double log_value = 0.0;
  std::size_t attained_at = 0;
};

struct ExpansionCertificate {
  double a_estimate = 0.0;
  double lambda = 0.0;
  std::vector<ConstantSample> c_samples;
  std::vector<CurvePoint> temperedness_curve;
  double supadditivity_min_residual = 0.0;
  std::size_t supadditivity_strict_gaps = 0;
  double c_recursion_max_excess = 0.0;  // max of log_ratio - log_bound
  bool grid_certified = true;
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> notes;
  UniformRateEstimate rate;
  std::optional<MinExpansionTable> first_table;
};

ExpansionCertificate certify_expansion(const FiberFamily& family,
                                       const std::shared_ptr<const BaseSystem>& system,
                                       std::uint64_t seed, const CertifyOptions& options);

/// Per-symbol one-step rate lambda(omega) used by the variable-rate check.
using RateFunction = std::function<double(int symbol)>;

/// Analytic min over x of the one-step expansion for each symbol.
RateFunction analytic_step_rates(const FiberFamily& family);

struct CorollaryOptions {
  std::size_t n_max = 12;
  std::size_t grid_size = 1024;
  std::size_t rate_samples = 20;
  unsigned threads = 1;
};

struct CorollaryResult {
  double mean_log_rate = 0.0;
  double std_err = 0.0;
  std::size_t samples = 0;
  Verdict verdict = Verdict::inconclusive;
  std::optional<double> a_estimate;
  std::optional<double> constant_rate;  // A_estimate / 2 in nats per step
};

/// Monte Carlo estimate of the integral of log lambda(omega) over P. Positive
/// beyond three standard errors gives Verdict::positive and a constant-rate
/// candidate; otherwise Verdict::inconclusive.
CorollaryResult variable_rate_corollary(const FiberFamily& family,
                                        const std::shared_ptr<const BaseSystem>& system,
                                        std::uint64_t seed, std::size_t samples,
                                        const RateFunction& rates,
                                        const CorollaryOptions& options = {});

nlohmann::json to_json(const MinExpansionTable& table);
nlohmann::json to_json(const SupadditivityReport& report);
nlohmann::json to_json(const UniformRateEstimate& estimate);
nlohmann::json to_json(const ExpansionCertificate& certificate);
nlohmann::json to_json(const CorollaryResult& result);

}  // namespace randhyp
