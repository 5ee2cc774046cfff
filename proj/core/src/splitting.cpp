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

#include "randhyp/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <nlohmann/json.hpp>

#include "randhyp/errors.hpp"
#include "randhyp/lyapunov.hpp"
#include "randhyp/parallel.hpp"
#include "randhyp/statistics.hpp"

namespace randhyp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kResidualLimit = 1e-6;
constexpr std::size_t kCurvePoints = 20;

void require_invertible(const FiberFamily& family) {
  if (!family.invertible() || family.dim() != 2) {
    throw UnsupportedError("splitting analysis needs an invertible torus family, got " +
                           to_string(family.kind()));
  }
}

// min over m <= depth of (sign * sum_{k<m} logs[first + k] - lambda m).
double truncated_log_constant(const std::vector<double>& logs, std::size_t first, std::size_t depth,
                              double sign, double lambda) {
  CompensatedSum acc;
  double best = kInf;
  for (std::size_t m = 1; m <= depth; ++m) {
    acc += sign * logs[first + m - 1];
    best = std::min(best, acc.value() - lambda * static_cast<double>(m));
  }
  return best;
}

std::vector<double> as_vector(const Vector& v) { return {v.begin(), v.end()}; }

}  // namespace

BundlePair finite_time_bundles(const FiberFamily& family, const BaseState& omega,
                               const ManifoldPoint& x, std::size_t horizon) {
  require_invertible(family);
  if (horizon < 2) throw ContractError("finite_time_bundles: need horizon >= 2");
  const auto h = static_cast<std::int64_t>(horizon);

  const auto past = omega.symbols(-h, horizon);
  std::vector<ManifoldPoint> pulled(horizon + 1);
  pulled[horizon] = x;
  for (std::size_t k = horizon; k > 0; --k) pulled[k - 1] = family.inverse(past[k - 1], pulled[k]);
  ScaledProduct backward;
  for (std::size_t k = 0; k < horizon; ++k) backward.left_multiply(family.derivative(past[k], pulled[k]));

  const auto future = omega.symbols(0, horizon);
  ScaledProduct forward;
  ManifoldPoint y = x;
  for (std::size_t k = 0; k < horizon; ++k) {
    forward.left_multiply(family.derivative(future[k], y));
    y = family.apply(future[k], y);
  }

  BundlePair pair;
  pair.horizon = horizon;
  pair.gamma2 = max_left_singular_vector(backward.normalized());
  pair.gamma1 = min_right_singular_vector(forward.normalized());
  pair.angle = line_angle(pair.gamma1, pair.gamma2);
  return pair;
}

double invariance_residual(const FiberFamily& family, const BaseState& omega,
                           const ManifoldPoint& x, const BundlePair& pair) {
  const int s = omega.symbol_at(0);
  const BundlePair next = finite_time_bundles(family, omega.shifted(1), family.apply(s, x), pair.horizon);
  const Matrix d = family.derivative(s, x);
  return std::max(sine_between(d * pair.gamma1, next.gamma1), sine_between(d * pair.gamma2, next.gamma2));
}

BundleRates bundle_rates(const FiberFamily& family, const BaseState& omega, const ManifoldPoint& x,
                         const BundlePair& pair, std::size_t n, std::optional<double> lambda,
                         std::size_t depth) {
  require_invertible(family);
  if (n == 0 || depth == 0) throw ContractError("bundle_rates: need n >= 1 and depth >= 1");
  const auto syms = omega.symbols(0, n);
  const auto orbit = iterate(family, omega, x, n);

  BundleRates out;
  out.n = n;
  out.depth = std::min(depth, n);
  out.log_expansion.resize(n);
  out.log_contraction.resize(n);
  std::vector<Vector> unstable(n), stable(n);

  Vector w = pair.gamma2;
  CompensatedSum expansion;
  for (std::size_t k = 0; k < n; ++k) {
    unstable[k] = w;
    const Vector y = family.derivative(syms[k], orbit[k]) * w;
    const double a = y.norm();
    out.log_expansion[k] = std::log(a);
    expansion += out.log_expansion[k];
    w = y / a;
  }

  w = finite_time_bundles(family, omega.shifted(static_cast<std::int64_t>(n)), orbit[n], pair.horizon).gamma1;
  CompensatedSum contraction;
  for (std::size_t k = n; k > 0; --k) {
    const Vector y = family.derivative(syms[k - 1], orbit[k - 1]).inverse() * w;
    const double b = y.norm();
    out.log_contraction[k - 1] = -std::log(b);
    contraction += out.log_contraction[k - 1];
    w = y / b;
    stable[k - 1] = w;
  }

  out.rate2 = expansion.value() / static_cast<double>(n);
  out.rate1 = -contraction.value() / static_cast<double>(n);
  out.orbit_angle_min = kInf;
  for (std::size_t k = 0; k < n; ++k) {
    out.orbit_angle_min = std::min(out.orbit_angle_min, line_angle(stable[k], unstable[k]));
  }
  out.lambda = lambda.value_or(0.5 * std::min(out.rate1, out.rate2));
  out.log_c1 = truncated_log_constant(out.log_contraction, 0, out.depth, -1.0, out.lambda);
  out.log_c2 = truncated_log_constant(out.log_expansion, 0, out.depth, 1.0, out.lambda);
  return out;
}

SplittingCertificate hyperbolicity_certificate(const FiberFamily& family,
                                               const std::shared_ptr<const BaseSystem>& system,
                                               std::uint64_t seed, const SplittingOptions& options) {
  require_invertible(family);
  if (options.samples == 0) throw ContractError("hyperbolicity_certificate: need samples >= 1");
  const auto omegas = sample_base(system, seed, options.samples);
  const auto xs = sample_points(family.dim(), seed, options.samples);
  const std::size_t h_low = std::max<std::size_t>(2, options.horizon * 4 / 5);
  const std::size_t h_high = options.horizon * 6 / 5;

  SplittingCertificate cert;
  cert.samples.resize(options.samples);
  std::vector<BundleRates> rates(options.samples);
  parallel_for(options.samples, options.threads, [&](std::size_t i) {
    const BundlePair pair = finite_time_bundles(family, omegas[i], xs[i], options.horizon);
    const BundlePair low = finite_time_bundles(family, omegas[i], xs[i], h_low);
    const BundlePair high = finite_time_bundles(family, omegas[i], xs[i], h_high);
    rates[i] = bundle_rates(family, omegas[i], xs[i], pair, options.n, std::nullopt, options.depth);
    auto& s = cert.samples[i];
    s.index = i;
    s.angle = pair.angle;
    s.orbit_angle_min = rates[i].orbit_angle_min;
    s.rate1 = rates[i].rate1;
    s.rate2 = rates[i].rate2;
    s.residual = invariance_residual(family, omegas[i], xs[i], pair);
    s.horizon_difference = std::max(line_angle(low.gamma1, high.gamma1), line_angle(low.gamma2, high.gamma2));
  });

  cert.rate_min = kInf;
  std::vector<double> r1, r2;
  for (const auto& s : cert.samples) {
    cert.rate_min = std::min({cert.rate_min, s.rate1, s.rate2});
    r1.push_back(s.rate1);
    r2.push_back(s.rate2);
  }
  const MeanEstimate m1 = mean_with_error(r1);
  const MeanEstimate m2 = mean_with_error(r2);
  cert.rate1_mean = m1.mean;
  cert.rate1_std_err = m1.std_err;
  cert.rate2_mean = m2.mean;
  cert.rate2_std_err = m2.std_err;
  cert.lambda = options.lambda.value_or(0.5 * cert.rate_min);

  const std::size_t depth = std::min(options.depth, options.n);
  std::vector<std::size_t> curve_n;
  if (options.n > 2 * depth) {
    for (std::size_t k = 1; k <= kCurvePoints; ++k) {
      const std::size_t j = k * (options.n - depth) / kCurvePoints;
      if (j > 0 && (curve_n.empty() || j > curve_n.back())) curve_n.push_back(j);
    }
  }
  std::vector<std::vector<double>> c1(options.samples), c2(options.samples);
  for (std::size_t i = 0; i < options.samples; ++i) {
    const auto& r = rates[i];
    cert.samples[i].log_c1 = truncated_log_constant(r.log_contraction, 0, depth, -1.0, cert.lambda);
    cert.samples[i].log_c2 = truncated_log_constant(r.log_expansion, 0, depth, 1.0, cert.lambda);
    for (std::size_t j : curve_n) {
      const auto jn = static_cast<double>(j);
      c1[i].push_back(truncated_log_constant(r.log_contraction, j, depth, -1.0, cert.lambda) / jn);
      c2[i].push_back(truncated_log_constant(r.log_expansion, j, depth, 1.0, cert.lambda) / jn);
    }
  }
  for (std::size_t k = 0; k < curve_n.size(); ++k) {
    CompensatedSum s1, s2;
    for (std::size_t i = 0; i < options.samples; ++i) {
      s1 += c1[i][k];
      s2 += c2[i][k];
    }
    const auto count = static_cast<double>(options.samples);
    cert.temperedness_curve.push_back({curve_n[k], s1.value() / count, s2.value() / count});
  }

  cert.angle_min = kInf;
  for (const auto& s : cert.samples) {
    cert.angle_min = std::min({cert.angle_min, s.angle, s.orbit_angle_min});
    cert.invariance_residual_max = std::max(cert.invariance_residual_max, s.residual);
    cert.horizon_difference_max = std::max(cert.horizon_difference_max, s.horizon_difference);
  }

  const bool residual_ok = cert.invariance_residual_max < kResidualLimit;
  const bool angle_ok = cert.angle_min > 0.0;
  const bool rates_ok = cert.lambda > 0.0 && cert.rate_min >= cert.lambda;
  if (residual_ok && angle_ok && rates_ok) {
    cert.verdict = Verdict::certified_hyperbolic;
  } else {
    cert.verdict = Verdict::inconclusive;
    if (!residual_ok) cert.notes.push_back("invariance residual above 1e-6");
    if (!angle_ok) cert.notes.push_back("bundles collapse");
    if (!rates_ok) cert.notes.push_back("a bundle rate is below lambda or not positive");
  }
  return cert;
}

nlohmann::json to_json(const BundlePair& pair) {
  return {{"gamma1", as_vector(pair.gamma1)},
          {"gamma2", as_vector(pair.gamma2)},
          {"horizon", pair.horizon},
          {"angle", pair.angle}};
}

nlohmann::json to_json(const SplittingCertificate& c) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : c.samples) {
    samples.push_back({{"omega", s.index},
                       {"angle", s.angle},
                       {"orbit_angle_min", s.orbit_angle_min},
                       {"rate1", s.rate1},
                       {"rate2", s.rate2},
                       {"residual", s.residual},
                       {"horizon_difference", s.horizon_difference},
                       {"log_C1", s.log_c1},
                       {"log_C2", s.log_c2}});
  }
  nlohmann::json curve = nlohmann::json::array();
  for (const auto& p : c.temperedness_curve) curve.push_back({{"n", p.n}, {"C1", p.c1}, {"C2", p.c2}});
  return {{"lambda", c.lambda},
          {"angle_min", c.angle_min},
          {"invariance_residual_max", c.invariance_residual_max},
          {"horizon_difference_max", c.horizon_difference_max},
          {"rate1_mean", c.rate1_mean},
          {"rate1_std_err", c.rate1_std_err},
          {"rate2_mean", c.rate2_mean},
          {"rate2_std_err", c.rate2_std_err},
          {"rate_min", c.rate_min},
          {"contraction", "exp(-lambda n)"},
          {"samples", samples},
          {"temperedness_curve", curve},
          {"notes", c.notes},
          {"verdict", to_string(c.verdict)}};
}

}  // namespace randhyp
