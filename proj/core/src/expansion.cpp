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

#include "randhyp/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <nlohmann/json.hpp>

#include "randhyp/errors.hpp"
#include "randhyp/parallel.hpp"
#include "randhyp/random.hpp"
#include "randhyp/statistics.hpp"

namespace randhyp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSupadditivityTolerance = 1e-9;
constexpr double kStrictGapTolerance = 1e-9;
constexpr double kRecursionTolerance = 1e-12;

void check_grid(const FiberFamily& family, std::size_t grid_size) {
  if (grid_size == 0) throw ContractError("grid_size must be positive");
  if (!family.x_independent() && grid_size < 64) {
    throw ContractError("grid_size must be at least 64 for families with x-dependent derivative");
  }
}

ManifoldPoint origin(int dim) {
  return dim == 1 ? ManifoldPoint::circle(0.0) : ManifoldPoint::torus(0.0, 0.0);
}

MinExpansionTable exact_table(const FiberFamily& family, const BaseState& omega,
                              std::size_t depth, std::size_t grid_size) {
  MinExpansionTable table{omega, {}, grid_size, true};
  table.rows.reserve(depth);
  const auto syms = omega.symbols(0, depth);
  const ManifoldPoint x = origin(family.dim());
  ScaledProduct product;
  for (std::size_t n = 1; n <= depth; ++n) {
    product.left_multiply(family.derivative(syms[n - 1], x));
    const double value = product.log_min_singular();
    table.rows.push_back({n, value, value, 0.0, 0.0});
  }
  return table;
}

MinExpansionTable grid_table(const FiberFamily& family, const BaseState& omega,
                             std::size_t depth, std::size_t grid_size) {
  const auto syms = omega.symbols(0, depth);
  std::vector<double> upper(depth, kInf);
  std::vector<double> argmin(depth, 0.0);
  const double h = 1.0 / static_cast<double>(grid_size);
  for (std::size_t j = 0; j < grid_size; ++j) {
    const double x0 = static_cast<double>(j) * h;
    double x = x0;
    double acc = 0.0;
    for (std::size_t i = 0; i < depth; ++i) {
      acc += std::log(std::abs(family.circle_slope(syms[i], x)));
      x = reduce_mod1(family.circle_lift(syms[i], x));
      if (acc < upper[i]) {
        upper[i] = acc;
        argmin[i] = x0;
      }
    }
  }

  const DerivativeBounds& b = family.bounds();
  MinExpansionTable table{omega, {}, grid_size, true};
  table.rows.reserve(depth);
  double power = 1.0;      // S^i
  double power_sum = 0.0;  // sum_{i<n} S^i
  double previous_lower = 0.0;
  for (std::size_t n = 1; n <= depth; ++n) {
    power_sum += power;
    power *= b.sup_dphi;
    const double margin = b.log_deriv_lipschitz == 0.0 ? 0.0 : b.log_deriv_lipschitz * power_sum * h / 2.0;
    const double u = upper[n - 1];
    const double chained = previous_lower + std::log(family.min_step_expansion(syms[n - 1]));
    const double lower = std::min(u, std::max(u - margin, chained));
    table.rows.push_back({n, lower, u, u - lower, argmin[n - 1]});
    previous_lower = lower;
  }
  return table;
}

std::vector<std::size_t> checkpoints(std::size_t n_max) {
  std::vector<std::size_t> out;
  for (std::size_t n = 1; n <= std::min<std::size_t>(n_max, 100); ++n) out.push_back(n);
  for (int k = 1;; ++k) {
    const auto n = static_cast<std::size_t>(std::llround(100.0 * std::pow(10.0, k / 10.0)));
    if (n >= n_max) break;
    if (n > out.back()) out.push_back(n);
  }
  if (out.back() != n_max) out.push_back(n_max);
  return out;
}

void check_lambda(double lambda, std::optional<double> rate_bound) {
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw ConfigError("lambda", "must satisfy 0 < lambda < A (Λ > λ > 0); got " + std::to_string(lambda));
  }
  if (rate_bound && lambda >= *rate_bound) {
    throw ConfigError("lambda", "must satisfy 0 < lambda < A (Λ > λ > 0); got lambda = " +
                                    std::to_string(lambda) + " >= A = " + std::to_string(*rate_bound));
  }
}

}  // namespace

MinExpansionTable min_expansion_table(const FiberFamily& family, const BaseState& omega,
                                      std::size_t depth, std::size_t grid_size) {
  if (depth == 0) throw ContractError("min_expansion_table: depth must be positive");
  check_grid(family, grid_size);
  if (family.x_independent()) return exact_table(family, omega, depth, grid_size);
  return grid_table(family, omega, depth, grid_size);
}

LogExpansionBounds min_log_expansion(const FiberFamily& family, const BaseState& omega,
                                     std::size_t n, std::size_t grid_size) {
  const auto table = min_expansion_table(family, omega, n, grid_size);
  return {table.at(n).lower, table.at(n).upper};
}

SupadditivityReport supadditivity_residuals(const FiberFamily& family, const BaseState& omega,
                                            std::size_t max_n, std::size_t grid_size) {
  if (max_n < 2 || max_n > 20) throw ContractError("supadditivity_residuals: need 2 <= N <= 20");
  std::vector<MinExpansionTable> shifted;
  shifted.reserve(max_n);
  shifted.push_back(min_expansion_table(family, omega, max_n, grid_size));
  for (std::size_t k = 1; k < max_n; ++k) {
    shifted.push_back(min_expansion_table(family, omega.shifted(static_cast<std::int64_t>(k)),
                                          max_n - k, grid_size));
  }
  SupadditivityReport report;
  report.min_residual = kInf;
  const auto& t0 = shifted[0];
  for (std::size_t n = 1; n < max_n; ++n) {
    for (std::size_t m = 1; n + m <= max_n; ++m) {
      const auto& tn = shifted[n];
      SupadditivityEntry e{n, m, t0.at(n + m).upper - t0.at(n).lower - tn.at(m).lower,
                           t0.at(n + m).upper - t0.at(n).upper - tn.at(m).upper};
      report.min_residual = std::min(report.min_residual, e.residual);
      if (e.gap > kStrictGapTolerance) ++report.strict_gaps;
      report.table.push_back(e);
    }
  }
  return report;
}

UniformRateEstimate uniform_rate_estimate(const FiberFamily& family,
                                          const std::shared_ptr<const BaseSystem>& system,
                                          std::uint64_t seed, std::size_t samples,
                                          std::size_t n_max, std::size_t grid_size,
                                          unsigned threads) {
  if (n_max < 4) throw ContractError("uniform_rate_estimate: need n_max >= 4");
  if (samples == 0) throw ContractError("uniform_rate_estimate: need samples >= 1");
  check_grid(family, grid_size);
  const auto omegas = sample_base(system, seed, samples);
  const auto points = checkpoints(n_max);
  std::vector<std::vector<double>> upper(samples), lower(samples);
  parallel_for(samples, threads, [&](std::size_t i) {
    const auto table = min_expansion_table(family, omegas[i], n_max, grid_size);
    upper[i].reserve(points.size());
    lower[i].reserve(points.size());
    for (std::size_t n : points) {
      upper[i].push_back(table.at(n).upper / static_cast<double>(n));
      lower[i].push_back(table.at(n).lower / static_cast<double>(n));
    }
  });

  UniformRateEstimate out;
  out.n_max = n_max;
  out.samples = samples;
  out.trend_n = points;
  for (std::size_t k = 0; k < points.size(); ++k) {
    CompensatedSum su, sl;
    for (std::size_t i = 0; i < samples; ++i) {
      su += upper[i][k];
      sl += lower[i][k];
    }
    out.trend.push_back(su.value() / static_cast<double>(samples));
    out.trend_lower.push_back(sl.value() / static_cast<double>(samples));
  }
  for (std::size_t i = 0; i < samples; ++i) out.per_sample.push_back(upper[i].back());
  const MeanEstimate est = mean_with_error(out.per_sample);
  out.a_estimate = out.trend.back();
  out.a_lower = out.trend_lower.back();
  out.std_err = est.std_err;
  return out;
}

TemperedConstant tempered_constant(const MinExpansionTable& table, double lambda) {
  TemperedConstant out;
  out.depth = table.rows.size();
  out.log_value = kInf;
  for (const auto& row : table.rows) {
    const double v = row.lower - lambda * static_cast<double>(row.n);
    if (v < out.log_value) {
      out.log_value = v;
      out.attained_at = row.n;
    }
  }
  out.value = std::exp(out.log_value);
  return out;
}

TemperedConstant tempered_constant(const FiberFamily& family, const BaseState& omega,
                                   double lambda, std::size_t depth, std::size_t grid_size,
                                   std::optional<double> rate_bound) {
  check_lambda(lambda, rate_bound);
  if (depth == 0) throw ContractError("tempered_constant: depth must be positive");
  return tempered_constant(min_expansion_table(family, omega, depth, grid_size), lambda);
}

std::vector<CurvePoint> temperedness_curve(const FiberFamily& family,
                                           const std::shared_ptr<const BaseSystem>& system,
                                           std::uint64_t seed, double lambda,
                                           std::size_t n_max, std::size_t depth,
                                           std::size_t grid_size, std::size_t stride,
                                           unsigned threads) {
  check_lambda(lambda, std::nullopt);
  if (n_max == 0 || stride == 0 || depth == 0) {
    throw ContractError("temperedness_curve: n_max, stride and depth must be positive");
  }
  const BaseState omega = sample_base(system, seed, 1).front();
  std::vector<std::size_t> ns;
  for (std::size_t n = stride; n <= n_max; n += stride) ns.push_back(n);
  if (ns.empty() || ns.back() != n_max) ns.push_back(n_max);
  std::vector<CurvePoint> curve(ns.size());
  parallel_for(ns.size(), threads, [&](std::size_t k) {
    const std::size_t n = ns[k];
    const auto table = min_expansion_table(family, omega.shifted(static_cast<std::int64_t>(n)),
                                           depth, grid_size);
    curve[k] = {n, tempered_constant(table, lambda).log_value / static_cast<double>(n)};
  });
  return curve;
}

CRecursionCheck c_recursion_check(const FiberFamily& family, const BaseState& omega,
                                  double lambda, std::size_t depth, std::size_t grid_size) {
  check_lambda(lambda, std::nullopt);
  const auto here = min_expansion_table(family, omega, depth, grid_size);
  const auto next = min_expansion_table(family, omega.shifted(1), depth, grid_size);
  const TemperedConstant c_here = tempered_constant(here, lambda);
  const TemperedConstant c_next = tempered_constant(next, lambda);
  const double log_d1 = here.at(1).lower;
  CRecursionCheck out;
  out.log_ratio = c_next.log_value - c_here.log_value;
  out.log_bound = std::max(std::log(family.max_step_norm(omega.symbol_at(1))), lambda) - log_d1;
  out.attained_beyond_first = c_here.attained_at >= 2;
  out.chain_margin = c_here.log_value - (c_next.log_value - lambda + log_d1);
  out.satisfied = out.log_ratio <= out.log_bound + kRecursionTolerance &&
                  (!out.attained_beyond_first || out.chain_margin >= -kRecursionTolerance);
  return out;
}

ExpansionCertificate certify_expansion(const FiberFamily& family,
                                       const std::shared_ptr<const BaseSystem>& system,
                                       std::uint64_t seed, const CertifyOptions& options) {
  ExpansionCertificate cert;
  cert.rate = uniform_rate_estimate(family, system, seed, options.samples, options.n_max,
                                    options.grid_size, options.threads);
  cert.a_estimate = cert.rate.a_estimate;
  const auto omegas = sample_base(system, seed, options.samples);
  cert.first_table = min_expansion_table(family, omegas.front(), options.n_max, options.grid_size);
  cert.grid_certified = cert.first_table->certified;

  if (!(cert.a_estimate > 0.0)) {
    cert.lambda = 0.0;
    cert.verdict = Verdict::violated;
    cert.notes.push_back("A_n/n <= 0 at n_max: no uniform expansion");
    return cert;
  }
  cert.lambda = options.lambda.value_or(0.5 * cert.a_estimate);
  check_lambda(cert.lambda, cert.a_estimate);

  // The recursion inequalities are asserted only when A_n is computed exactly;
  // grid families report the excess.
  const bool exact = family.x_independent();
  std::vector<double> excess(options.samples, -kInf);
  cert.c_samples.resize(options.samples);
  parallel_for(options.samples, options.threads, [&](std::size_t i) {
    const auto table = min_expansion_table(family, omegas[i], options.depth, options.grid_size);
    const auto c = tempered_constant(table, cert.lambda);
    cert.c_samples[i] = {i, c.value, c.log_value, c.attained_at};
    const auto check = c_recursion_check(family, omegas[i], cert.lambda, options.depth,
                                         options.grid_size);
    excess[i] = std::max(check.log_ratio - check.log_bound,
                         check.attained_beyond_first ? -check.chain_margin : -kInf);
  });
  cert.c_recursion_max_excess = *std::max_element(excess.begin(), excess.end());

  const std::size_t supadd_count = std::min(options.supadditivity_samples, options.samples);
  std::vector<SupadditivityReport> supadd(supadd_count);
  parallel_for(supadd_count, options.threads, [&](std::size_t i) {
    supadd[i] = supadditivity_residuals(family, omegas[i], options.supadditivity_n, options.grid_size);
  });
  cert.supadditivity_min_residual = kInf;
  for (const auto& r : supadd) {
    cert.supadditivity_min_residual = std::min(cert.supadditivity_min_residual, r.min_residual);
    cert.supadditivity_strict_gaps += r.strict_gaps;
  }

  std::vector<std::vector<CurvePoint>> curves(options.curve_samples);
  for (std::size_t j = 0; j < options.curve_samples; ++j) {
    curves[j] = temperedness_curve(family, system, derive_seed(seed ^ kCurveStream, j), cert.lambda,
                                   options.curve_n_max, options.depth, options.grid_size,
                                   options.curve_stride, options.threads);
  }
  if (!curves.empty()) {
    cert.temperedness_curve = curves.front();
    for (std::size_t k = 0; k < cert.temperedness_curve.size(); ++k) {
      CompensatedSum s;
      for (const auto& c : curves) s += c[k].value;
      cert.temperedness_curve[k].value = s.value() / static_cast<double>(curves.size());
    }
  }

  const bool all_positive = std::all_of(cert.c_samples.begin(), cert.c_samples.end(),
                                        [](const ConstantSample& c) { return std::isfinite(c.log_value); });
  const bool tempered = !cert.temperedness_curve.empty() &&
                        std::abs(cert.temperedness_curve.back().value) < options.temperedness_threshold;
  if (cert.supadditivity_min_residual < -kSupadditivityTolerance) {
    cert.verdict = Verdict::violated;
    cert.notes.push_back("supadditivity residual below tolerance");
  } else if (exact && cert.c_recursion_max_excess > kRecursionTolerance) {
    cert.verdict = Verdict::violated;
    cert.notes.push_back("C-recursion bound violated");
  } else if (all_positive && tempered && cert.grid_certified) {
    cert.verdict = Verdict::certified_expanding;
  } else {
    cert.verdict = Verdict::inconclusive;
    if (!all_positive) cert.notes.push_back("a sampled C(omega) is not positive");
    if (!tempered) cert.notes.push_back("temperedness curve above threshold at n_max");
  }
  if (cert.supadditivity_strict_gaps > 0) {
    cert.notes.push_back("strict supadditivity gaps observed: " +
                         std::to_string(cert.supadditivity_strict_gaps));
  }
  return cert;
}

RateFunction analytic_step_rates(const FiberFamily& family) {
  return [&family](int symbol) { return family.min_step_expansion(symbol); };
}

CorollaryResult variable_rate_corollary(const FiberFamily& family,
                                        const std::shared_ptr<const BaseSystem>& system,
                                        std::uint64_t seed, std::size_t samples,
                                        const RateFunction& rates,
                                        const CorollaryOptions& options) {
  if (samples == 0) throw ContractError("variable_rate_corollary: need samples >= 1");
  const auto omegas = sample_base(system, seed, samples);
  std::vector<double> logs(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double r = rates(omegas[i].symbol_at(0));
    if (!std::isfinite(r) || r <= 0.0) throw ContractError("per-step rates must be positive and finite");
    logs[i] = std::log(r);
  }
  const MeanEstimate est = mean_with_error(logs);
  CorollaryResult out{est.mean, est.std_err, samples, Verdict::inconclusive, std::nullopt, std::nullopt};
  if (est.mean > 0.0 && est.mean > 3.0 * est.std_err) {
    out.verdict = Verdict::positive;
    const auto rate = uniform_rate_estimate(family, system, seed, options.rate_samples,
                                            options.n_max, options.grid_size, options.threads);
    out.a_estimate = rate.a_estimate;
    if (rate.a_estimate > 0.0) out.constant_rate = 0.5 * rate.a_estimate;
  }
  return out;
}

nlohmann::json to_json(const MinExpansionTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"n", r.n}, {"lower", r.lower}, {"upper", r.upper}, {"slack", r.slack},
                    {"argmin_x", r.argmin_x}});
  }
  return {{"grid_size", table.grid_size}, {"certified", table.certified}, {"rows", rows}};
}

nlohmann::json to_json(const SupadditivityReport& report) {
  nlohmann::json table = nlohmann::json::array();
  for (const auto& e : report.table) {
    table.push_back({{"n", e.n}, {"m", e.m}, {"residual", e.residual}, {"gap", e.gap}});
  }
  return {{"min_residual", report.min_residual}, {"strict_gaps", report.strict_gaps}, {"table", table}};
}

nlohmann::json to_json(const UniformRateEstimate& e) {
  return {{"A_estimate", e.a_estimate}, {"A_lower", e.a_lower}, {"std_err", e.std_err},
          {"n_max", e.n_max},           {"samples", e.samples}, {"trend_n", e.trend_n},
          {"trend", e.trend},           {"trend_lower", e.trend_lower}};
}

nlohmann::json to_json(const ExpansionCertificate& c) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : c.c_samples) {
    samples.push_back({{"omega", s.index}, {"C", s.value}, {"log_C", s.log_value},
                       {"attained_at", s.attained_at}});
  }
  nlohmann::json curve = nlohmann::json::array();
  for (const auto& p : c.temperedness_curve) curve.push_back({{"n", p.n}, {"value", p.value}});
  return {{"A_estimate", c.a_estimate},
          {"lambda", c.lambda},
          {"C_samples", samples},
          {"C_truncated", true},
          {"temperedness_curve", curve},
          {"supadditivity_min_residual", c.supadditivity_min_residual},
          {"supadditivity_strict_gaps", c.supadditivity_strict_gaps},
          {"c_recursion_max_excess", c.c_recursion_max_excess},
          {"grid_certified", c.grid_certified},
          {"rate", to_json(c.rate)},
          {"notes", c.notes},
          {"verdict", to_string(c.verdict)}};
}

nlohmann::json to_json(const CorollaryResult& r) {
  nlohmann::json j{{"mean_log_rate", r.mean_log_rate},
                   {"std_err", r.std_err},
                   {"samples", r.samples},
                   {"verdict", to_string(r.verdict)}};
  j["A_estimate"] = r.a_estimate ? nlohmann::json(*r.a_estimate) : nlohmann::json(nullptr);
  j["constant_rate"] = r.constant_rate ? nlohmann::json(*r.constant_rate) : nlohmann::json(nullptr);
  return j;
}

}  // namespace randhyp
