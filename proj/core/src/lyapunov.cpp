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

#include "randhyp/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "randhyp/errors.hpp"
#include "randhyp/parallel.hpp"
#include "randhyp/random.hpp"
#include "randhyp/statistics.hpp"

namespace randhyp {

ExponentEstimate top_exponent(const FiberFamily& family, const UnitTangentPoint& p,
                              std::size_t n, std::size_t batches) {
  if (batches == 0 || n < batches) throw ContractError("top_exponent: need n >= batches >= 1");
  const std::size_t used = (n / batches) * batches;
  const auto series = phi_series(family, p, used);
  const MeanEstimate est = batch_means(series.values, batches);
  return {est.mean, used, batches > 1 ? est.std_err : 0.0, batches};
}

SpectrumEstimate oseledets_spectrum(const FiberFamily& family, const BaseState& omega,
                                    const ManifoldPoint& x, std::size_t n) {
  const int m = family.dim();
  if (n < static_cast<std::size_t>(m)) throw ContractError("oseledets_spectrum: need n >= dim");
  const auto syms = omega.symbols(0, n);
  ManifoldPoint y = x;
  Matrix frame = Matrix::Identity(m, m);
  std::vector<CompensatedSum> logs(static_cast<std::size_t>(m));
  CompensatedSum log_det;
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix d = family.derivative(syms[i], y);
    log_det += std::log(std::abs(d.determinant()));
    Matrix z = d * frame;
    // Gram-Schmidt on the columns of z.
    for (int c = 0; c < m; ++c) {
      for (int prev = 0; prev < c; ++prev) {
        z.col(c) -= z.col(prev).dot(z.col(c)) * z.col(prev);
      }
      const double r = z.col(c).norm();
      logs[static_cast<std::size_t>(c)] += std::log(r);
      z.col(c) /= r;
    }
    frame = z;
    y = family.apply(syms[i], y);
  }
  SpectrumEstimate out;
  out.n = n;
  for (const auto& s : logs) out.exponents.push_back(s.value() / static_cast<double>(n));
  std::sort(out.exponents.begin(), out.exponents.end());
  out.log_det_mean = log_det.value() / static_cast<double>(n);
  return out;
}

std::vector<ManifoldPoint> sample_points(int dim, std::uint64_t seed, std::size_t count) {
  std::vector<ManifoldPoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = derive_seed(seed ^ kFiberPointStream, i);
    if (dim == 1) out.push_back(ManifoldPoint::circle(keyed_uniform(s, 0)));
    else out.push_back(ManifoldPoint::torus(keyed_uniform(s, 0), keyed_uniform(s, 1)));
  }
  return out;
}

std::vector<Vector> sample_directions(int dim, std::uint64_t seed, std::size_t count) {
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = derive_seed(seed ^ kTangentStream, i);
    if (dim == 1) {
      out.push_back(Vector::Constant(1, keyed_uniform(s, 0) < 0.5 ? -1.0 : 1.0));
    } else {
      const double t = 2.0 * std::numbers::pi * keyed_uniform(s, 0);
      Vector v(2);
      v << std::cos(t), std::sin(t);
      out.push_back(v);
    }
  }
  return out;
}

PositivityReport exponent_positivity_report(const FiberFamily& family,
                                            const std::shared_ptr<const BaseSystem>& system,
                                            std::uint64_t seed, std::size_t samples,
                                            std::size_t n, unsigned threads) {
  if (samples == 0) throw ContractError("exponent_positivity_report: samples must be positive");
  const auto omegas = sample_base(system, seed, samples);
  const auto points = sample_points(family.dim(), seed, samples);
  PositivityReport report;
  report.n = n;
  report.per_sample.resize(samples);
  parallel_for(samples, threads, [&](std::size_t i) {
    const auto spec = oseledets_spectrum(family, omegas[i], points[i], n);
    report.per_sample[i] = {i, points[i], spec.exponents};
  });
  std::size_t all_pos = 0, top_pos = 0;
  report.min_exponent = report.per_sample[0].exponents.front();
  for (const auto& s : report.per_sample) {
    if (s.exponents.front() > 0.0) ++all_pos;
    if (s.exponents.back() > 0.0) ++top_pos;
    if (s.exponents.front() < report.min_exponent) {
      report.min_exponent = s.exponents.front();
      report.argmin = s.index;
    }
  }
  report.fraction_positive = static_cast<double>(all_pos) / static_cast<double>(samples);
  report.fraction_top_positive = static_cast<double>(top_pos) / static_cast<double>(samples);
  return report;
}

nlohmann::json to_json(const PositivityReport& report) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& s : report.per_sample) {
    per.push_back({{"index", s.index},
                   {"x", std::vector<double>(s.x.coords.data(), s.x.coords.data() + s.x.dim())},
                   {"exponents", s.exponents}});
  }
  return {{"min_exponent", report.min_exponent},
          {"fraction_positive", report.fraction_positive},
          {"fraction_top_positive", report.fraction_top_positive},
          {"argmin_sample", report.argmin},
          {"n", report.n},
          {"per_sample", per}};
}

}  // namespace randhyp
