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

#include "randhyp/cocycle.hpp"

#include <cmath>

#include "randhyp/errors.hpp"
#include "randhyp/statistics.hpp"

namespace randhyp {

namespace {

constexpr double kOverflowLimit = 1e300;

}  // namespace

UnitTangentPoint make_tangent_point(BaseState omega, ManifoldPoint x, Vector v) {
  if (v.size() != x.coords.size()) {
    throw ContractError("tangent vector dimension does not match the manifold point");
  }
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ContractError("tangent vector must be finite and nonzero");
  }
  return {std::move(omega), std::move(x), v / norm};
}

std::vector<ManifoldPoint> iterate(const FiberFamily& family, const BaseState& omega,
                                   const ManifoldPoint& x, std::size_t n) {
  std::vector<ManifoldPoint> orbit;
  orbit.reserve(n + 1);
  orbit.push_back(x);
  const auto syms = omega.symbols(0, n);
  for (std::size_t i = 0; i < n; ++i) orbit.push_back(family.apply(syms[i], orbit.back()));
  return orbit;
}

CocycleMatrix cocycle_product(const FiberFamily& family, const BaseState& omega,
                              const ManifoldPoint& x, std::size_t n) {
  if (n == 0) throw ContractError("cocycle_product: n must be at least 1");
  const auto syms = omega.symbols(0, n);
  ManifoldPoint y = x;
  Matrix product = Matrix::Identity(family.dim(), family.dim());
  for (std::size_t i = 0; i < n; ++i) {
    product = family.derivative(syms[i], y) * product;
    if (product.cwiseAbs().maxCoeff() > kOverflowLimit || !product.allFinite()) {
      throw RangeError("cocycle_product: entries exceed 1e300 after " + std::to_string(i + 1) +
                       " steps; use birkhoff_sum_phi or the spectrum estimator");
    }
    y = family.apply(syms[i], y);
  }
  return {product, n};
}

UnitTangentPoint unit_tangent_step(const FiberFamily& family, const UnitTangentPoint& p) {
  const int s = p.omega.symbol_at(0);
  const Vector w = family.derivative(s, p.x) * p.v;
  return {base_step(p.omega), family.apply(s, p.x), w / w.norm()};
}

double phi(const FiberFamily& family, const UnitTangentPoint& p) {
  const int s = p.omega.symbol_at(0);
  return std::log((family.derivative(s, p.x) * p.v).norm());
}

PhiSeries phi_series(const FiberFamily& family, const UnitTangentPoint& p, std::size_t n) {
  PhiSeries out{{}, p};
  out.values.reserve(n);
  const auto syms = p.omega.symbols(0, n);
  ManifoldPoint x = p.x;
  Vector v = p.v;
  for (std::size_t i = 0; i < n; ++i) {
    const Vector w = family.derivative(syms[i], x) * v;
    const double norm = w.norm();
    out.values.push_back(std::log(norm));
    v = w / norm;
    x = family.apply(syms[i], x);
  }
  out.end = {p.omega.shifted(static_cast<std::int64_t>(n)), std::move(x), std::move(v)};
  return out;
}

double birkhoff_sum_phi(const FiberFamily& family, const UnitTangentPoint& p, std::size_t n) {
  if (n == 0) throw ContractError("birkhoff_sum_phi: n must be at least 1");
  const auto series = phi_series(family, p, n);
  CompensatedSum sum;
  for (double v : series.values) sum += v;
  return sum.value();
}

std::vector<TrajectoryRow> trajectory(const FiberFamily& family, const UnitTangentPoint& p,
                                      std::size_t n) {
  std::vector<TrajectoryRow> rows;
  rows.reserve(n);
  const auto series = phi_series(family, p, n);
  const auto orbit = iterate(family, p.omega, p.x, n);
  for (std::size_t i = 0; i < n; ++i) rows.push_back({i, orbit[i].coords, series.values[i]});
  return rows;
}

}  // namespace randhyp
