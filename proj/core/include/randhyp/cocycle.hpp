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
#include <vector>

#include "randhyp/base_dynamics.hpp"
#include "randhyp/fiber_dynamics.hpp"
#include "randhyp/linalg.hpp"

namespace randhyp {

/// Point (omega, x, v) of Omega x SM.
struct UnitTangentPoint {
  BaseState omega;
  ManifoldPoint x;
  Vector v;
};

/// Normalises v; throws ContractError for a zero vector or a dimension
/// mismatch between x and v.
UnitTangentPoint make_tangent_point(BaseState omega, ManifoldPoint x, Vector v);

/// (x, phi^(1)(x), ..., phi^(n)(x)); entry 0 is x.
std::vector<ManifoldPoint> iterate(const FiberFamily& family, const BaseState& omega,
                                   const ManifoldPoint& x, std::size_t n);

/// D_x phi_omega^(n) by left-multiplying Jacobians along the orbit. Throws
/// RangeError once an entry exceeds 1e300; use the log-space routines below
/// for long horizons.
CocycleMatrix cocycle_product(const FiberFamily& family, const BaseState& omega,
                              const ManifoldPoint& x, std::size_t n);

/// One step of the projectivised tangent map:
/// (omega, x, v) -> (theta omega, phi_omega(x), D_x phi_omega v / |D_x phi_omega v|).
UnitTangentPoint unit_tangent_step(const FiberFamily& family, const UnitTangentPoint& p);

/// log |D_x phi_omega v|.
double phi(const FiberFamily& family, const UnitTangentPoint& p);

/// sum_{i<n} phi(TF^i p), which telescopes to log |D_x phi_omega^(n) v|.
double birkhoff_sum_phi(const FiberFamily& family, const UnitTangentPoint& p, std::size_t n);

/// Per-step values phi(TF^i p), i < n, together with the end point.
struct PhiSeries {
  std::vector<double> values;
  UnitTangentPoint end;
};
PhiSeries phi_series(const FiberFamily& family, const UnitTangentPoint& p, std::size_t n);

/// Trajectory row for CSV export: step i < n, coordinates of x_i, phi at step i.
struct TrajectoryRow {
  std::size_t step = 0;
  Vector coords;
  double log_deriv = 0.0;
};
std::vector<TrajectoryRow> trajectory(const FiberFamily& family, const UnitTangentPoint& p,
                                      std::size_t n);

}  // namespace randhyp
