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

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "randhyp/base_dynamics.hpp"
#include "randhyp/linalg.hpp"

namespace randhyp {

/// Point of the circle (dim 1) or the flat 2-torus (dim 2); every coordinate
/// lies in [0, 1).
struct ManifoldPoint {
  Vector coords;

  int dim() const noexcept { return static_cast<int>(coords.size()); }

  static ManifoldPoint circle(double x);
  static ManifoldPoint torus(double x, double y);
  /// Reduces each coordinate mod 1.
  static ManifoldPoint from_lift(const Vector& lifted);
};

/// Reduction mod 1 into [0, 1). Results in [1 - 1e-15, 1) snap to 0 so the
/// seam does not produce two distinct points.
double reduce_mod1(double x) noexcept;

/// Distance on R/Z.
double circle_distance(double a, double b) noexcept;

/// Max over coordinates of the circle distance.
double manifold_distance(const ManifoldPoint& a, const ManifoldPoint& b);

enum class FamilyKind { doubling, perturbed_doubling, bernoulli_linear, diagonal_cocycle, random_cat };

std::string to_string(FamilyKind kind);

/// Global bounds: sup |D phi|, sup |D phi^{-1}| and the Lipschitz constant of
/// x -> log |D_x phi v|, uniform over omega and unit v.
struct DerivativeBounds {
  double sup_dphi = 0.0;
  double sup_dphi_inv = 0.0;
  double log_deriv_lipschitz = 0.0;
};

/// Wire format {"family": "...", "params": {...}}.
struct FiberFamilySpec {
  FamilyKind kind = FamilyKind::doubling;
  nlohmann::json params = nlohmann::json::object();
};

FiberFamilySpec parse_fiber_spec(const nlohmann::json& j, const std::string& path = "fiber");

/// Catalogue fibre family omega -> phi_omega. Parameters depend on omega only
/// through symbol_at(omega, 0). Immutable; safe to share between threads.
///
///   doubling            x -> 2x                          {}
///   perturbed-doubling  x -> 2x + eps_s sin(2 pi x)      {"eps_max": 0.1}
///                       eps_s = eps_max * s / (alphabet_size - 1)
///                       (eps_s = eps_max for a one-symbol alphabet)
///   bernoulli-linear    x -> d_s x                       {"degrees": [2, 3]}
///   diagonal-cocycle    (x,y) -> (a_s x, b_s y)          {"a": [2, 3], "b": [3, 4]}
///   random-cat          (x,y) -> M_s (x,y)               {"matrices": [[[2,1],[1,1]], [[3,1],[2,1]]]}
///
/// All maps are reduced mod 1.
class FiberFamily {
 public:
  /// Validates parameters against the base alphabet; throws ConfigError.
  static FiberFamily create(const FiberFamilySpec& spec, int alphabet_size);

  FamilyKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  int alphabet_size() const noexcept { return alphabet_size_; }
  bool invertible() const noexcept { return invertible_; }
  bool expanding() const noexcept { return expanding_; }
  /// Derivative independent of x (linear families).
  bool x_independent() const noexcept { return kind_ != FamilyKind::perturbed_doubling; }
  const DerivativeBounds& bounds() const noexcept { return bounds_; }
  /// Fully populated parameters (defaults filled), as echoed in reports.
  nlohmann::json spec_json() const;

  ManifoldPoint apply(int symbol, const ManifoldPoint& x) const;
  Matrix derivative(int symbol, const ManifoldPoint& x) const;
  ManifoldPoint inverse(int symbol, const ManifoldPoint& x) const;
  /// The map on the universal cover R^m (no reduction).
  Vector lift(int symbol, const Vector& x) const;

  // Scalar fast paths for circle families.
  double circle_lift(int symbol, double x) const noexcept;
  double circle_slope(int symbol, double x) const noexcept;

  /// min over x and unit v of |D_x phi v| for this symbol (exact).
  double min_step_expansion(int symbol) const;
  /// sup over x of |D_x phi| for this symbol (exact).
  double max_step_norm(int symbol) const;
  /// Perturbation amplitude eps_s of perturbed-doubling (0 for other families).
  double epsilon(int symbol) const noexcept;

 private:
  FiberFamily() = default;
  void check_symbol(int symbol) const;
  void check_point(const ManifoldPoint& x) const;

  FamilyKind kind_ = FamilyKind::doubling;
  int dim_ = 1;
  int alphabet_size_ = 1;
  bool invertible_ = false;
  bool expanding_ = true;
  DerivativeBounds bounds_;
  double eps_max_ = 0.0;
  std::vector<double> slopes_;     // bernoulli-linear degrees
  std::vector<Matrix> matrices_;   // diagonal / cat, one per symbol
  std::vector<Matrix> inverses_;
};

ManifoldPoint fiber_apply(const FiberFamily& family, const BaseState& omega, const ManifoldPoint& x);
CocycleMatrix fiber_derivative(const FiberFamily& family, const BaseState& omega, const ManifoldPoint& x);
/// Throws UnsupportedError for non-invertible families.
ManifoldPoint fiber_inverse(const FiberFamily& family, const BaseState& omega, const ManifoldPoint& x);
DerivativeBounds derivative_bounds(const FiberFamily& family);

}  // namespace randhyp
