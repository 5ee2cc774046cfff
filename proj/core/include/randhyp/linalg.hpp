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

#include <Eigen/Core>
#include <Eigen/LU>

#include "randhyp/statistics.hpp"

namespace randhyp {

// Fibres are the circle (m = 1) or the 2-torus (m = 2); storage is inline.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 2, 2>;
using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 2, 1>;

/// Derivative of an n-fold composition along one orbit, D_x phi_omega^(n).
struct CocycleMatrix {
  Matrix entries;
  std::size_t steps = 0;
};

double operator_norm(const Matrix& m);
double min_singular_value(const Matrix& m);

/// Right singular vector belonging to the smallest singular value, with the
/// first nonzero coordinate made nonnegative.
Vector min_right_singular_vector(const Matrix& m);

/// Left singular vector belonging to the largest singular value, same sign
/// convention.
Vector max_left_singular_vector(const Matrix& m);

/// Angle in [0, pi/2] between the lines spanned by a and b.
double line_angle(const Vector& a, const Vector& b);

/// |sin| of the angle between a and b.
double sine_between(const Vector& a, const Vector& b);

/// Flip sign so that the first coordinate with |v_i| > tiny is positive.
Vector canonical_sign(Vector v);

/// Long matrix product M_{k-1} ... M_0 stored as a max-entry-normalised
/// direction times exp(log_scale). log|det| is accumulated separately, so for
/// 2x2 products the smallest singular value is exact to rounding even when
/// it underflows relative to the largest.
class ScaledProduct {
 public:
  void left_multiply(const Matrix& m);
  const Matrix& normalized() const noexcept { return direction_; }
  double log_max_singular() const;
  double log_min_singular() const;
  std::size_t steps() const noexcept { return steps_; }

 private:
  std::size_t steps_ = 0;
  Matrix direction_;
  CompensatedSum log_scale_;
  CompensatedSum log_abs_det_;
};

}  // namespace randhyp
