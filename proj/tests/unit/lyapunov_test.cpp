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

#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "fixtures.hpp"
#include "randhyp/cocycle.hpp"
#include "randhyp/errors.hpp"
#include "randhyp/lyapunov.hpp"

namespace randhyp {
namespace {

using namespace randhyp::testing;

Vector axis(int dim, int c) {
  Vector v = Vector::Zero(dim);
  v(c) = 1.0;
  return v;
}

TEST(TopExponent, DoublingIsExact) {
  const auto p = make_tangent_point(BaseState::from_seed(dirac(), 0), ManifoldPoint::circle(0.3),
                                    axis(1, 0));
  const auto e = top_exponent(doubling(), p, 1000);
  EXPECT_NEAR(e.value, kLog2, 1e-15);
  EXPECT_EQ(e.batch_std_err, 0.0);
}

// Against the symbol-count oracle: the exponent is the mean log degree along
// the realised word.
TEST(TopExponent, LinearCircleMatchesSymbolCount) {
  const auto omega = BaseState::from_seed(fair_coin(), 21);
  const std::size_t n = 100000;
  const auto p = make_tangent_point(omega, ManifoldPoint::circle(0.4), axis(1, 0));
  const auto e = top_exponent(linear_circle(), p, n);
  std::size_t threes = 0;
  for (int s : omega.symbols(0, n)) threes += (s == 1);
  const double oracle =
      (static_cast<double>(n - threes) * kLog2 + static_cast<double>(threes) * kLog3) / n;
  EXPECT_NEAR(e.value, oracle, 1e-12);
  EXPECT_NEAR(e.value, kHalfLog6, 0.01);
}

TEST(TopExponent, DiagonalAxisIsInvariant) {
  const auto p = make_tangent_point(BaseState::from_seed(dirac(), 0), ManifoldPoint::torus(0.1, 0.2),
                                    axis(2, 0));
  EXPECT_NEAR(top_exponent(diagonal({2.0}, {3.0}), p, 1000).value, kLog2, 1e-14);
}

TEST(TopExponent, RequiresEnoughSteps) {
  const auto p = make_tangent_point(BaseState::from_seed(dirac(), 0), ManifoldPoint::circle(0.3),
                                    axis(1, 0));
  EXPECT_THROW(top_exponent(doubling(), p, 5, 20), ContractError);
}

TEST(OseledetsSpectrum, CatEigenvalues) {
  const auto s = oseledets_spectrum(cat(), BaseState::from_seed(dirac(), 0),
                                    ManifoldPoint::torus(0.2, 0.3), 1000);
  // Oracle: eigenvalues of [[2,1],[1,1]].
  Matrix m(2, 2);
  m << 2, 1, 1, 1;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(m);
  ASSERT_EQ(s.exponents.size(), 2u);
  EXPECT_NEAR(s.exponents[0], std::log(eig.eigenvalues()(0)), 1e-3);
  EXPECT_NEAR(s.exponents[1], std::log(eig.eigenvalues()(1)), 1e-3);
  EXPECT_NEAR(s.exponents[1], kCatExponent, 1e-3);
}

TEST(OseledetsSpectrum, DiagonalDeterministic) {
  const auto s = oseledets_spectrum(diagonal({2.0}, {3.0}), BaseState::from_seed(dirac(), 0),
                                    ManifoldPoint::torus(0.5, 0.5), 500);
  EXPECT_NEAR(s.exponents[0], kLog2, 1e-9);
  EXPECT_NEAR(s.exponents[1], kLog3, 1e-9);
}

TEST(OseledetsSpectrum, RandomDiagonalMeans) {
  const auto s = oseledets_spectrum(diagonal({2.0, 4.0}, {3.0, 3.0}),
                                    BaseState::from_seed(fair_coin(), 4),
                                    ManifoldPoint::torus(0.5, 0.5), 100000);
  const double mean_a = 0.5 * (std::log(2.0) + std::log(4.0));
  // Standard deviation of one log-a step is log(2)/2; 5 SE at n = 1e5.
  const double tol = 5.0 * 0.5 * kLog2 / std::sqrt(1e5);
  EXPECT_NEAR(s.exponents[0], mean_a, tol);
  EXPECT_NEAR(s.exponents[1], kLog3, 1e-9);
}

TEST(OseledetsSpectrum, SumRuleOnAllFamilies) {
  for (const auto& entry : catalog()) {
    for (const auto& omega : sample_base(entry.base, 9, 10)) {
      const auto x = entry.family.dim() == 1 ? ManifoldPoint::circle(0.37)
                                             : ManifoldPoint::torus(0.37, 0.81);
      const auto s = oseledets_spectrum(entry.family, omega, x, 2000);
      double sum = 0.0;
      for (double e : s.exponents) sum += e;
      // Oracle: direct sum of log |det| along the orbit.
      double logdet = 0.0;
      auto y = x;
      for (int sym : omega.symbols(0, 2000)) {
        logdet += std::log(std::abs(entry.family.derivative(sym, y).determinant()));
        y = entry.family.apply(sym, y);
      }
      EXPECT_NEAR(sum, logdet / 2000.0, 1e-8) << entry.name;
      EXPECT_NEAR(sum, s.log_det_mean, 1e-12) << entry.name;
    }
  }
}

// The incremental estimator agrees with the raw product while it is safe to form.
TEST(TopExponent, RenormalizedMatchesRawProduct) {
  for (const auto& entry : catalog()) {
    const auto omega = BaseState::from_seed(entry.base, 12);
    const auto x = entry.family.dim() == 1 ? ManifoldPoint::circle(0.21)
                                           : ManifoldPoint::torus(0.21, 0.64);
    const Vector v = Vector::Ones(entry.family.dim()).normalized();
    for (std::size_t n = 1; n <= 30; ++n) {
      const auto p = make_tangent_point(omega, x, v);
      const double raw = std::log((cocycle_product(entry.family, omega, x, n).entries * v).norm()) / n;
      EXPECT_NEAR(top_exponent(entry.family, p, n, 1).value, raw, 1e-9) << entry.name << " n=" << n;
    }
  }
}

TEST(TopExponent, IndependentOfGenericStartVector) {
  const auto f = random_cat();
  const auto omega = BaseState::from_seed(fair_coin(), 2);
  const auto x = ManifoldPoint::torus(0.3, 0.6);
  const auto dirs = sample_directions(2, 5, 2);
  const auto a = top_exponent(f, make_tangent_point(omega, x, dirs[0]), 20000);
  const auto b = top_exponent(f, make_tangent_point(omega, x, dirs[1]), 20000);
  EXPECT_LE(std::abs(a.value - b.value), 2.0 * (a.batch_std_err + b.batch_std_err));
}

TEST(OseledetsSpectrum, BottomNeverExceedsTop) {
  for (const auto& entry : catalog()) {
    const auto omega = BaseState::from_seed(entry.base, 3);
    const auto x = entry.family.dim() == 1 ? ManifoldPoint::circle(0.3) : ManifoldPoint::torus(0.3, 0.7);
    const auto p = make_tangent_point(omega, x, axis(entry.family.dim(), 0));
    const auto top = top_exponent(entry.family, p, 4000);
    const auto s = oseledets_spectrum(entry.family, omega, x, 4000);
    EXPECT_LE(s.exponents.front(), top.value + 1e-6) << entry.name;
  }
}

TEST(Positivity, Doubling) {
  const auto r = exponent_positivity_report(doubling(), dirac(), 1, 100, 1000);
  EXPECT_NEAR(r.min_exponent, kLog2, 1e-15);
  EXPECT_EQ(r.fraction_positive, 1.0);
}

TEST(Positivity, PerturbedStaysAboveDerivativeFloor) {
  const auto r = exponent_positivity_report(perturbed(0.1, 2), fair_coin(), 2, 100, 10000, 2);
  EXPECT_GE(r.min_exponent, kPerturbedFloor);
  EXPECT_EQ(r.fraction_positive, 1.0);
  EXPECT_EQ(r.per_sample.size(), 100u);
}

TEST(Positivity, RandomCatTopExponentPositive) {
  const auto r = exponent_positivity_report(random_cat(), fair_coin(), 3, 100, 1000);
  EXPECT_EQ(r.fraction_top_positive, 1.0);
  EXPECT_LT(r.fraction_positive, 1.0);  // area preserving: bottom exponent is negative
}

TEST(Positivity, ThreadCountDoesNotChangeResult) {
  const auto a = exponent_positivity_report(perturbed(0.1, 2), fair_coin(), 4, 16, 500, 1);
  const auto b = exponent_positivity_report(perturbed(0.1, 2), fair_coin(), 4, 16, 500, 3);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

}  // namespace
}  // namespace randhyp
