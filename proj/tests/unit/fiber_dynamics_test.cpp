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
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "randhyp/errors.hpp"
#include "randhyp/fiber_dynamics.hpp"

namespace randhyp {
namespace {

using namespace randhyp::testing;

constexpr double kPi = std::numbers::pi;

ManifoldPoint random_point(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return dim == 1 ? ManifoldPoint::circle(u(rng)) : ManifoldPoint::torus(u(rng), u(rng));
}

TEST(FiberApply, Examples) {
  const auto sym0 = BaseState::from_seed(dirac(), 0);
  EXPECT_NEAR(fiber_apply(doubling(), sym0, ManifoldPoint::circle(0.3)).coords(0), 0.6, 1e-15);
  const auto lin = linear_circle();
  EXPECT_NEAR(lin.apply(1, ManifoldPoint::circle(0.5)).coords(0), 0.5, 1e-15);
  EXPECT_NEAR(perturbed().apply(0, ManifoldPoint::circle(0.25)).coords(0), 0.6, 1e-15);
}

TEST(FiberApply, DimensionMismatchIsContractError) {
  EXPECT_THROW(doubling().apply(0, ManifoldPoint::torus(0.1, 0.2)), ContractError);
  EXPECT_THROW(cat().derivative(0, ManifoldPoint::circle(0.1)), ContractError);
}

TEST(FiberDerivative, Examples) {
  EXPECT_EQ(doubling().derivative(0, ManifoldPoint::circle(0.77))(0, 0), 2.0);
  EXPECT_NEAR(perturbed().derivative(0, ManifoldPoint::circle(0.5))(0, 0), 2.0 - 0.2 * kPi,
              1e-15);
  Matrix expected(2, 2);
  expected << 2, 1, 1, 1;
  EXPECT_EQ(random_cat().derivative(0, ManifoldPoint::torus(0.4, 0.9)), expected);
}

TEST(FiberInverse, Examples) {
  const auto f = random_cat();
  const auto origin = f.inverse(0, ManifoldPoint::torus(0.0, 0.0));
  EXPECT_EQ(origin.coords(0), 0.0);
  EXPECT_EQ(origin.coords(1), 0.0);
  const auto p = ManifoldPoint::torus(0.3, 0.7);
  const auto back = f.inverse(0, f.apply(0, p));
  EXPECT_LT(manifold_distance(back, p), 1e-12);
  EXPECT_THROW(doubling().inverse(0, ManifoldPoint::circle(0.3)), UnsupportedError);
}

TEST(FiberInverse, RoundTripOnInvertibleFamilies) {
  std::mt19937_64 rng(5);
  for (const auto& f : {random_cat(), diagonal({2.0, 4.0}, {3.0, 3.0}), cat()}) {
    for (int i = 0; i < 1000; ++i) {
      const int s = static_cast<int>(rng() % static_cast<unsigned>(f.alphabet_size()));
      const auto p = random_point(rng, 2);
      // Diagonal inverses are right inverses only: phi(phi^{-1}(y)) = y.
      EXPECT_LT(manifold_distance(f.apply(s, f.inverse(s, p)), p), 1e-12);
    }
  }
}

TEST(DerivativeBounds, Examples) {
  const auto d = derivative_bounds(doubling());
  EXPECT_EQ(d.sup_dphi, 2.0);
  EXPECT_EQ(d.sup_dphi_inv, 0.5);
  EXPECT_EQ(d.log_deriv_lipschitz, 0.0);
  const auto l = derivative_bounds(linear_circle());
  EXPECT_EQ(l.sup_dphi, 3.0);
  EXPECT_EQ(l.sup_dphi_inv, 0.5);
  EXPECT_EQ(l.log_deriv_lipschitz, 0.0);
  const auto p = derivative_bounds(perturbed());
  EXPECT_NEAR(p.sup_dphi, 2.0 + 0.2 * kPi, 1e-12);
  EXPECT_NEAR(p.log_deriv_lipschitz, 4.0 * kPi * kPi * 0.1 / (2.0 - 0.2 * kPi), 1e-12);
  EXPECT_NEAR(p.log_deriv_lipschitz, 2.8781, 1e-4);
}

// The closed-form Lipschitz constant dominates the true sup of |(log phi')'|.
TEST(DerivativeBounds, PerturbedLipschitzDominatesDenseGrid) {
  const double eps = 0.1;
  double sup = 0.0;
  for (int j = 0; j < 1'000'000; ++j) {
    const double x = j / 1e6;
    const double num = 4.0 * kPi * kPi * eps * std::sin(2.0 * kPi * x);
    const double den = 2.0 + 2.0 * kPi * eps * std::cos(2.0 * kPi * x);
    sup = std::max(sup, std::abs(num / den));
  }
  EXPECT_LE(sup, derivative_bounds(perturbed(eps)).log_deriv_lipschitz);
  EXPECT_GT(sup, 2.0);
}

TEST(FiberProperties, LocalDiffeomorphismAndBoundSoundness) {
  std::mt19937_64 rng(11);
  for (const auto& entry : catalog()) {
    const auto& f = entry.family;
    const auto b = derivative_bounds(f);
    for (const auto& omega : sample_base(entry.base, 3, 100)) {
      for (int i = 0; i < 1000; ++i) {
        const auto x = random_point(rng, f.dim());
        const Matrix d = fiber_derivative(f, omega, x).entries;
        const double smin = min_singular_value(d);
        ASSERT_GT(smin, 0.0) << entry.name;
        if (f.expanding()) ASSERT_GT(smin, 1.0) << entry.name;
        ASSERT_LE(operator_norm(d), b.sup_dphi * (1 + 1e-14)) << entry.name;
        ASSERT_LE(1.0 / smin, b.sup_dphi_inv * (1 + 1e-14)) << entry.name;
      }
    }
  }
}

TEST(FiberProperties, LipschitzSoundness) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> step(-1e-3, 1e-3);
  for (const auto& entry : catalog()) {
    const auto& f = entry.family;
    const double lip = derivative_bounds(f).log_deriv_lipschitz;
    Vector v = Vector::Ones(f.dim()).normalized();
    for (int i = 0; i < 10000; ++i) {
      const int s = static_cast<int>(rng() % 2);
      const auto x = random_point(rng, f.dim());
      Vector shifted = x.coords;
      for (int c = 0; c < f.dim(); ++c) shifted(c) += step(rng);
      const auto y = ManifoldPoint::from_lift(shifted);
      const double lx = std::log((f.derivative(s, x) * v).norm());
      const double ly = std::log((f.derivative(s, y) * v).norm());
      ASSERT_LE(std::abs(lx - ly), lip * manifold_distance(x, y) + 1e-9) << entry.name;
    }
  }
}

// Central differences of the lifted map against the analytic derivative.
TEST(FiberProperties, FiniteDifferenceConsistency) {
  std::mt19937_64 rng(17);
  const double h = 1e-6;
  for (const auto& entry : catalog()) {
    const auto& f = entry.family;
    for (int i = 0; i < 1000; ++i) {
      const int s = static_cast<int>(rng() % 2);
      const auto x = random_point(rng, f.dim());
      const Matrix d = f.derivative(s, x);
      for (int c = 0; c < f.dim(); ++c) {
        Vector plus = x.coords, minus = x.coords;
        plus(c) += h;
        minus(c) -= h;
        const Vector fd = (f.lift(s, plus) - f.lift(s, minus)) / (2.0 * h);
        ASSERT_LE((fd - d.col(c)).norm(), 1e-6 * d.col(c).norm()) << entry.name;
      }
    }
  }
}

TEST(ReduceMod1, SnapsSeamToZero) {
  EXPECT_EQ(reduce_mod1(1.0), 0.0);
  EXPECT_EQ(reduce_mod1(-0.25), 0.75);
  EXPECT_EQ(reduce_mod1(1.0 - 1e-16), 0.0);
  EXPECT_EQ(reduce_mod1(2.5), 0.5);
  EXPECT_LT(reduce_mod1(1.0 - 1e-12), 1.0);
  EXPECT_GT(reduce_mod1(1.0 - 1e-12), 0.5);
}

TEST(FiberSpec, ValidationErrors) {
  EXPECT_THROW(perturbed(0.2), ConfigError);
  EXPECT_THROW(family({{"family", "tent"}}, 1), ConfigError);
  EXPECT_THROW(family({{"family", "doubling"}, {"params", {{"eps_max", 0.1}}}}, 1), ConfigError);
  EXPECT_THROW(linear_circle({2}).apply(1, ManifoldPoint::circle(0.1)), ContractError);
  EXPECT_THROW(family({{"family", "bernoulli-linear"}, {"params", {{"degrees", {2.5, 3}}}}}, 2),
               ConfigError);
  EXPECT_THROW(family({{"family", "random-cat"}, {"params", {{"matrices", {{{2, 0}, {0, 1}}}}}}}, 1),
               ConfigError);
}

TEST(FiberSpec, EchoFillsDefaults) {
  const auto j = perturbed().spec_json();
  EXPECT_EQ(j.at("family"), "perturbed-doubling");
  EXPECT_DOUBLE_EQ(j.at("params").at("eps_max").get<double>(), 0.1);
  const auto lin = family({{"family", "bernoulli-linear"}}, 2).spec_json();
  EXPECT_EQ(lin.at("params").at("degrees"), nlohmann::json::array({2.0, 3.0}));
}

}  // namespace
}  // namespace randhyp
