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
#include <random>

#include "fixtures.hpp"
#include "randhyp/cocycle.hpp"
#include "randhyp/errors.hpp"

namespace randhyp {
namespace {

using namespace randhyp::testing;

UnitTangentPoint at_origin(const FiberFamily& f, const BaseState& omega, Vector v) {
  const auto x = f.dim() == 1 ? ManifoldPoint::circle(0.0) : ManifoldPoint::torus(0.0, 0.0);
  return make_tangent_point(omega, x, std::move(v));
}

Vector e1(int dim) {
  Vector v = Vector::Zero(dim);
  v(0) = 1.0;
  return v;
}

TEST(Iterate, Examples) {
  const auto omega = BaseState::from_seed(dirac(), 0);
  const auto orbit = iterate(doubling(), omega, ManifoldPoint::circle(0.1), 3);
  ASSERT_EQ(orbit.size(), 4u);
  const double expected[] = {0.1, 0.2, 0.4, 0.8};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(orbit[i].coords(0), expected[i], 1e-15);

  EXPECT_EQ(iterate(random_cat(), BaseState::from_seed(fair_coin(), 1),
                    ManifoldPoint::torus(0.3, 0.4), 0)
                .size(),
            1u);

  const auto word = BaseState::periodic(fair_coin(), {0, 1});
  const auto lin = iterate(linear_circle(), word, ManifoldPoint::circle(0.1), 2);
  EXPECT_NEAR(lin[1].coords(0), 0.2, 1e-15);
  EXPECT_NEAR(lin[2].coords(0), 0.6, 1e-15);
}

TEST(CocycleProduct, Examples) {
  const auto omega = BaseState::from_seed(dirac(), 0);
  EXPECT_EQ(cocycle_product(doubling(), omega, ManifoldPoint::circle(0.3), 5).entries(0, 0), 32.0);

  Matrix expected(2, 2);
  expected << 5, 3, 3, 2;
  const auto zeros = BaseState::periodic(fair_coin(), {0});
  const auto m = cocycle_product(random_cat(), zeros, ManifoldPoint::torus(0.1, 0.2), 2);
  EXPECT_EQ(m.entries, expected);
  EXPECT_EQ(m.steps, 2u);

  // Product of the analytic derivatives along the orbit.
  const auto f = perturbed();
  double x = 0.2, oracle = 1.0;
  for (int i = 0; i < 3; ++i) {
    oracle *= 2.0 + 0.2 * std::numbers::pi * std::cos(2.0 * std::numbers::pi * x);
    x = reduce_mod1(2.0 * x + 0.1 * std::sin(2.0 * std::numbers::pi * x));
  }
  EXPECT_NEAR(cocycle_product(f, omega, ManifoldPoint::circle(0.2), 3).entries(0, 0), oracle,
              1e-12 * oracle);
}

TEST(CocycleProduct, OverflowIsRangeError) {
  const auto omega = BaseState::from_seed(dirac(), 0);
  EXPECT_THROW(cocycle_product(doubling(), omega, ManifoldPoint::circle(0.3), 1100), RangeError);
}

TEST(UnitTangentStep, Examples) {
  const auto omega = BaseState::from_seed(dirac(), 0);
  const auto p = unit_tangent_step(doubling(), at_origin(doubling(), omega, e1(1)));
  EXPECT_EQ(p.v(0), 1.0);

  const auto q = unit_tangent_step(cat(), at_origin(cat(), omega, e1(2)));
  EXPECT_NEAR(q.v(0), 2.0 / std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(q.v(1), 1.0 / std::sqrt(5.0), 1e-15);
}

TEST(Phi, Examples) {
  const auto omega = BaseState::from_seed(dirac(), 0);
  EXPECT_DOUBLE_EQ(phi(doubling(), at_origin(doubling(), omega, e1(1))), kLog2);
  const auto threes = BaseState::periodic(fair_coin(), {1});
  EXPECT_DOUBLE_EQ(phi(linear_circle(), at_origin(linear_circle(), threes, e1(1))), kLog3);
  EXPECT_NEAR(phi(cat(), at_origin(cat(), omega, e1(2))), 0.5 * std::log(5.0), 1e-15);
}

TEST(BirkhoffSum, Examples) {
  const auto omega = BaseState::from_seed(dirac(), 0);
  EXPECT_NEAR(birkhoff_sum_phi(doubling(), at_origin(doubling(), omega, e1(1)), 10), 10 * kLog2,
              1e-14);
  const auto zeros = BaseState::periodic(fair_coin(), {0});
  EXPECT_NEAR(birkhoff_sum_phi(random_cat(), at_origin(random_cat(), zeros, e1(2)), 2),
              0.5 * std::log(34.0), 1e-14);
}

class CocycleIdentity : public ::testing::TestWithParam<int> {};

// D^{(n+k)} = D^{(k)} at the n-th iterate times D^{(n)}; and the telescoping
// identity for Phi.
TEST_P(CocycleIdentity, ChainRuleAndTelescoping) {
  const auto entry = catalog()[static_cast<std::size_t>(GetParam())];
  const auto& f = entry.family;
  std::mt19937_64 rng(100 + GetParam());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto omegas = sample_base(entry.base, 31, 200);
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    const auto& omega = omegas[i];
    const auto x = f.dim() == 1 ? ManifoldPoint::circle(u(rng)) : ManifoldPoint::torus(u(rng), u(rng));
    const std::size_t n = 1 + rng() % 15, k = 1 + rng() % 15;
    const Matrix whole = cocycle_product(f, omega, x, n + k).entries;
    const auto xn = iterate(f, omega, x, n).back();
    const Matrix split = cocycle_product(f, omega.shifted(static_cast<std::int64_t>(n)), xn, k).entries *
                         cocycle_product(f, omega, x, n).entries;
    const double scale = whole.cwiseAbs().maxCoeff();
    ASSERT_LE((whole - split).cwiseAbs().maxCoeff(), 1e-9 * scale) << entry.name;

    Vector v(f.dim());
    for (int c = 0; c < f.dim(); ++c) v(c) = u(rng) - 0.5;
    const auto p = make_tangent_point(omega, x, v);
    const double direct = std::log((whole * p.v).norm());
    const double sum = birkhoff_sum_phi(f, p, n + k);
    ASSERT_LE(std::abs(sum - direct), 1e-9 * static_cast<double>(n + k))
        << entry.name;
  }
}

INSTANTIATE_TEST_SUITE_P(Catalog, CocycleIdentity, ::testing::Range(0, 5));

TEST(UnitTangentStep, StaysNormalizedAndProjects) {
  for (const auto& entry : catalog()) {
    const auto& f = entry.family;
    auto p = at_origin(f, BaseState::from_seed(entry.base, 8), Vector::Ones(f.dim()));
    // Move off the fixed point at the origin.
    p.x = f.dim() == 1 ? ManifoldPoint::circle(0.123) : ManifoldPoint::torus(0.123, 0.456);
    for (int i = 0; i < 100000; ++i) {
      const auto q = unit_tangent_step(f, p);
      ASSERT_NEAR(q.v.norm(), 1.0, 1e-12) << entry.name;
      if (i % 997 == 0) {
        ASSERT_EQ(q.omega, base_step(p.omega));
        const auto expect = fiber_apply(f, p.omega, p.x);
        ASSERT_EQ(q.x.coords, expect.coords);
      }
      p = q;
    }
  }
}

TEST(Trajectory, RowsMatchPhiSeries) {
  const auto f = perturbed();
  const auto p = make_tangent_point(BaseState::from_seed(dirac(), 0), ManifoldPoint::circle(0.2),
                                    e1(1));
  const auto rows = trajectory(f, p, 5);
  const auto series = phi_series(f, p, 5);
  ASSERT_EQ(rows.size(), 5u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].step, i);
    EXPECT_EQ(rows[i].log_deriv, series.values[i]);
  }
  EXPECT_EQ(rows[0].coords(0), 0.2);
}

}  // namespace
}  // namespace randhyp
