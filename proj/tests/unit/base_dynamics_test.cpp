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
#include <thread>
#include <vector>

#include "fixtures.hpp"
#include "randhyp/base_dynamics.hpp"
#include "randhyp/errors.hpp"

namespace randhyp {
namespace {

using testing::bernoulli;
using testing::dirac;
using testing::fair_coin;
using testing::markov;
using testing::rotation;

std::vector<std::shared_ptr<const BaseSystem>> all_bases() {
  return {dirac(), bernoulli({0.3, 0.7}), bernoulli({0.2, 0.3, 0.5}),
          markov({{0.0, 1.0}, {0.4, 0.6}}), rotation(std::sqrt(2.0) - 1.0, 3)};
}

TEST(BaseStep, DiracIsFixed) {
  const auto s = BaseState::from_seed(dirac(), 1);
  EXPECT_EQ(base_step(s), s);
  EXPECT_EQ(base_inverse_step(s), s);
}

TEST(BaseStep, ShiftMovesWindowLeft) {
  const auto w = BaseState::periodic(fair_coin(), {1, 0});
  ASSERT_EQ(w.symbol_at(0), 1);
  ASSERT_EQ(w.symbol_at(1), 0);
  EXPECT_EQ(base_step(w).symbol_at(0), 0);
}

TEST(BaseStep, RotationAddsNumberModOne) {
  const auto sys = rotation(0.5);
  EXPECT_DOUBLE_EQ(base_step(BaseState::rotation(sys, 0.25)).angle(), 0.75);
  EXPECT_DOUBLE_EQ(base_inverse_step(BaseState::rotation(sys, 0.75)).angle(), 0.25);
}

TEST(BaseStep, ShiftIdentityOnEveryKind) {
  for (const auto& sys : all_bases()) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto w = BaseState::from_seed(sys, seed);
      const auto next = base_step(w);
      for (int k = -100; k <= 100; ++k) ASSERT_EQ(next.symbol_at(k), w.symbol_at(k + 1)) << k;
    }
  }
}

TEST(BaseStep, InverseUndoesStep) {
  for (const auto& sys : all_bases()) {
    const auto w = BaseState::from_seed(sys, 99);
    const auto back = base_inverse_step(base_step(w));
    EXPECT_EQ(back, w);
    for (int k = -50; k <= 50; ++k) ASSERT_EQ(back.symbol_at(k), w.symbol_at(k));
  }
}

TEST(SampleBase, SeedDeterminism) {
  const auto a = sample_base(fair_coin(), 7, 2);
  const auto b = sample_base(fair_coin(), 7, 2);
  ASSERT_EQ(a.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(a[i].symbols(-20, 41), b[i].symbols(-20, 41));
  }
}

TEST(SampleBase, DiracSamplesAreIdentical) {
  const auto s = sample_base(dirac(), 12345, 3);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].symbols(-3, 7), s[1].symbols(-3, 7));
  EXPECT_EQ(s[1].symbols(-3, 7), s[2].symbols(-3, 7));
}

TEST(SampleBase, FairCoinFrequencyAtOrigin) {
  const auto s = sample_base(fair_coin(), 7, 10000);
  std::size_t zeros = 0;
  for (const auto& w : s) zeros += (w.symbol_at(0) == 0);
  EXPECT_NEAR(static_cast<double>(zeros) / 1e4, 0.5, 0.02);
}

// Frequencies at positions -5..5 against the stationary law, 3 standard errors.
TEST(SampleBase, StationaryMarginals) {
  for (const auto& sys : {bernoulli({0.2, 0.3, 0.5}), markov({{0.0, 1.0}, {0.4, 0.6}}),
                          markov({{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}})}) {
    const std::size_t count = 10000;
    const auto s = sample_base(sys, 2024, count);
    const auto pi = sys->stationary();
    for (int k = -5; k <= 5; ++k) {
      std::vector<double> freq(pi.size(), 0.0);
      for (const auto& w : s) freq[static_cast<std::size_t>(w.symbol_at(k))] += 1.0 / count;
      for (std::size_t a = 0; a < pi.size(); ++a) {
        const double se = std::sqrt(pi[a] * (1.0 - pi[a]) / count);
        EXPECT_LE(std::abs(freq[a] - pi[a]), 3.0 * se + 1e-12) << "pos " << k << " sym " << a;
      }
    }
  }
}

TEST(SampleBase, MarkovPathsRespectForbiddenTransitions) {
  const auto sys = markov({{0.0, 1.0}, {0.4, 0.6}});
  for (const auto& w : sample_base(sys, 5, 50)) {
    const auto sym = w.symbols(-300, 600);
    for (std::size_t i = 0; i + 1 < sym.size(); ++i) {
      ASSERT_FALSE(sym[i] == 0 && sym[i + 1] == 0) << "at " << i;
    }
  }
}

TEST(SymbolAt, RepeatedQueriesAgree) {
  const auto w = BaseState::from_seed(markov({{0.1, 0.9}, {0.7, 0.3}}), 3);
  const int first = w.symbol_at(4321);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(w.symbol_at(4321), first);
}

TEST(SymbolAt, WindowLimitIsEnforced) {
  const auto w = BaseState::from_seed(fair_coin(), 1);
  EXPECT_NO_THROW(w.symbol_at(BaseState::kWindowLimit));
  EXPECT_THROW(w.symbol_at(BaseState::kWindowLimit + 1), ResourceError);
  EXPECT_THROW(w.symbol_at(-BaseState::kWindowLimit - 1), ResourceError);
}

TEST(SymbolAt, ConcurrentReadersSeeOneRealisation) {
  const auto w = BaseState::from_seed(markov({{0.2, 0.8}, {0.6, 0.4}}), 77);
  std::vector<std::vector<int>> seen(4);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < seen.size(); ++t) {
    pool.emplace_back([&, t] {
      // Different threads extend the lazy path in different orders.
      const int sign = (t % 2 == 0) ? 1 : -1;
      for (int k = 0; k <= 2000; ++k) seen[t].push_back(w.symbol_at(sign * k));
    });
  }
  for (auto& th : pool) th.join();
  const auto fresh = BaseState::from_seed(w.system_ptr(), 77);
  for (int k = 0; k <= 2000; ++k) {
    EXPECT_EQ(seen[0][static_cast<std::size_t>(k)], fresh.symbol_at(k));
    EXPECT_EQ(seen[1][static_cast<std::size_t>(k)], fresh.symbol_at(-k));
  }
  EXPECT_EQ(seen[0], seen[2]);
  EXPECT_EQ(seen[1], seen[3]);
}

TEST(BaseSpec, ReducibleMarkovIsRejected) {
  BaseSystemSpec s;
  s.kind = BaseKind::markov;
  s.alphabet_size = 2;
  s.transition = {{1.0, 0.0}, {0.0, 1.0}};
  try {
    BaseSystem::create(s);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    ASSERT_FALSE(e.issues().empty());
    EXPECT_EQ(e.issues().front().path, "base.transition");
  }
}

TEST(BaseSpec, NonStochasticRowsAreRejected) {
  BaseSystemSpec s;
  s.kind = BaseKind::markov;
  s.alphabet_size = 2;
  s.transition = {{0.5, 0.4}, {0.5, 0.5}};
  EXPECT_THROW(sample_base(s, 1, 1), ConfigError);
}

TEST(BaseSpec, ProbabilityDefectNamesField) {
  try {
    bernoulli({0.5, 0.4});
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    ASSERT_FALSE(e.issues().empty());
    EXPECT_EQ(e.issues().front().path, "base.probabilities");
  }
}

TEST(BaseSpec, JsonRoundTrip) {
  const auto spec = parse_base_spec(
      nlohmann::json::parse(R"({"kind":"markov","transition":[[0.2,0.8],[0.5,0.5]]})"));
  EXPECT_EQ(spec.kind, BaseKind::markov);
  EXPECT_EQ(spec.alphabet_size, 2);
  const auto again = parse_base_spec(to_json(spec));
  EXPECT_EQ(to_json(again), to_json(spec));
}

}  // namespace
}  // namespace randhyp
