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

#include <benchmark/benchmark.h>

#include <nlohmann/json.hpp>

#include "randhyp/cocycle.hpp"
#include "randhyp/ergodic_optimizer.hpp"
#include "randhyp/expansion.hpp"
#include "randhyp/lyapunov.hpp"
#include "randhyp/splitting.hpp"

namespace {

using namespace randhyp;

std::shared_ptr<const BaseSystem> fair_coin() {
  BaseSystemSpec s;
  s.kind = BaseKind::bernoulli;
  s.alphabet_size = 2;
  s.probabilities = {0.5, 0.5};
  return BaseSystem::create(s);
}

FiberFamily make(const char* family) {
  return FiberFamily::create(parse_fiber_spec(nlohmann::json{{"family", family}}), 2);
}

void BM_SymbolWindow(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto sys = fair_coin();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto w = BaseState::from_seed(sys, ++seed);
    benchmark::DoNotOptimize(w.symbols(0, n));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SymbolWindow)->Arg(1 << 10)->Arg(1 << 16);

void BM_BirkhoffSum(benchmark::State& state) {
  const auto f = make("perturbed-doubling");
  const auto p = make_tangent_point(BaseState::from_seed(fair_coin(), 1), ManifoldPoint::circle(0.3),
                                    Vector::Ones(1));
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(birkhoff_sum_phi(f, p, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BirkhoffSum)->Arg(10000);

void BM_OseledetsSpectrum(benchmark::State& state) {
  const auto f = make("random-cat");
  const auto omega = BaseState::from_seed(fair_coin(), 2);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(oseledets_spectrum(f, omega, ManifoldPoint::torus(0.2, 0.7), n));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OseledetsSpectrum)->Arg(10000);

// Grid cost dominates certification; scales as depth * grid.
void BM_MinExpansionTable(benchmark::State& state) {
  const auto f = make("perturbed-doubling");
  const auto omega = BaseState::from_seed(fair_coin(), 3);
  const auto grid = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(min_expansion_table(f, omega, 12, grid));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MinExpansionTable)->RangeMultiplier(4)->Range(1024, 16384)->Complexity(benchmark::oN);

void BM_PeriodicOrbits(benchmark::State& state) {
  const auto f = make("perturbed-doubling");
  const auto sys = fair_coin();
  const auto p_max = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_periodic_orbits(f, sys, p_max));
}
BENCHMARK(BM_PeriodicOrbits)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_FiniteTimeBundles(benchmark::State& state) {
  const auto f = make("random-cat");
  const auto omega = BaseState::from_seed(fair_coin(), 4);
  const auto h = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(finite_time_bundles(f, omega, ManifoldPoint::torus(0.4, 0.1), h));
  }
}
BENCHMARK(BM_FiniteTimeBundles)->Arg(50)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
