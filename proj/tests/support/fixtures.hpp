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

#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "randhyp/base_dynamics.hpp"
#include "randhyp/fiber_dynamics.hpp"

namespace randhyp::testing {

inline const double kLog2 = std::log(2.0);
inline const double kLog3 = std::log(3.0);
inline const double kHalfLog6 = 0.5 * std::log(6.0);
inline const double kCatExponent = std::log((3.0 + std::sqrt(5.0)) / 2.0);
// Pointwise derivative range of perturbed doubling at eps = 0.1.
inline const double kPerturbedFloor = std::log(2.0 - 0.2 * std::numbers::pi);

inline std::shared_ptr<const BaseSystem> dirac() {
  return BaseSystem::create(BaseSystemSpec{});
}

inline std::shared_ptr<const BaseSystem> bernoulli(std::vector<double> p) {
  BaseSystemSpec s;
  s.kind = BaseKind::bernoulli;
  s.alphabet_size = static_cast<int>(p.size());
  s.probabilities = std::move(p);
  return BaseSystem::create(s);
}

inline std::shared_ptr<const BaseSystem> fair_coin() { return bernoulli({0.5, 0.5}); }

inline std::shared_ptr<const BaseSystem> markov(std::vector<std::vector<double>> t) {
  BaseSystemSpec s;
  s.kind = BaseKind::markov;
  s.alphabet_size = static_cast<int>(t.size());
  s.transition = std::move(t);
  return BaseSystem::create(s);
}

inline std::shared_ptr<const BaseSystem> rotation(double r, int alphabet = 2) {
  BaseSystemSpec s;
  s.kind = BaseKind::rotation;
  s.alphabet_size = alphabet;
  s.rotation_number = r;
  return BaseSystem::create(s);
}

inline FiberFamily family(const nlohmann::json& spec, int alphabet) {
  return FiberFamily::create(parse_fiber_spec(spec), alphabet);
}

inline FiberFamily doubling(int alphabet = 1) { return family({{"family", "doubling"}}, alphabet); }

inline FiberFamily perturbed(double eps = 0.1, int alphabet = 1) {
  return family({{"family", "perturbed-doubling"}, {"params", {{"eps_max", eps}}}}, alphabet);
}

inline FiberFamily linear_circle(std::vector<int> degrees = {2, 3}) {
  const int alphabet = static_cast<int>(degrees.size());
  return family({{"family", "bernoulli-linear"}, {"params", {{"degrees", degrees}}}}, alphabet);
}

inline FiberFamily diagonal(std::vector<double> a, std::vector<double> b) {
  const int alphabet = static_cast<int>(a.size());
  return family({{"family", "diagonal-cocycle"}, {"params", {{"a", a}, {"b", b}}}}, alphabet);
}

inline FiberFamily cat(int alphabet = 1) {
  return family({{"family", "random-cat"}, {"params", {{"matrices", {{{2, 1}, {1, 1}}}}}}},
                alphabet);
}

inline FiberFamily random_cat() { return family({{"family", "random-cat"}}, 2); }

// One entry per catalog family, paired with a base that exercises it.
struct CatalogEntry {
  std::string name;
  FiberFamily family;
  std::shared_ptr<const BaseSystem> base;
};

inline std::vector<CatalogEntry> catalog() {
  return {
      {"doubling", doubling(2), fair_coin()},
      {"perturbed-doubling", perturbed(0.1, 2), fair_coin()},
      {"bernoulli-linear", linear_circle(), fair_coin()},
      {"diagonal-cocycle", diagonal({2.0, 4.0}, {3.0, 3.0}), fair_coin()},
      {"random-cat", random_cat(), fair_coin()},
  };
}

// Angle between the lines through a and b; the cross product keeps it
// accurate near 0.
inline double angle_to(const Vector& a, const Vector& b) {
  const double cross = std::abs(a(0) * b(1) - a(1) * b(0));
  return std::atan2(cross, std::abs(a.dot(b)));
}

}  // namespace randhyp::testing
