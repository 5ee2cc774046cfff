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
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "randhyp/cocycle.hpp"

namespace randhyp {

struct MeasureAtom {
  BaseState omega;
  ManifoldPoint x;
  Vector v;
  double weight = 0.0;
};

/// Finitely supported measure on Omega x SM.
struct EmpiricalMeasure {
  std::vector<MeasureAtom> atoms;
  bool normalized = false;  // weights sum to 1 within 1e-12
};

struct ProjectedAtom {
  BaseState omega;
  ManifoldPoint x;
  double weight = 0.0;
};

/// Finitely supported measure on Omega x M.
struct ProjectedMeasure {
  std::vector<ProjectedAtom> atoms;
  bool normalized = false;
};

using Observable = std::function<double(const BaseState&, const ManifoldPoint&, const Vector&)>;
using FibreObservable = std::function<double(const BaseState&, const ManifoldPoint&)>;

/// Rescales weights to sum 1; throws ContractError for empty support or
/// nonpositive weights.
EmpiricalMeasure normalize(EmpiricalMeasure measure);

/// Weighted sum over atoms in storage order. Throws ContractError unless the
/// measure is normalized.
double integrate_observable(const EmpiricalMeasure& measure, const Observable& f);
double integrate_observable(const ProjectedMeasure& measure, const FibreObservable& f);

/// Phi(omega, x, v) = log |D_x phi_omega v|.
Observable phi_observable(const FiberFamily& family);

/// Drops v and keeps weights and order, so that integrating f o pi against
/// the measure and f against its projection perform the same arithmetic.
ProjectedMeasure pushforward_projection(const EmpiricalMeasure& measure);

struct MinimizingSequence {
  EmpiricalMeasure measure;  // mu_n: uniform weights on the orbit of the argmin
  UnitTangentPoint argmin;
  double a_n = 0.0;          // upper bound of A_n(omega) on the grid
};

/// Grid argmin (x_n, v_n) of log |D_x phi_omega^(n) v| (smallest x on ties)
/// and mu_n = (1/n) sum_{i<n} delta of the projectivised orbit point i.
/// Linear torus families take x_n = 0 and v_n the least expanded direction.
MinimizingSequence empirical_minimizing_sequence(const FiberFamily& family, const BaseState& omega,
                                                 std::size_t n, std::size_t grid_size);

/// Periodic point of the skew product over a periodic symbol word.
struct PeriodicOrbitRecord {
  std::vector<int> word;  // canonical (lexicographically least) rotation
  ManifoldPoint x0;       // least cycle point whose word is `word`
  Vector v0;
  std::size_t period = 0; // minimal period of (word, x0)
  double phi_average = 0.0;
  double residual = 0.0;  // max coordinate distance between phi^period(x0) and x0
};

/// Every periodic orbit of minimal period p <= p_max (p_max <= 12) over a
/// full shift (bernoulli, or dirac as the one-symbol shift), sorted by
/// phi_average. Circle families: all fixed points of phi_w on the circle;
/// torus families: x0 = 0 with v0 each real eigenvector of the period
/// product (words with complex eigenvalues are skipped). These measures live
/// over periodic base words, not over P; they are heuristic candidates only.
/// Throws UnsupportedError for other bases and ResourceError if the number
/// of circle fixed points exceeds 4e6.
std::vector<PeriodicOrbitRecord> enumerate_periodic_orbits(
    const FiberFamily& family, const std::shared_ptr<const BaseSystem>& system,
    std::size_t p_max, unsigned threads = 1);

struct LambdaOptions {
  std::size_t samples = 20;
  std::size_t n = 12;              // horizon of A_n and of mu_n
  std::size_t grid_size = 4096;
  std::size_t birkhoff_starts = 8;
  std::size_t birkhoff_n = 1000;
  std::size_t p_max = 0;           // 0 skips the periodic-orbit search
  unsigned threads = 1;
};

struct LambdaEstimate {
  double estimate = 0.0;        // min(empirical, birkhoff)
  std::string source;           // "empirical" or "birkhoff"
  double empirical = 0.0;       // mean over omega of integral of Phi against mu_n
  double empirical_std_err = 0.0;
  double birkhoff = 0.0;        // mean over omega of the minimum Birkhoff average over starts
  double birkhoff_std_err = 0.0;
  double a_estimate = 0.0;
  double gap_vs_a = 0.0;        // estimate - a_estimate
  std::optional<double> periodic_min;
  std::vector<PeriodicOrbitRecord> orbits;
  std::vector<std::string> notes;
};

/// A is estimated on the base samples of `seed`; the empirical and Birkhoff
/// estimators use an independent set of base samples.
LambdaEstimate lambda_estimate(const FiberFamily& family,
                               const std::shared_ptr<const BaseSystem>& system,
                               std::uint64_t seed, const LambdaOptions& options);

nlohmann::json to_json(const PeriodicOrbitRecord& record);
nlohmann::json to_json(const LambdaEstimate& estimate);

}  // namespace randhyp
