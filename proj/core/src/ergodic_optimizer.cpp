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

#include "randhyp/ergodic_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <boost/math/tools/toms748_solve.hpp>
#include <nlohmann/json.hpp>

#include "randhyp/errors.hpp"
#include "randhyp/expansion.hpp"
#include "randhyp/lyapunov.hpp"
#include "randhyp/parallel.hpp"
#include "randhyp/random.hpp"
#include "randhyp/statistics.hpp"

namespace randhyp {

namespace {

constexpr double kWeightTolerance = 1e-12;
constexpr double kCycleTolerance = 1e-9;
constexpr std::size_t kRootBudget = 4'000'000;

void require_normalized(bool normalized) {
  if (!normalized) throw ContractError("integrate_observable: measure is not normalized");
}

bool canonical_rotation(const std::vector<int>& w) {
  const std::size_t p = w.size();
  for (std::size_t r = 1; r < p; ++r) {
    for (std::size_t i = 0; i < p; ++i) {
      const int a = w[(i + r) % p];
      if (a < w[i]) return false;
      if (a > w[i]) break;
    }
  }
  return true;
}

std::size_t word_period(const std::vector<int>& w) {
  const std::size_t p = w.size();
  for (std::size_t q = 1; q < p; ++q) {
    if (p % q != 0) continue;
    bool ok = true;
    for (std::size_t i = q; i < p && ok; ++i) ok = w[i] == w[i - q];
    if (ok) return q;
  }
  return p;
}

std::vector<std::vector<int>> canonical_words(int alphabet, std::size_t p_max) {
  std::vector<std::vector<int>> out;
  for (std::size_t p = 1; p <= p_max; ++p) {
    std::vector<int> w(p, 0);
    while (true) {
      if (canonical_rotation(w)) out.push_back(w);
      std::size_t i = p;
      while (i > 0 && w[i - 1] == alphabet - 1) w[--i] = 0;
      if (i == 0) break;
      ++w[i - 1];
    }
  }
  return out;
}

double lift_word(const FiberFamily& family, const std::vector<int>& w, std::size_t len, double x) {
  for (std::size_t i = 0; i < len; ++i) x = family.circle_lift(w[i], x);
  return x;
}

double apply_word(const FiberFamily& family, const std::vector<int>& w, std::size_t len, double x) {
  for (std::size_t i = 0; i < len; ++i) x = reduce_mod1(family.circle_lift(w[i], x));
  return x;
}

double word_degree(const FiberFamily& family, const std::vector<int>& w) {
  return std::round(lift_word(family, w, w.size(), 1.0) - lift_word(family, w, w.size(), 0.0));
}

std::vector<double> circle_fixed_points(const FiberFamily& family, const std::vector<int>& w) {
  const double degree = word_degree(family, w);
  std::vector<double> roots;
  if (family.x_independent()) {
    for (double k = 0; k < degree - 1.0; k += 1.0) roots.push_back(k / (degree - 1.0));
    return roots;
  }
  const std::size_t p = w.size();
  const double g0 = lift_word(family, w, p, 0.0);
  const double g1 = lift_word(family, w, p, 1.0) - 1.0;
  for (double k = std::ceil(g0); k < g1; k += 1.0) {
    auto f = [&](double x) { return lift_word(family, w, p, x) - x - k; };
    const double f0 = f(0.0);
    if (f0 == 0.0) {
      roots.push_back(0.0);
      continue;
    }
    std::uintmax_t iterations = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        f, 0.0, 1.0, f0, f(1.0), boost::math::tools::eps_tolerance<double>(), iterations);
    roots.push_back(reduce_mod1(0.5 * (bracket.first + bracket.second)));
  }
  return roots;
}

std::vector<PeriodicOrbitRecord> circle_orbits(const FiberFamily& family, const std::vector<int>& w) {
  const std::size_t p = w.size();
  const std::size_t wq = word_period(w);
  std::vector<PeriodicOrbitRecord> out;
  for (double x : circle_fixed_points(family, w)) {
    bool minimal = true;
    for (std::size_t q = wq; q < p && minimal; q += wq) {
      if (p % q == 0 && circle_distance(apply_word(family, w, q, x), x) < kCycleTolerance) minimal = false;
    }
    if (!minimal) continue;
    std::vector<double> xs{x};
    for (std::size_t i = 0; i < p; ++i) xs.push_back(reduce_mod1(family.circle_lift(w[i], xs.back())));
    bool least = true;
    for (std::size_t i = wq; i < p && least; i += wq) least = !(xs[i] < x - 1e-12);
    if (!least) continue;
    CompensatedSum sum;
    for (std::size_t i = 0; i < p; ++i) sum += std::log(std::abs(family.circle_slope(w[i], xs[i])));
    out.push_back({w, ManifoldPoint::circle(x), Vector::Ones(1), p,
                   sum.value() / static_cast<double>(p), circle_distance(xs[p], x)});
  }
  return out;
}

std::vector<PeriodicOrbitRecord> torus_orbits(const FiberFamily& family, const std::vector<int>& w) {
  const std::size_t p = w.size();
  if (word_period(w) != p) return {};
  const ManifoldPoint zero = ManifoldPoint::torus(0.0, 0.0);
  Matrix product = Matrix::Identity(2, 2);
  for (int s : w) product = family.derivative(s, zero) * product;
  Eigen::EigenSolver<Matrix> solver(product);
  const auto values = solver.eigenvalues();
  if (values.imag().cwiseAbs().maxCoeff() != 0.0) return {};
  std::vector<PeriodicOrbitRecord> out;
  for (int c = 0; c < 2; ++c) {
    Vector v = solver.eigenvectors().col(c).real();
    v = canonical_sign(v / v.norm());
    const double phi = std::log(std::abs(values(c).real())) / static_cast<double>(p);
    out.push_back({w, zero, v, p, phi, 0.0});
  }
  return out;
}

}  // namespace

EmpiricalMeasure normalize(EmpiricalMeasure measure) {
  if (measure.atoms.empty()) throw ContractError("normalize: empty measure");
  CompensatedSum total;
  for (const auto& a : measure.atoms) {
    if (!(a.weight > 0.0)) throw ContractError("normalize: weights must be positive");
    total += a.weight;
  }
  for (auto& a : measure.atoms) a.weight /= total.value();
  measure.normalized = true;
  return measure;
}

double integrate_observable(const EmpiricalMeasure& measure, const Observable& f) {
  require_normalized(measure.normalized);
  CompensatedSum sum;
  for (const auto& a : measure.atoms) sum += a.weight * f(a.omega, a.x, a.v);
  return sum.value();
}

double integrate_observable(const ProjectedMeasure& measure, const FibreObservable& f) {
  require_normalized(measure.normalized);
  CompensatedSum sum;
  for (const auto& a : measure.atoms) sum += a.weight * f(a.omega, a.x);
  return sum.value();
}

Observable phi_observable(const FiberFamily& family) {
  return [&family](const BaseState& omega, const ManifoldPoint& x, const Vector& v) {
    return phi(family, UnitTangentPoint{omega, x, v});
  };
}

ProjectedMeasure pushforward_projection(const EmpiricalMeasure& measure) {
  require_normalized(measure.normalized);
  ProjectedMeasure out;
  out.normalized = true;
  out.atoms.reserve(measure.atoms.size());
  for (const auto& a : measure.atoms) out.atoms.push_back({a.omega, a.x, a.weight});
  return out;
}

MinimizingSequence empirical_minimizing_sequence(const FiberFamily& family, const BaseState& omega,
                                                 std::size_t n, std::size_t grid_size) {
  if (n == 0) throw ContractError("empirical_minimizing_sequence: need n >= 1");
  ManifoldPoint x;
  Vector v;
  double a_n = 0.0;
  if (family.dim() == 1) {
    const auto table = min_expansion_table(family, omega, n, grid_size);
    x = ManifoldPoint::circle(table.at(n).argmin_x);
    v = Vector::Ones(1);
    a_n = table.at(n).upper;
  } else {
    x = ManifoldPoint::torus(0.0, 0.0);
    ScaledProduct product;
    for (int s : omega.symbols(0, n)) product.left_multiply(family.derivative(s, x));
    v = min_right_singular_vector(product.normalized());
    a_n = product.log_min_singular();
  }
  MinimizingSequence out{{}, make_tangent_point(omega, x, v), a_n};
  out.measure.atoms.reserve(n);
  const double w = 1.0 / static_cast<double>(n);
  UnitTangentPoint p = out.argmin;
  for (std::size_t i = 0; i < n; ++i) {
    out.measure.atoms.push_back({p.omega, p.x, p.v, w});
    if (i + 1 < n) p = unit_tangent_step(family, p);
  }
  out.measure.normalized = true;
  return out;
}

std::vector<PeriodicOrbitRecord> enumerate_periodic_orbits(
    const FiberFamily& family, const std::shared_ptr<const BaseSystem>& system,
    std::size_t p_max, unsigned threads) {
  if (p_max == 0 || p_max > 12) throw ContractError("enumerate_periodic_orbits: need 1 <= p_max <= 12");
  const BaseKind kind = system->kind();
  if (kind != BaseKind::bernoulli && kind != BaseKind::dirac) {
    throw UnsupportedError("periodic orbits need a full-shift base (bernoulli or dirac), got " +
                           to_string(kind));
  }
  if (family.alphabet_size() != system->alphabet_size()) {
    throw ContractError("enumerate_periodic_orbits: family and base alphabets differ");
  }
  const auto words = canonical_words(system->alphabet_size(), p_max);
  if (family.dim() == 1) {
    double roots = 0.0;
    for (const auto& w : words) roots += word_degree(family, w);
    if (roots > static_cast<double>(kRootBudget)) {
      throw ResourceError("periodic orbit search needs " + std::to_string(roots) +
                          " circle fixed points; lower p_max");
    }
  }
  std::vector<std::vector<PeriodicOrbitRecord>> per_word(words.size());
  parallel_for(words.size(), threads, [&](std::size_t i) {
    per_word[i] = family.dim() == 1 ? circle_orbits(family, words[i]) : torus_orbits(family, words[i]);
  });
  std::vector<PeriodicOrbitRecord> out;
  for (auto& records : per_word) {
    for (auto& r : records) out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(), [](const PeriodicOrbitRecord& a, const PeriodicOrbitRecord& b) {
    return std::tie(a.phi_average, a.period, a.word) < std::tie(b.phi_average, b.period, b.word);
  });
  return out;
}

LambdaEstimate lambda_estimate(const FiberFamily& family,
                               const std::shared_ptr<const BaseSystem>& system,
                               std::uint64_t seed, const LambdaOptions& options) {
  if (options.samples == 0 || options.birkhoff_starts == 0 || options.birkhoff_n == 0) {
    throw ContractError("lambda_estimate: samples, birkhoff_starts and birkhoff_n must be positive");
  }
  LambdaEstimate out;
  out.a_estimate = uniform_rate_estimate(family, system, seed, options.samples, options.n,
                                         options.grid_size, options.threads)
                       .a_estimate;

  const auto omegas = sample_base(system, seed ^ kLambdaStream, options.samples);
  const int dim = family.dim();
  const auto n = static_cast<double>(options.n);
  const auto nb = static_cast<double>(options.birkhoff_n);
  std::vector<double> empirical(options.samples), birkhoff(options.samples);
  parallel_for(options.samples, options.threads, [&](std::size_t i) {
    const BaseState& omega = omegas[i];
    if (dim == 1) {
      // Integral of Phi against mu_n, streamed along the orbit of the argmin.
      const auto table = min_expansion_table(family, omega, options.n, options.grid_size);
      const auto start = make_tangent_point(omega, ManifoldPoint::circle(table.at(options.n).argmin_x),
                                            Vector::Ones(1));
      empirical[i] = birkhoff_sum_phi(family, start, options.n) / n;
    } else {
      // Forward iteration of the least expanded direction is unstable, so
      // the telescoped value is used directly.
      ScaledProduct product;
      const ManifoldPoint zero = ManifoldPoint::torus(0.0, 0.0);
      for (int s : omega.symbols(0, options.n)) product.left_multiply(family.derivative(s, zero));
      empirical[i] = product.log_min_singular() / n;
    }
    const std::uint64_t s = derive_seed(seed ^ kBirkhoffStream, i);
    const auto xs = sample_points(dim, s, options.birkhoff_starts);
    const auto vs = sample_directions(dim, s, options.birkhoff_starts);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < options.birkhoff_starts; ++j) {
      const auto p = make_tangent_point(omega, xs[j], vs[j]);
      best = std::min(best, birkhoff_sum_phi(family, p, options.birkhoff_n) / nb);
    }
    birkhoff[i] = best;
  });
  const MeanEstimate e = mean_with_error(empirical);
  const MeanEstimate b = mean_with_error(birkhoff);
  out.empirical = e.mean;
  out.empirical_std_err = e.std_err;
  out.birkhoff = b.mean;
  out.birkhoff_std_err = b.std_err;
  out.source = out.empirical <= out.birkhoff ? "empirical" : "birkhoff";
  out.estimate = std::min(out.empirical, out.birkhoff);
  out.gap_vs_a = out.estimate - out.a_estimate;

  if (options.p_max > 0) {
    try {
      out.orbits = enumerate_periodic_orbits(family, system, options.p_max, options.threads);
      if (!out.orbits.empty()) out.periodic_min = out.orbits.front().phi_average;
      out.notes.push_back("periodic-orbit values are heuristic: they live over periodic base words, not P");
    } catch (const UnsupportedError& err) {
      out.notes.push_back(std::string("periodic orbits skipped: ") + err.what());
    } catch (const ResourceError& err) {
      out.notes.push_back(std::string("periodic orbits skipped: ") + err.what());
    }
  }
  return out;
}

nlohmann::json to_json(const PeriodicOrbitRecord& r) {
  return {{"word", r.word},
          {"x0", std::vector<double>(r.x0.coords.begin(), r.x0.coords.end())},
          {"v0", std::vector<double>(r.v0.begin(), r.v0.end())},
          {"period", r.period},
          {"phi_average", r.phi_average},
          {"residual", r.residual}};
}

nlohmann::json to_json(const LambdaEstimate& e) {
  nlohmann::json j{{"Lambda_estimate", e.estimate},
                   {"source", e.source},
                   {"empirical", e.empirical},
                   {"empirical_std_err", e.empirical_std_err},
                   {"birkhoff", e.birkhoff},
                   {"birkhoff_std_err", e.birkhoff_std_err},
                   {"A_estimate", e.a_estimate},
                   {"gap_vs_A", e.gap_vs_a},
                   {"periodic_orbit_count", e.orbits.size()},
                   {"periodic_heuristic", true},
                   {"notes", e.notes}};
  j["periodic_min"] = e.periodic_min ? nlohmann::json(*e.periodic_min) : nlohmann::json(nullptr);
  return j;
}

}  // namespace randhyp
