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

#include "randhyp/fiber_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "randhyp/errors.hpp"

namespace randhyp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSeamSnap = 1e-15;

std::vector<double> read_numbers(const nlohmann::json& params, const char* key,
                                 std::vector<double> fallback, const std::string& path,
                                 std::vector<ConfigError::Issue>& issues) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  std::vector<double> out;
  if (!it->is_array() || it->empty()) {
    issues.push_back({path + ".params." + key, "must be a non-empty array of numbers"});
    return fallback;
  }
  for (const auto& e : *it) {
    if (!e.is_number()) {
      issues.push_back({path + ".params." + key, "must be a non-empty array of numbers"});
      return fallback;
    }
    out.push_back(e.get<double>());
  }
  return out;
}

Matrix diag2(double a, double b) {
  Matrix m(2, 2);
  m << a, 0.0, 0.0, b;
  return m;
}

}  // namespace

ManifoldPoint ManifoldPoint::circle(double x) {
  ManifoldPoint p;
  p.coords = Vector::Constant(1, reduce_mod1(x));
  return p;
}

ManifoldPoint ManifoldPoint::torus(double x, double y) {
  ManifoldPoint p;
  p.coords = Vector(2);
  p.coords << reduce_mod1(x), reduce_mod1(y);
  return p;
}

ManifoldPoint ManifoldPoint::from_lift(const Vector& lifted) {
  ManifoldPoint p;
  p.coords = lifted;
  for (Eigen::Index i = 0; i < p.coords.size(); ++i) p.coords(i) = reduce_mod1(p.coords(i));
  return p;
}

double reduce_mod1(double x) noexcept {
  double r = x - std::floor(x);
  if (r >= 1.0 - kSeamSnap) r = 0.0;
  return r;
}

double circle_distance(double a, double b) noexcept {
  const double d = std::abs(a - b);
  const double r = d - std::floor(d);
  return std::min(r, 1.0 - r);
}

double manifold_distance(const ManifoldPoint& a, const ManifoldPoint& b) {
  if (a.dim() != b.dim()) throw ContractError("manifold_distance: dimension mismatch");
  double d = 0.0;
  for (int i = 0; i < a.dim(); ++i) d = std::max(d, circle_distance(a.coords(i), b.coords(i)));
  return d;
}

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::doubling: return "doubling";
    case FamilyKind::perturbed_doubling: return "perturbed-doubling";
    case FamilyKind::bernoulli_linear: return "bernoulli-linear";
    case FamilyKind::diagonal_cocycle: return "diagonal-cocycle";
    case FamilyKind::random_cat: return "random-cat";
  }
  return "unknown";
}

FiberFamilySpec parse_fiber_spec(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "must be an object");
  std::vector<ConfigError::Issue> issues;
  FiberFamilySpec spec;
  const auto fam = j.find("family");
  if (fam == j.end() || !fam->is_string()) {
    throw ConfigError(path + ".family",
                      "required; one of doubling, perturbed-doubling, bernoulli-linear, "
                      "diagonal-cocycle, random-cat");
  }
  const std::string name = fam->get<std::string>();
  if (name == "doubling") spec.kind = FamilyKind::doubling;
  else if (name == "perturbed-doubling") spec.kind = FamilyKind::perturbed_doubling;
  else if (name == "bernoulli-linear") spec.kind = FamilyKind::bernoulli_linear;
  else if (name == "diagonal-cocycle") spec.kind = FamilyKind::diagonal_cocycle;
  else if (name == "random-cat") spec.kind = FamilyKind::random_cat;
  else issues.push_back({path + ".family", "unknown family '" + name + "'"});

  if (auto it = j.find("params"); it != j.end()) {
    if (it->is_object()) spec.params = *it;
    else issues.push_back({path + ".params", "must be an object"});
  }
  for (const auto& [key, value] : j.items()) {
    if (key != "family" && key != "params") issues.push_back({path + "." + key, "unknown field"});
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return spec;
}

FiberFamily FiberFamily::create(const FiberFamilySpec& spec, int alphabet_size) {
  const std::string path = "fiber";
  std::vector<ConfigError::Issue> issues;
  FiberFamily f;
  f.kind_ = spec.kind;
  f.alphabet_size_ = alphabet_size;
  const auto& params = spec.params;
  const auto a_size = static_cast<std::size_t>(std::max(alphabet_size, 1));

  auto allow_keys = [&](std::initializer_list<const char*> keys) {
    for (const auto& [key, value] : params.items()) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
        issues.push_back({path + ".params." + key, "unknown parameter for " + to_string(spec.kind)});
      }
    }
  };

  switch (spec.kind) {
    case FamilyKind::doubling:
      allow_keys({});
      f.dim_ = 1;
      f.bounds_ = {2.0, 0.5, 0.0};
      break;

    case FamilyKind::perturbed_doubling: {
      allow_keys({"eps_max"});
      f.dim_ = 1;
      f.eps_max_ = 0.1;
      if (auto it = params.find("eps_max"); it != params.end()) {
        if (it->is_number()) f.eps_max_ = it->get<double>();
        else issues.push_back({path + ".params.eps_max", "must be a number"});
      }
      const double e = std::abs(f.eps_max_);
      if (!(e < 1.0 / kTwoPi)) {
        issues.push_back({path + ".params.eps_max",
                          "|eps_max| must be below 1/(2 pi) to keep the map expanding"});
        break;
      }
      // sup |d/dx log(2 + 2 pi eps cos 2 pi x)| <= 4 pi^2 eps / (2 - 2 pi eps).
      f.bounds_ = {2.0 + kTwoPi * e, 1.0 / (2.0 - kTwoPi * e),
                   kTwoPi * kTwoPi * e / (2.0 - kTwoPi * e)};
      break;
    }

    case FamilyKind::bernoulli_linear: {
      allow_keys({"degrees"});
      f.dim_ = 1;
      f.slopes_ = read_numbers(params, "degrees", {2.0, 3.0}, path, issues);
      if (f.slopes_.size() < a_size) {
        issues.push_back({path + ".params.degrees", "need one degree per base symbol"});
        break;
      }
      double hi = 0.0, lo = 1e300;
      for (std::size_t s = 0; s < a_size; ++s) {
        const double d = f.slopes_[s];
        if (d != std::floor(d) || d < 2.0) {
          issues.push_back({path + ".params.degrees", "degrees must be integers >= 2"});
          break;
        }
        hi = std::max(hi, d);
        lo = std::min(lo, d);
      }
      f.bounds_ = {hi, 1.0 / lo, 0.0};
      break;
    }

    case FamilyKind::diagonal_cocycle: {
      allow_keys({"a", "b"});
      f.dim_ = 2;
      f.invertible_ = true;
      const auto a = read_numbers(params, "a", {2.0, 3.0}, path, issues);
      const auto b = read_numbers(params, "b", {3.0, 4.0}, path, issues);
      if (a.size() < a_size || b.size() < a_size) {
        issues.push_back({path + ".params", "need one (a, b) pair per base symbol"});
        break;
      }
      double hi = 0.0, hi_inv = 0.0;
      for (std::size_t s = 0; s < a_size; ++s) {
        if (a[s] == 0.0 || b[s] == 0.0 || !std::isfinite(a[s]) || !std::isfinite(b[s])) {
          issues.push_back({path + ".params", "diagonal entries must be finite and nonzero"});
          break;
        }
        f.matrices_.push_back(diag2(a[s], b[s]));
        f.inverses_.push_back(diag2(1.0 / a[s], 1.0 / b[s]));
        hi = std::max({hi, std::abs(a[s]), std::abs(b[s])});
        hi_inv = std::max({hi_inv, 1.0 / std::abs(a[s]), 1.0 / std::abs(b[s])});
        if (std::min(std::abs(a[s]), std::abs(b[s])) <= 1.0) f.expanding_ = false;
      }
      f.bounds_ = {hi, hi_inv, 0.0};
      break;
    }

    case FamilyKind::random_cat: {
      allow_keys({"matrices"});
      f.dim_ = 2;
      f.invertible_ = true;
      f.expanding_ = false;
      nlohmann::json mats = nlohmann::json::array({{{2, 1}, {1, 1}}, {{3, 1}, {2, 1}}});
      if (auto it = params.find("matrices"); it != params.end()) mats = *it;
      bool shape_ok = mats.is_array() && mats.size() >= a_size;
      for (std::size_t s = 0; shape_ok && s < mats.size(); ++s) {
        const auto& m = mats[s];
        if (!m.is_array() || m.size() != 2 || !m[0].is_array() || !m[1].is_array() ||
            m[0].size() != 2 || m[1].size() != 2) {
          shape_ok = false;
          break;
        }
        Matrix mat(2, 2);
        for (int r = 0; r < 2; ++r) {
          for (int c = 0; c < 2; ++c) {
            if (!m[r][c].is_number()) shape_ok = false;
            else mat(r, c) = m[r][c].get<double>();
          }
        }
        if (!shape_ok) break;
        const double det = mat.determinant();
        if ((mat.array() != mat.array().floor()).any() || std::abs(det) != 1.0) {
          issues.push_back({path + ".params.matrices",
                            "matrices must be integer with determinant +-1"});
          break;
        }
        f.matrices_.push_back(mat);
        Matrix inv(2, 2);
        inv << mat(1, 1), -mat(0, 1), -mat(1, 0), mat(0, 0);
        f.inverses_.push_back(inv / det);
      }
      if (!shape_ok) {
        issues.push_back({path + ".params.matrices",
                          "need one 2x2 numeric matrix per base symbol"});
        break;
      }
      if (f.matrices_.size() < a_size) break;  // a matrix was rejected above
      double hi = 0.0, hi_inv = 0.0;
      for (std::size_t s = 0; s < a_size; ++s) {
        hi = std::max(hi, operator_norm(f.matrices_[s]));
        hi_inv = std::max(hi_inv, operator_norm(f.inverses_[s]));
      }
      f.bounds_ = {hi, hi_inv, 0.0};
      break;
    }
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return f;
}

nlohmann::json FiberFamily::spec_json() const {
  nlohmann::json params = nlohmann::json::object();
  switch (kind_) {
    case FamilyKind::doubling: break;
    case FamilyKind::perturbed_doubling: params["eps_max"] = eps_max_; break;
    case FamilyKind::bernoulli_linear: params["degrees"] = slopes_; break;
    case FamilyKind::diagonal_cocycle: {
      std::vector<double> a, b;
      for (const auto& m : matrices_) {
        a.push_back(m(0, 0));
        b.push_back(m(1, 1));
      }
      params["a"] = a;
      params["b"] = b;
      break;
    }
    case FamilyKind::random_cat: {
      auto mats = nlohmann::json::array();
      for (const auto& m : matrices_) {
        mats.push_back({{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}});
      }
      params["matrices"] = mats;
      break;
    }
  }
  return {{"family", to_string(kind_)}, {"params", params}};
}

void FiberFamily::check_symbol(int symbol) const {
  if (symbol < 0 || symbol >= alphabet_size_) {
    throw ContractError("fiber family: symbol " + std::to_string(symbol) + " outside the alphabet");
  }
}

void FiberFamily::check_point(const ManifoldPoint& x) const {
  if (x.dim() != dim_) {
    throw ContractError("fiber family " + to_string(kind_) + ": expected a point of dimension " +
                        std::to_string(dim_) + ", got " + std::to_string(x.dim()));
  }
}

double FiberFamily::epsilon(int symbol) const noexcept {
  if (kind_ != FamilyKind::perturbed_doubling) return 0.0;
  if (alphabet_size_ <= 1) return eps_max_;
  return eps_max_ * static_cast<double>(symbol) / static_cast<double>(alphabet_size_ - 1);
}

double FiberFamily::circle_lift(int symbol, double x) const noexcept {
  switch (kind_) {
    case FamilyKind::doubling: return 2.0 * x;
    case FamilyKind::perturbed_doubling: return 2.0 * x + epsilon(symbol) * std::sin(kTwoPi * x);
    case FamilyKind::bernoulli_linear: return slopes_[static_cast<std::size_t>(symbol)] * x;
    default: return x;
  }
}

double FiberFamily::circle_slope(int symbol, double x) const noexcept {
  switch (kind_) {
    case FamilyKind::doubling: return 2.0;
    case FamilyKind::perturbed_doubling: return 2.0 + kTwoPi * epsilon(symbol) * std::cos(kTwoPi * x);
    case FamilyKind::bernoulli_linear: return slopes_[static_cast<std::size_t>(symbol)];
    default: return 1.0;
  }
}

Vector FiberFamily::lift(int symbol, const Vector& x) const {
  check_symbol(symbol);
  if (x.size() != dim_) throw ContractError("lift: dimension mismatch");
  if (dim_ == 1) return Vector::Constant(1, circle_lift(symbol, x(0)));
  return matrices_[static_cast<std::size_t>(symbol)] * x;
}

ManifoldPoint FiberFamily::apply(int symbol, const ManifoldPoint& x) const {
  check_point(x);
  return ManifoldPoint::from_lift(lift(symbol, x.coords));
}

Matrix FiberFamily::derivative(int symbol, const ManifoldPoint& x) const {
  check_point(x);
  check_symbol(symbol);
  if (dim_ == 1) return Matrix::Constant(1, 1, circle_slope(symbol, x.coords(0)));
  return matrices_[static_cast<std::size_t>(symbol)];
}

ManifoldPoint FiberFamily::inverse(int symbol, const ManifoldPoint& x) const {
  if (!invertible_) {
    throw UnsupportedError(to_string(kind_) + " is a covering map and has no inverse");
  }
  check_point(x);
  check_symbol(symbol);
  return ManifoldPoint::from_lift(inverses_[static_cast<std::size_t>(symbol)] * x.coords);
}

double FiberFamily::min_step_expansion(int symbol) const {
  check_symbol(symbol);
  switch (kind_) {
    case FamilyKind::doubling: return 2.0;
    case FamilyKind::perturbed_doubling: return 2.0 - kTwoPi * std::abs(epsilon(symbol));
    case FamilyKind::bernoulli_linear: return slopes_[static_cast<std::size_t>(symbol)];
    default: return min_singular_value(matrices_[static_cast<std::size_t>(symbol)]);
  }
}

double FiberFamily::max_step_norm(int symbol) const {
  check_symbol(symbol);
  switch (kind_) {
    case FamilyKind::doubling: return 2.0;
    case FamilyKind::perturbed_doubling: return 2.0 + kTwoPi * std::abs(epsilon(symbol));
    case FamilyKind::bernoulli_linear: return slopes_[static_cast<std::size_t>(symbol)];
    default: return operator_norm(matrices_[static_cast<std::size_t>(symbol)]);
  }
}

ManifoldPoint fiber_apply(const FiberFamily& family, const BaseState& omega, const ManifoldPoint& x) {
  return family.apply(omega.symbol_at(0), x);
}

CocycleMatrix fiber_derivative(const FiberFamily& family, const BaseState& omega,
                               const ManifoldPoint& x) {
  return {family.derivative(omega.symbol_at(0), x), 1};
}

ManifoldPoint fiber_inverse(const FiberFamily& family, const BaseState& omega, const ManifoldPoint& x) {
  return family.inverse(omega.symbol_at(0), x);
}

DerivativeBounds derivative_bounds(const FiberFamily& family) { return family.bounds(); }

}  // namespace randhyp
