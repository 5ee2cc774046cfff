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

#include "randhyp/base_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <utility>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "randhyp/errors.hpp"
#include "randhyp/random.hpp"

namespace randhyp {

namespace detail {

// Lazily extended realisation of a stationary two-sided Markov chain. The
// anchor symbol at absolute position 0 is drawn from the stationary law;
// positive positions follow the transition matrix, negative ones the
// time-reversed chain. Each draw uses keyed_uniform(seed, position), so the
// path is a pure function of the seed.
struct MarkovPath {
  std::mutex mutex;
  std::vector<int> forward;   // positions 0, 1, 2, ...
  std::vector<int> backward;  // positions -1, -2, ...
};

}  // namespace detail

namespace {

constexpr double kStochasticTolerance = 1e-12;
constexpr std::int64_t kAbsolutePositionLimit = 16 * BaseState::kWindowLimit;

std::vector<double> cumulative(const std::vector<double>& p) {
  std::vector<double> cdf(p.size());
  std::partial_sum(p.begin(), p.end(), cdf.begin());
  return cdf;
}

int draw(const std::vector<double>& cdf, double u) noexcept {
  const double total = cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u * total);
  const auto idx = static_cast<int>(it - cdf.begin());
  return std::min(idx, static_cast<int>(cdf.size()) - 1);
}

bool all_reachable(const std::vector<std::vector<double>>& t, bool reversed) {
  const std::size_t n = t.size();
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < n; ++j) {
      const double w = reversed ? t[j][i] : t[i][j];
      if (w > 0.0 && !seen[j]) {
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

std::vector<double> markov_stationary(const std::vector<std::vector<double>>& t) {
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = t[j][i] - (i == j ? 1.0 : 0.0);
  }
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  const Eigen::VectorXd pi = a.fullPivLu().solve(b);
  std::vector<double> out(pi.data(), pi.data() + n);
  for (double& p : out) p = std::max(p, 0.0);
  const double s = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& p : out) p /= s;
  return out;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

std::string to_string(BaseKind kind) {
  switch (kind) {
    case BaseKind::bernoulli: return "bernoulli";
    case BaseKind::markov: return "markov";
    case BaseKind::rotation: return "rotation";
    case BaseKind::dirac: return "dirac";
  }
  return "unknown";
}

std::vector<ConfigError::Issue> validate_base_spec(const BaseSystemSpec& spec,
                                                   const std::string& path) {
  std::vector<ConfigError::Issue> issues;
  auto fail = [&](const std::string& field, std::string msg) {
    issues.push_back({path + "." + field, std::move(msg)});
  };
  const int a = spec.alphabet_size;
  if (a < 1) fail("alphabet_size", "must be a positive integer");

  switch (spec.kind) {
    case BaseKind::dirac:
      if (a != 1) fail("alphabet_size", "dirac base has a single symbol");
      break;
    case BaseKind::rotation:
      if (!std::isfinite(spec.rotation_number)) fail("rotation_number", "must be finite");
      break;
    case BaseKind::bernoulli: {
      if (static_cast<int>(spec.probabilities.size()) != a) {
        fail("probabilities", "expected " + std::to_string(a) + " entries");
        break;
      }
      double sum = 0.0;
      bool negative = false;
      for (double p : spec.probabilities) {
        if (!(p >= 0.0) || !std::isfinite(p)) negative = true;
        sum += p;
      }
      if (negative) fail("probabilities", "entries must be finite and nonnegative");
      if (std::abs(sum - 1.0) > kStochasticTolerance) {
        fail("probabilities", "must sum to 1 (got " + std::to_string(sum) + ")");
      }
      break;
    }
    case BaseKind::markov: {
      const auto& t = spec.transition;
      if (static_cast<int>(t.size()) != a ||
          std::any_of(t.begin(), t.end(), [a](const auto& row) { return static_cast<int>(row.size()) != a; })) {
        fail("transition", "expected a " + std::to_string(a) + "x" + std::to_string(a) + " matrix");
        break;
      }
      bool rows_ok = true;
      for (std::size_t i = 0; i < t.size(); ++i) {
        double sum = 0.0;
        for (double p : t[i]) {
          if (!(p >= 0.0) || !std::isfinite(p)) rows_ok = false;
          sum += p;
        }
        if (std::abs(sum - 1.0) > kStochasticTolerance) {
          fail("transition", "row " + std::to_string(i) + " must sum to 1");
          rows_ok = false;
        }
      }
      if (rows_ok && !(all_reachable(t, false) && all_reachable(t, true))) {
        fail("transition", "chain is reducible; an irreducible transition matrix is required");
      }
      break;
    }
  }
  return issues;
}

BaseSystemSpec parse_base_spec(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "must be an object");
  std::vector<ConfigError::Issue> issues;
  BaseSystemSpec spec;

  const auto kind = j.find("kind");
  if (kind == j.end() || !kind->is_string()) {
    throw ConfigError(path + ".kind", "required; one of bernoulli, markov, rotation, dirac");
  }
  const std::string k = kind->get<std::string>();
  if (k == "bernoulli") spec.kind = BaseKind::bernoulli;
  else if (k == "markov") spec.kind = BaseKind::markov;
  else if (k == "rotation") spec.kind = BaseKind::rotation;
  else if (k == "dirac") spec.kind = BaseKind::dirac;
  else throw ConfigError(path + ".kind", "unknown base kind '" + k + "'");

  for (const auto& [key, value] : j.items()) {
    if (key != "kind" && key != "alphabet_size" && key != "probabilities" &&
        key != "transition" && key != "rotation_number") {
      issues.push_back({path + "." + key, "unknown field"});
    }
  }

  auto read_vector = [&](const nlohmann::json& v, const std::string& field) {
    std::vector<double> out;
    if (!v.is_array()) {
      issues.push_back({path + "." + field, "must be an array of numbers"});
      return out;
    }
    for (const auto& e : v) {
      if (!e.is_number()) {
        issues.push_back({path + "." + field, "must be an array of numbers"});
        return std::vector<double>{};
      }
      out.push_back(e.get<double>());
    }
    return out;
  };

  if (auto it = j.find("probabilities"); it != j.end()) {
    spec.probabilities = read_vector(*it, "probabilities");
  }
  if (auto it = j.find("transition"); it != j.end()) {
    if (!it->is_array()) {
      issues.push_back({path + ".transition", "must be an array of rows"});
    } else {
      for (const auto& row : *it) spec.transition.push_back(read_vector(row, "transition"));
    }
  }
  if (auto it = j.find("rotation_number"); it != j.end()) {
    if (it->is_number()) spec.rotation_number = it->get<double>();
    else issues.push_back({path + ".rotation_number", "must be a number"});
  } else if (spec.kind == BaseKind::rotation) {
    issues.push_back({path + ".rotation_number", "required for rotation bases"});
  }

  switch (spec.kind) {
    case BaseKind::bernoulli: spec.alphabet_size = static_cast<int>(spec.probabilities.size()); break;
    case BaseKind::markov: spec.alphabet_size = static_cast<int>(spec.transition.size()); break;
    case BaseKind::rotation: spec.alphabet_size = 2; break;
    case BaseKind::dirac: spec.alphabet_size = 1; break;
  }
  if (auto it = j.find("alphabet_size"); it != j.end()) {
    if (it->is_number_integer()) spec.alphabet_size = it->get<int>();
    else issues.push_back({path + ".alphabet_size", "must be an integer"});
  }
  if (spec.kind == BaseKind::bernoulli && j.find("probabilities") == j.end()) {
    issues.push_back({path + ".probabilities", "required for bernoulli bases"});
  }
  if (spec.kind == BaseKind::markov && j.find("transition") == j.end()) {
    issues.push_back({path + ".transition", "required for markov bases"});
  }

  if (issues.empty()) {
    auto more = validate_base_spec(spec, path);
    issues.insert(issues.end(), more.begin(), more.end());
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return spec;
}

nlohmann::json to_json(const BaseSystemSpec& spec) {
  nlohmann::json j;
  j["kind"] = to_string(spec.kind);
  j["alphabet_size"] = spec.alphabet_size;
  if (spec.kind == BaseKind::bernoulli) j["probabilities"] = spec.probabilities;
  if (spec.kind == BaseKind::markov) j["transition"] = spec.transition;
  if (spec.kind == BaseKind::rotation) j["rotation_number"] = spec.rotation_number;
  return j;
}

BaseSystem::BaseSystem(BaseSystemSpec spec) : spec_(std::move(spec)) {
  const auto a = static_cast<std::size_t>(spec_.alphabet_size);
  switch (spec_.kind) {
    case BaseKind::dirac: stationary_ = {1.0}; break;
    case BaseKind::rotation: stationary_.assign(a, 1.0 / static_cast<double>(a)); break;
    case BaseKind::bernoulli: stationary_ = spec_.probabilities; break;
    case BaseKind::markov: {
      stationary_ = markov_stationary(spec_.transition);
      for (const auto& row : spec_.transition) forward_cdf_.push_back(cumulative(row));
      for (std::size_t j = 0; j < a; ++j) {
        std::vector<double> row(a);
        for (std::size_t i = 0; i < a; ++i) {
          row[i] = stationary_[i] * spec_.transition[i][j] / stationary_[j];
        }
        backward_cdf_.push_back(cumulative(row));
      }
      break;
    }
  }
  stationary_cdf_ = cumulative(stationary_);
}

std::shared_ptr<const BaseSystem> BaseSystem::create(BaseSystemSpec spec) {
  auto issues = validate_base_spec(spec);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return std::shared_ptr<const BaseSystem>(new BaseSystem(std::move(spec)));
}

int BaseSystem::draw_stationary(double u) const noexcept { return draw(stationary_cdf_, u); }

int BaseSystem::draw_forward(int from, double u) const noexcept {
  return draw(forward_cdf_[static_cast<std::size_t>(from)], u);
}

int BaseSystem::draw_backward(int from, double u) const noexcept {
  return draw(backward_cdf_[static_cast<std::size_t>(from)], u);
}

BaseState BaseState::from_seed(std::shared_ptr<const BaseSystem> system, std::uint64_t seed) {
  if (!system) throw ContractError("BaseState: null base system");
  BaseState s;
  s.seed_ = seed;
  if (system->kind() == BaseKind::rotation) s.angle0_ = keyed_uniform(seed, 0);
  if (system->kind() == BaseKind::markov) s.path_ = std::make_shared<detail::MarkovPath>();
  s.system_ = std::move(system);
  return s;
}

BaseState BaseState::rotation(std::shared_ptr<const BaseSystem> system, double angle) {
  if (!system || system->kind() != BaseKind::rotation) {
    throw ContractError("BaseState::rotation requires a rotation base");
  }
  BaseState s;
  s.system_ = std::move(system);
  s.angle0_ = angle - std::floor(angle);
  return s;
}

BaseState BaseState::periodic(std::shared_ptr<const BaseSystem> system, std::vector<int> word) {
  if (!system) throw ContractError("BaseState: null base system");
  if (word.empty()) throw ContractError("BaseState::periodic: empty word");
  for (int w : word) {
    if (w < 0 || w >= system->alphabet_size()) {
      throw ContractError("BaseState::periodic: symbol outside the alphabet");
    }
  }
  BaseState s;
  s.system_ = std::move(system);
  s.word_ = std::make_shared<const std::vector<int>>(std::move(word));
  return s;
}

int BaseState::absolute_symbol(std::int64_t pos) const {
  if (word_) {
    return (*word_)[static_cast<std::size_t>(floor_mod(pos, static_cast<std::int64_t>(word_->size())))];
  }
  const BaseSystem& sys = *system_;
  switch (sys.kind()) {
    case BaseKind::dirac: return 0;
    case BaseKind::bernoulli: return sys.draw_stationary(keyed_uniform(seed_, pos));
    case BaseKind::rotation: {
      double t = angle0_ + static_cast<double>(pos) * sys.spec().rotation_number;
      t -= std::floor(t);
      const int a = sys.alphabet_size();
      return std::min(a - 1, static_cast<int>(std::floor(t * a)));
    }
    case BaseKind::markov: {
      if (pos > kAbsolutePositionLimit || pos < -kAbsolutePositionLimit) {
        throw ResourceError("markov symbol window exhausted");
      }
      std::lock_guard lock(path_->mutex);
      auto& fwd = path_->forward;
      auto& bwd = path_->backward;
      if (fwd.empty()) fwd.push_back(sys.draw_stationary(keyed_uniform(seed_, 0)));
      if (pos >= 0) {
        while (static_cast<std::int64_t>(fwd.size()) <= pos) {
          const auto next = static_cast<std::int64_t>(fwd.size());
          fwd.push_back(sys.draw_forward(fwd.back(), keyed_uniform(seed_, next)));
        }
        return fwd[static_cast<std::size_t>(pos)];
      }
      const auto depth = static_cast<std::size_t>(-pos);
      while (bwd.size() < depth) {
        const int from = bwd.empty() ? fwd.front() : bwd.back();
        const auto next = -static_cast<std::int64_t>(bwd.size()) - 1;
        bwd.push_back(sys.draw_backward(from, keyed_uniform(seed_, next)));
      }
      return bwd[depth - 1];
    }
  }
  return 0;
}

int BaseState::symbol_at(std::int64_t k) const {
  if (k > kWindowLimit || k < -kWindowLimit) {
    throw ResourceError("symbol_at: |k| exceeds the window limit of " +
                        std::to_string(kWindowLimit));
  }
  return absolute_symbol(offset_ + k);
}

std::vector<int> BaseState::symbols(std::int64_t first, std::size_t count) const {
  std::vector<int> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = symbol_at(first + static_cast<std::int64_t>(i));
  return out;
}

double BaseState::angle() const {
  if (system_->kind() != BaseKind::rotation || word_) return 0.0;
  double t = angle0_ + static_cast<double>(offset_) * system_->spec().rotation_number;
  return t - std::floor(t);
}

BaseState BaseState::shifted(std::int64_t k) const {
  BaseState s = *this;
  if (system_->kind() != BaseKind::dirac || word_) s.offset_ += k;
  return s;
}

bool operator==(const BaseState& a, const BaseState& b) {
  if (a.system_ != b.system_) return false;
  if (static_cast<bool>(a.word_) != static_cast<bool>(b.word_)) return false;
  if (a.word_) {
    const auto p = static_cast<std::int64_t>(a.word_->size());
    return *a.word_ == *b.word_ && floor_mod(a.offset_, p) == floor_mod(b.offset_, p);
  }
  switch (a.system_->kind()) {
    case BaseKind::dirac: return true;
    case BaseKind::rotation: return a.angle0_ == b.angle0_ && a.offset_ == b.offset_;
    default: return a.seed_ == b.seed_ && a.offset_ == b.offset_;
  }
}

BaseState base_step(const BaseState& state) { return state.shifted(1); }

BaseState base_inverse_step(const BaseState& state) { return state.shifted(-1); }

std::vector<BaseState> sample_base(const std::shared_ptr<const BaseSystem>& system,
                                   std::uint64_t seed, std::size_t count) {
  if (count == 0) throw ContractError("sample_base: count must be positive");
  std::vector<BaseState> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = system->kind() == BaseKind::dirac ? seed : derive_seed(seed, i);
    out.push_back(BaseState::from_seed(system, s));
  }
  return out;
}

std::vector<BaseState> sample_base(const BaseSystemSpec& spec, std::uint64_t seed,
                                   std::size_t count) {
  return sample_base(BaseSystem::create(spec), seed, count);
}

}  // namespace randhyp
