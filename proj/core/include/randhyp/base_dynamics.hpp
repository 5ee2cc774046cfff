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
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "randhyp/errors.hpp"

namespace randhyp {

/// Kind of ergodic base system (Omega, P, theta).
enum class BaseKind { bernoulli, markov, rotation, dirac };

std::string to_string(BaseKind kind);

/// User-facing description of the base. Wire format:
/// {"kind": "...", "alphabet_size": n, "probabilities": [...],
///  "transition": [[...]], "rotation_number": r}
struct BaseSystemSpec {
  BaseKind kind = BaseKind::dirac;
  int alphabet_size = 1;
  std::vector<double> probabilities;            // bernoulli
  std::vector<std::vector<double>> transition;  // markov, row-stochastic
  double rotation_number = 0.0;                 // rotation; irrationality is not checked
};

/// Parses and validates; throws ConfigError with paths prefixed by `path`.
BaseSystemSpec parse_base_spec(const nlohmann::json& j, const std::string& path = "base");
nlohmann::json to_json(const BaseSystemSpec& spec);

/// Validated base system with the derived sampling tables.
class BaseSystem {
 public:
  /// Throws ConfigError listing every violated constraint.
  static std::shared_ptr<const BaseSystem> create(BaseSystemSpec spec);

  const BaseSystemSpec& spec() const noexcept { return spec_; }
  BaseKind kind() const noexcept { return spec_.kind; }
  int alphabet_size() const noexcept { return spec_.alphabet_size; }

  /// Stationary law of the symbol process (bernoulli: the probabilities;
  /// markov: the stationary vector; rotation: interval lengths; dirac: {1}).
  std::span<const double> stationary() const noexcept { return stationary_; }

  int draw_stationary(double u) const noexcept;
  int draw_forward(int from, double u) const noexcept;   // markov transition
  int draw_backward(int from, double u) const noexcept;  // time-reversed chain

 private:
  explicit BaseSystem(BaseSystemSpec spec);

  BaseSystemSpec spec_;
  std::vector<double> stationary_;
  std::vector<double> stationary_cdf_;
  std::vector<std::vector<double>> forward_cdf_;
  std::vector<std::vector<double>> backward_cdf_;
};

/// Every violated constraint, with paths relative to `path`.
std::vector<ConfigError::Issue> validate_base_spec(const BaseSystemSpec& spec,
                                                  const std::string& path = "base");

namespace detail {
struct MarkovPath;
}

/// A point omega of the base. Shift bases are realised lazily: the symbol at
/// absolute position j is a pure function of (seed, j), so theta and its
/// inverse only move origin_offset. Rotation states store the initial angle
/// and the same integer offset, which makes step/inverse-step exact.
///
/// Rotation bases are coded into symbols by the partition of [0,1) into
/// alphabet_size equal intervals; fibre families read only symbols.
class BaseState {
 public:
  /// Maximal |k| accepted by symbol_at.
  static constexpr std::int64_t kWindowLimit = 1'000'000;

  /// Generic realisation keyed by seed (rotation: angle drawn from the seed).
  static BaseState from_seed(std::shared_ptr<const BaseSystem> system, std::uint64_t seed);
  /// Rotation state with the given angle in [0, 1).
  static BaseState rotation(std::shared_ptr<const BaseSystem> system, double angle);
  /// Periodic symbol sequence ... w w w ... with symbol_at(0) = word[0].
  static BaseState periodic(std::shared_ptr<const BaseSystem> system, std::vector<int> word);

  /// Symbol at relative position k. Throws ResourceError when |k| exceeds
  /// kWindowLimit. Thread-safe.
  int symbol_at(std::int64_t k) const;

  /// symbol_at(first), ..., symbol_at(first + count - 1).
  std::vector<int> symbols(std::int64_t first, std::size_t count) const;

  /// Current rotation angle in [0, 1); 0 for non-rotation bases.
  double angle() const;

  BaseState shifted(std::int64_t k) const;

  const BaseSystem& system() const noexcept { return *system_; }
  const std::shared_ptr<const BaseSystem>& system_ptr() const noexcept { return system_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::int64_t origin_offset() const noexcept { return offset_; }
  bool is_periodic() const noexcept { return static_cast<bool>(word_); }

  /// Same base system and same realisation at the same position.
  friend bool operator==(const BaseState& a, const BaseState& b);

 private:
  BaseState() = default;
  int absolute_symbol(std::int64_t position) const;

  std::shared_ptr<const BaseSystem> system_;
  std::uint64_t seed_ = 0;
  std::int64_t offset_ = 0;
  double angle0_ = 0.0;
  std::shared_ptr<const std::vector<int>> word_;
  std::shared_ptr<detail::MarkovPath> path_;
};

/// theta(omega).
BaseState base_step(const BaseState& state);
/// theta^{-1}(omega).
BaseState base_inverse_step(const BaseState& state);

/// `count` independent P-distributed states; a deterministic function of
/// (system, seed). Dirac bases return identical states.
std::vector<BaseState> sample_base(const std::shared_ptr<const BaseSystem>& system,
                                   std::uint64_t seed, std::size_t count);
/// Validates the spec first (ConfigError on failure).
std::vector<BaseState> sample_base(const BaseSystemSpec& spec, std::uint64_t seed,
                                   std::size_t count);

}  // namespace randhyp
