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

#include <cstdint>

namespace randhyp {

// Counter-based keyed hashing. Every random quantity in the library is a pure
// function of (seed, key), so lazily realised two-sided sequences need no
// stored history and results do not depend on evaluation order.

/// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Child seed for the index-th independent stream derived from seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Uniform double in [0, 1) keyed by (seed, signed position).
constexpr double keyed_uniform(std::uint64_t seed, std::int64_t key) noexcept {
  const std::uint64_t h = mix64(mix64(seed) + 0xd1b54a32d192ed03ULL * static_cast<std::uint64_t>(key));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Stream tags for derive_seed(seed ^ tag, i) so that the base realisation and
// the initial fibre points drawn for the same sample index are independent.
inline constexpr std::uint64_t kFiberPointStream = 0x5eed0f1bee000001ULL;
inline constexpr std::uint64_t kTangentStream = 0x5eed0f1bee000002ULL;
inline constexpr std::uint64_t kLambdaStream = 0x5eed0f1bee000003ULL;
inline constexpr std::uint64_t kCurveStream = 0x5eed0f1bee000004ULL;
inline constexpr std::uint64_t kBirkhoffStream = 0x5eed0f1bee000005ULL;

}  // namespace randhyp
