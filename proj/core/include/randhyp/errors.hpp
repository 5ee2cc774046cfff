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

#include <stdexcept>
#include <string>
#include <vector>

namespace randhyp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration. Carries every issue found, each tagged with the
/// JSON field path it refers to (e.g. "base.probabilities").
class ConfigError : public Error {
 public:
  struct Issue {
    std::string path;
    std::string message;
  };

  explicit ConfigError(std::vector<Issue> issues);
  ConfigError(std::string path, std::string message);

  const std::vector<Issue>& issues() const noexcept { return issues_; }

 private:
  std::vector<Issue> issues_;
};

/// A precondition on arguments was violated (dimension mismatch, zero vector).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// The operation is not defined for this family or base (e.g. inverse of a
/// covering map).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Floating-point range exceeded; callers should switch to log-space routines.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A resource limit (symbol window) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace randhyp
