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

#include <string>

namespace randhyp {

/// Three-valued outcome of a numerical certificate, plus the neutral outcome
/// of pure estimation tasks.
enum class Verdict {
  certified_expanding,
  certified_hyperbolic,
  positive,
  complete,
  inconclusive,
  violated,
};

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::certified_expanding: return "certified-expanding";
    case Verdict::certified_hyperbolic: return "certified-hyperbolic";
    case Verdict::positive: return "positive";
    case Verdict::complete: return "complete";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::violated: return "violated";
  }
  return "unknown";
}

/// Process exit code: 0 certified / positive / complete, 2 otherwise.
inline int exit_code(Verdict v) {
  switch (v) {
    case Verdict::inconclusive:
    case Verdict::violated: return 2;
    default: return 0;
  }
}

}  // namespace randhyp
