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
#include <cstddef>
#include <span>

namespace randhyp {

/// Neumaier compensated summation. Long Birkhoff sums of log-derivatives are
/// accumulated with this so that e.g. n copies of log 2 divide back to log 2.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct MeanEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::size_t count = 0;
};

/// Sample mean with standard error s / sqrt(count); std_err is 0 for count < 2.
MeanEstimate mean_with_error(std::span<const double> values);

/// Batch-means estimate: values are split into `batches` contiguous batches of
/// equal length (a trailing remainder is dropped); the error is the standard
/// error of the batch means.
MeanEstimate batch_means(std::span<const double> values, std::size_t batches);

}  // namespace randhyp
