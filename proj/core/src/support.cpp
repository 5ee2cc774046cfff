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

#include <cmath>
#include <utility>

#include <Eigen/SVD>

#include "randhyp/errors.hpp"
#include "randhyp/linalg.hpp"
#include "randhyp/statistics.hpp"

namespace randhyp {

namespace {

std::string join_issues(const std::vector<ConfigError::Issue>& issues) {
  std::string text = "configuration error";
  for (const auto& issue : issues) {
    text += "\n  " + issue.path + ": " + issue.message;
  }
  return text;
}

}  // namespace

ConfigError::ConfigError(std::vector<Issue> issues)
    : Error(join_issues(issues)), issues_(std::move(issues)) {}

ConfigError::ConfigError(std::string path, std::string message)
    : ConfigError(std::vector<Issue>{{std::move(path), std::move(message)}}) {}

double operator_norm(const Matrix& m) {
  if (m.rows() == 1) return std::abs(m(0, 0));
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double min_singular_value(const Matrix& m) {
  if (m.rows() == 1) return std::abs(m(0, 0));
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

Vector canonical_sign(Vector v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-300) {
      if (v(i) < 0) v = -v;
      break;
    }
  }
  return v;
}

Vector min_right_singular_vector(const Matrix& m) {
  if (m.rows() == 1) return Vector::Ones(1);
  // The dominant right singular vector is well conditioned even when
  // sigma_min / sigma_max is below machine precision; take its normal.
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector top = svd.matrixV().col(0);
  Vector v(2);
  v << -top(1), top(0);
  return canonical_sign(v);
}

Vector max_left_singular_vector(const Matrix& m) {
  if (m.rows() == 1) return Vector::Ones(1);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU);
  return canonical_sign(svd.matrixU().col(0));
}

double sine_between(const Vector& a, const Vector& b) {
  if (a.size() == 1) return 0.0;
  const double cross = a(0) * b(1) - a(1) * b(0);
  return std::abs(cross) / (a.norm() * b.norm());
}

double line_angle(const Vector& a, const Vector& b) {
  if (a.size() == 1) return 0.0;
  const double cross = a(0) * b(1) - a(1) * b(0);
  return std::atan2(std::abs(cross), std::abs(a.dot(b)));
}

MeanEstimate mean_with_error(std::span<const double> values) {
  MeanEstimate out;
  out.count = values.size();
  if (values.empty()) return out;
  CompensatedSum sum;
  for (double v : values) sum += v;
  out.mean = sum.value() / static_cast<double>(values.size());
  if (values.size() < 2) return out;
  CompensatedSum sq;
  for (double v : values) sq += (v - out.mean) * (v - out.mean);
  const double var = sq.value() / static_cast<double>(values.size() - 1);
  out.std_err = std::sqrt(var / static_cast<double>(values.size()));
  return out;
}

MeanEstimate batch_means(std::span<const double> values, std::size_t batches) {
  if (batches == 0 || values.size() < batches) {
    throw ContractError("batch_means: need at least one value per batch");
  }
  const std::size_t len = values.size() / batches;
  std::vector<double> means(batches);
  CompensatedSum total;
  for (std::size_t b = 0; b < batches; ++b) {
    CompensatedSum s;
    for (std::size_t i = b * len; i < (b + 1) * len; ++i) {
      s += values[i];
      total += values[i];
    }
    means[b] = s.value() / static_cast<double>(len);
  }
  MeanEstimate out = mean_with_error(means);
  out.mean = total.value() / static_cast<double>(len * batches);
  out.count = len * batches;
  return out;
}


void ScaledProduct::left_multiply(const Matrix& m) {
  if (direction_.size() == 0) direction_ = Matrix::Identity(m.rows(), m.cols());
  log_abs_det_ += std::log(std::abs(m.determinant()));
  direction_ = m * direction_;
  const double s = direction_.cwiseAbs().maxCoeff();
  log_scale_ += std::log(s);
  direction_ /= s;
  ++steps_;
}

double ScaledProduct::log_max_singular() const {
  return log_scale_.value() + std::log(operator_norm(direction_));
}

double ScaledProduct::log_min_singular() const {
  if (direction_.rows() == 1) return log_scale_.value() + std::log(std::abs(direction_(0, 0)));
  return log_abs_det_.value() - log_max_singular();
}

}  // namespace randhyp
