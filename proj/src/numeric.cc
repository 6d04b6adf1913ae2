// Copyright 2026 The SGRL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sgrl/numeric.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace sgrl {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "ok";
    case ErrorCode::kDimension: return "dimension error";
    case ErrorCode::kConfig: return "configuration error";
    case ErrorCode::kData: return "data error";
    case ErrorCode::kOutOfRange: return "out of range";
    case ErrorCode::kNumeric: return "numeric error";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kBadMagic: return "bad magic";
    case ErrorCode::kVersion: return "version mismatch";
    case ErrorCode::kTruncated: return "truncated tensor";
    case ErrorCode::kInconsistent: return "shape-config inconsistency";
  }
  return "unknown error";
}

std::string shape_string(std::span<const std::size_t> dims) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) os << 'x';
    os << dims[i];
  }
  os << ']';
  return os.str();
}

Tensor affine(const Tensor& weight, const Tensor& bias, const Tensor& x) {
  const bool ok = weight.rank() == 2 && bias.rank() == 1 && x.rank() == 1 &&
                  weight.dim(1) == x.dim(0) && weight.dim(0) == bias.dim(0);
  if (!ok) {
    fail(ErrorCode::kDimension,
         "affine: weight " + shape_string(weight.dims()) + " cannot map input " +
             shape_string(x.dims()) + " with bias " + shape_string(bias.dims()));
  }
  Tensor out({weight.dim(0)});
  out.vec() = weight.mat() * x.vec() + bias.vec();
  return out;
}

Tensor relu(const Tensor& x) {
  Tensor out = x;
  for (auto& v : out.values()) v = std::max(v, 0.0f);
  return out;
}

Tensor sigmoid(const Tensor& x) {
  Tensor out = x;
  for (auto& v : out.values()) v = sigmoid(v);
  return out;
}

Tensor l2_normalize(const Tensor& q, double norm_epsilon) {
  double sq = 0.0;
  for (float v : q.values()) sq += double(v) * double(v);
  const double denom = std::max(std::sqrt(sq), norm_epsilon);
  Tensor out = q;
  for (auto& v : out.values()) v = static_cast<float>(v / denom);
  return out;
}

double bce_loss(double p, int label) {
  return bce(p, static_cast<double>(label));
}

void adam_step(Tensor& param, const Tensor& grad, AdamState& state) {
  if (!param.same_shape(grad) || !param.same_shape(state.first_moment)) {
    fail(ErrorCode::kDimension, "adam_step: parameter " +
                                    shape_string(param.dims()) + " vs gradient " +
                                    shape_string(grad.dims()) + " vs state " +
                                    shape_string(state.first_moment.dims()));
  }
  const AdamOptions& o = state.options;
  ++state.step;
  const double c1 = 1.0 - std::pow(o.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(o.beta2, static_cast<double>(state.step));
  const float b1 = static_cast<float>(o.beta1);
  const float b2 = static_cast<float>(o.beta2);
  float* m = state.first_moment.data();
  float* v = state.second_moment.data();
  float* p = param.data();
  const float* g = grad.data();
  for (std::size_t i = 0; i < param.size(); ++i) {
    m[i] = b1 * m[i] + (1.0f - b1) * g[i];
    v[i] = b2 * v[i] + (1.0f - b2) * g[i] * g[i];
    if (g[i] == 0.0f) continue;
    const double m_hat = m[i] / c1;
    const double v_hat = v[i] / c2;
    p[i] -= static_cast<float>(o.learning_rate * m_hat / (std::sqrt(v_hat) + o.epsilon));
  }
}

GradCheckReport grad_check(const Objective& objective, std::span<const double> x,
                           double step) {
  check(step >= 1e-5 && step <= 1e-3, ErrorCode::kConfig,
        "grad_check: finite-difference step must lie in [1e-5, 1e-3]");
  std::vector<double> point(x.begin(), x.end());
  const double base = objective.value(point);
  check(std::isfinite(base), ErrorCode::kNumeric,
        "grad_check: loss is not finite at the probe point");
  const std::vector<double> analytic = objective.gradient(point);
  check(analytic.size() == point.size(), ErrorCode::kDimension,
        "grad_check: gradient has " + std::to_string(analytic.size()) +
            " coordinates, expected " + std::to_string(point.size()));

  GradCheckReport report;
  report.coordinates = point.size();
  for (std::size_t i = 0; i < point.size(); ++i) {
    const double saved = point[i];
    point[i] = saved + step;
    const double up = objective.value(point);
    point[i] = saved - step;
    const double down = objective.value(point);
    point[i] = saved;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      fail(ErrorCode::kNumeric, "grad_check: loss is not finite when perturbing "
                                "coordinate " + std::to_string(i));
    }
    const double numeric = (up - down) / (2.0 * step);
    const double err =
        std::abs(analytic[i] - numeric) / std::max(1.0, std::abs(analytic[i]));
    if (err > report.max_relative_error || i == 0) {
      report.max_relative_error = std::max(report.max_relative_error, err);
      report.worst_coordinate = i;
      report.analytic_at_worst = analytic[i];
      report.numeric_at_worst = numeric;
    }
  }
  return report;
}

}  // namespace sgrl
