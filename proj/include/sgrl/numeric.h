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

#ifndef SGRL_NUMERIC_H_
#define SGRL_NUMERIC_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sgrl/tensor.h"

namespace sgrl {

inline constexpr double kNormEpsilon = 1e-12;
inline constexpr double kProbabilityClamp = 1e-7;

template <typename T>
inline T sigmoid(T x) {
  // Split on sign so exp never overflows.
  if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
  const T e = std::exp(x);
  return e / (T(1) + e);
}

template <typename T>
inline T clamp_probability(T p) {
  return std::clamp(p, T(kProbabilityClamp), T(1) - T(kProbabilityClamp));
}

// Binary cross entropy on a clamped probability.
template <typename T>
inline T bce(T p, T y) {
  const T q = clamp_probability(p);
  return -(y * std::log(q) + (T(1) - y) * std::log(T(1) - q));
}

// d bce / d logit for p = sigmoid(logit). The clamp is treated as a hard
// limit: once p leaves the clamp interval the derivative is zero.
template <typename T>
inline T bce_logit_grad(T p, T y) {
  if (p < T(kProbabilityClamp) || p > T(1) - T(kProbabilityClamp)) return T(0);
  return p - y;
}

// out = W x + b. Throws kDimension naming both shapes when they do not conform.
Tensor affine(const Tensor& weight, const Tensor& bias, const Tensor& x);
Tensor relu(const Tensor& x);
Tensor sigmoid(const Tensor& x);
Tensor l2_normalize(const Tensor& q, double norm_epsilon = kNormEpsilon);
double bce_loss(double p, int label);

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamState() = default;
  AdamState(const std::vector<std::size_t>& dims, AdamOptions options)
      : first_moment(dims), second_moment(dims), options(options) {}

  Tensor first_moment;
  Tensor second_moment;
  long step = 0;
  AdamOptions options;
};

// One bias-corrected Adam update. Moments are always advanced; coordinates
// whose gradient is exactly zero keep their value.
void adam_step(Tensor& param, const Tensor& grad, AdamState& state);

// Adam over every tensor of a parameter struct (see tensor.h visit()).
template <typename Params>
class AdamOptimizer {
 public:
  AdamOptimizer(const Params& params, AdamOptions options) {
    params.visit([&](const std::string&, const Tensor& t) {
      states_.emplace_back(t.dims(), options);
    });
  }

  void step(Params& params, const Params& grads) {
    std::vector<const Tensor*> g;
    grads.visit([&](const std::string&, const Tensor& t) { g.push_back(&t); });
    std::size_t k = 0;
    params.visit([&](const std::string&, Tensor& t) {
      adam_step(t, *g[k], states_[k]);
      ++k;
    });
  }

 private:
  std::vector<AdamState> states_;
};

// A scalar objective over a flat 64-bit parameter vector, with its analytic
// gradient. Used to verify hand-derived backward passes.
struct Objective {
  std::function<double(std::span<const double>)> value;
  std::function<std::vector<double>(std::span<const double>)> gradient;
};

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::size_t worst_coordinate = 0;
  double analytic_at_worst = 0.0;
  double numeric_at_worst = 0.0;
  std::size_t coordinates = 0;
};

// Max over coordinates of |analytic - central difference| / max(1, |analytic|).
// step must lie in [1e-5, 1e-3].
GradCheckReport grad_check(const Objective& objective, std::span<const double> x,
                           double step);

}  // namespace sgrl

#endif  // SGRL_NUMERIC_H_
