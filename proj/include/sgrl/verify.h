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

// Finite-difference verification of every training loss. Each check builds a
// small random graph, random parameters, and compares the hand-derived
// gradient with a 64-bit central difference.

#ifndef SGRL_VERIFY_H_
#define SGRL_VERIFY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "sgrl/contrastive.h"
#include "sgrl/graph.h"
#include "sgrl/numeric.h"

namespace sgrl {

struct GradCheckOptions {
  std::size_t nodes = 10;
  double edge_probability = 0.3;
  int attribute_width = 2;
  int hidden_width = 4;
  double step = 1e-5;
  DiscriminatorActivation activation = DiscriminatorActivation::kRelu;
};

// Graph used by the checks: Erdos-Renyi with random attributes, alternating labels.
Graph gradcheck_graph(const GradCheckOptions& options, std::uint64_t seed);

GradCheckReport check_ig_gradients(const GradCheckOptions& options, std::uint64_t seed);
// IG loss with a fixed prefix in front of the attribute encoding (detector shape).
GradCheckReport check_detector_gradients(const GradCheckOptions& options, std::uint64_t seed);
GradCheckReport check_sss_gradients(const GradCheckOptions& options, std::uint64_t seed);
GradCheckReport check_ss_gradients(const GradCheckOptions& options, std::uint64_t seed);
GradCheckReport check_ssa_gradients(const GradCheckOptions& options, std::uint64_t seed);

struct NamedGradCheck {
  std::string loss;
  std::uint64_t seed;
  GradCheckReport report;
};

// All checks over seeds 1..seeds.
std::vector<NamedGradCheck> check_all_gradients(const GradCheckOptions& options, int seeds);

}  // namespace sgrl

#endif  // SGRL_VERIFY_H_
