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

// Self-supervised attribute encoder. The two attributes that a boosted-tree
// label model finds most important become pseudo labels; the encoder learns
// to predict them for each node from a view in which that node's two
// pseudo-label attributes are masked.

#ifndef SGRL_SSA_H_
#define SGRL_SSA_H_

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sgrl/gbdt.h"
#include "sgrl/graph.h"
#include "sgrl/ig_encoder.h"
#include "sgrl/training.h"

namespace sgrl {

struct PseudoLabelSpec {
  std::array<int, 2> indices{0, 1};  // ascending
  std::array<double, kNumAttributes> importance{};

  AttributeMask mask() const {
    return static_cast<AttributeMask>((1u << indices[0]) | (1u << indices[1]));
  }
  friend bool operator==(const PseudoLabelSpec&, const PseudoLabelSpec&) = default;
};

// Two largest scores; ties go to the lower index.
PseudoLabelSpec select_pseudo_labels(std::span<const double> importance);
// Spec from explicit indices (used when no labels are available).
PseudoLabelSpec make_pseudo_label_spec(int a, int b);

// r = sigmoid(W2 (W1 h + b1) + b2).
template <typename T>
struct SsaHeadT {
  BasicTensor<T> w1;  // [f1/2, f1]
  BasicTensor<T> b1;  // [f1/2]
  BasicTensor<T> w2;  // [2, f1/2]
  BasicTensor<T> b2;  // [2]

  template <class F> void visit(F&& f) { visit_all(*this, f); }
  template <class F> void visit(F&& f) const { visit_all(*this, f); }
  template <class Self, class F>
  static void visit_all(Self& s, F& f) {
    f("head.w1", s.w1);
    f("head.b1", s.b1);
    f("head.w2", s.w2);
    f("head.b2", s.b2);
  }
};

using SsaHead = SsaHeadT<float>;

SsaHead init_ssa_head(int hidden_width, Rng& rng);

struct SsaModel {
  EncoderConfig config;
  AttributeTable table;
  GnnStack stack;
  SsaHead head;
  PseudoLabelSpec spec;
  TrainHistory history;

  template <class F> void visit(F&& f) {
    table.visit(f);
    stack.visit(f);
    head.visit(f);
  }
  template <class F> void visit(F&& f) const {
    table.visit(f);
    stack.visit(f);
    head.visit(f);
  }
};

// Pseudo-label predictions [targets, 2] from each target's masked view.
Tensor ssa_predict(const SsaModel& model, const Graph& g, std::span<const NodeId> targets);
// All nodes.
Tensor ssa_predict(const SsaModel& model, const Graph& g);
// A single node.
std::array<double, 2> ssa_forward_one(const SsaModel& model, const Graph& g, NodeId i);

// -1/2 sum_i sum_j BCE(r_ij, y_ij).
double gmml_loss(const Tensor& predictions, std::span<const std::array<int, 2>> labels);

// Pseudo labels y_ij = a_i[spec.indices[j]].
std::vector<std::array<int, 2>> pseudo_labels(const Graph& g, const PseudoLabelSpec& spec);

// GMML loss over all nodes for any scalar type, with optional gradients.
template <typename T>
T ssa_loss(const GnnStackT<T>& stack, const AttributeTableT<T>& table,
           const SsaHeadT<T>& head, const EncoderPlan& plan, const InputRows& rows,
           std::span<const std::array<int, 2>> labels, GnnStackT<T>* grad_stack,
           AttributeTableT<T>* grad_table, SsaHeadT<T>* grad_head);

// a with the two spec attributes set to (r >= threshold).
AttributeBits replace_attributes(AttributeBits a, const PseudoLabelSpec& spec,
                                 std::array<double, 2> r, double threshold);
std::vector<AttributeBits> replace_all_attributes(const Graph& g, const PseudoLabelSpec& spec,
                                                  const Tensor& predictions, double threshold);

// Fits the importance model on labeled attribute vectors and selects the spec.
// valid_nodes (optional) drive the model's early stopping.
PseudoLabelSpec fit_pseudo_labels(const Graph& g, std::span<const NodeId> train_nodes,
                                  std::span<const NodeId> valid_nodes,
                                  const GbdtConfig& config, std::uint64_t seed);

using SsaProbe = std::function<double(const SsaModel&)>;

// GMML training over every node of g with a fixed spec.
SsaModel train_ssa(const Graph& g, const PseudoLabelSpec& spec, const EncoderConfig& config,
                   const TrainOptions& options, const SsaProbe& probe = nullptr);

}  // namespace sgrl

#endif  // SGRL_SSA_H_
