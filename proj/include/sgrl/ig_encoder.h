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

// Inductive GNN encoder.
//
// A node's initial representation h0 is the concatenation of one learned
// f-wide vector per attribute, chosen by the attribute's state (present,
// absent, masked), optionally preceded by a fixed prefix (the detection
// encoder prepends frozen structural representations). Two message passing
// layers follow. Each layer:
//
//   agg = mean(nbrs) | max(nbrs) | sum(nbrs)        (zero for isolated nodes)
//   g   = W_g agg + b_g
//   s   = W_s h0 + b_s                               (always the initial h0)
//   e   = relu(g | s)
//   q   = relu(W_q e + b_q)
//   h   = q / max(|q|, 1e-12)
//
// The score head maps h through two affine maps and a sigmoid.
//
// All kernels are templates over the scalar type; float is used for training
// and double for gradient verification.

#ifndef SGRL_IG_ENCODER_H_
#define SGRL_IG_ENCODER_H_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgrl/graph.h"
#include "sgrl/numeric.h"
#include "sgrl/rng.h"
#include "sgrl/tensor.h"
#include "sgrl/training.h"

namespace sgrl {

enum class AttributeState : int { kPresent = 0, kAbsent = 1, kMasked = 2 };
inline constexpr int kAttributeStates = 3;

// Bitmask over attributes that are in the masked state for one input row.
using AttributeMask = std::uint8_t;

struct EncoderConfig {
  int attribute_width = 8;  // f: width of one attribute vector
  int hidden_width = 32;    // f1
  int input_width = 56;     // f2: width of h0 (prefix + 7 f)
  int layers = 2;
  double threshold = 0.5;   // rho

  int prefix_width() const { return input_width - kNumAttributes * attribute_width; }
  void validate() const;
};

template <typename T>
struct AttributeTableT {
  BasicTensor<T> vectors;  // [7, 3, f]

  int width() const { return static_cast<int>(vectors.dim(2)); }
  const T* slot(int attribute, AttributeState state) const {
    return vectors.data() + (attribute * kAttributeStates + static_cast<int>(state)) * width();
  }
  T* slot(int attribute, AttributeState state) {
    return vectors.data() + (attribute * kAttributeStates + static_cast<int>(state)) * width();
  }

  template <class F> void visit(F&& f) { f("table", vectors); }
  template <class F> void visit(F&& f) const { f("table", vectors); }
};

template <typename T>
struct GnnLayerParamsT {
  BasicTensor<T> agg_weight;   // [f1, 3 d_in]
  BasicTensor<T> agg_bias;     // [f1]
  BasicTensor<T> self_weight;  // [f1, f2]
  BasicTensor<T> self_bias;    // [f1]
  BasicTensor<T> out_weight;   // [f1, 2 f1]
  BasicTensor<T> out_bias;     // [f1]

  template <class F> void visit(F&& f) { visit_all(*this, f); }
  template <class F> void visit(F&& f) const { visit_all(*this, f); }
  template <class Self, class F>
  static void visit_all(Self& s, F& f) {
    f("agg_weight", s.agg_weight);
    f("agg_bias", s.agg_bias);
    f("self_weight", s.self_weight);
    f("self_bias", s.self_bias);
    f("out_weight", s.out_weight);
    f("out_bias", s.out_bias);
  }
};

template <typename T>
struct GnnStackT {
  std::array<GnnLayerParamsT<T>, 2> layers;

  template <class F> void visit(F&& f) { visit_all(*this, f); }
  template <class F> void visit(F&& f) const { visit_all(*this, f); }
  template <class Self, class F>
  static void visit_all(Self& s, F& f) {
    for (std::size_t t = 0; t < s.layers.size(); ++t) {
      const std::string prefix = "layer" + std::to_string(t + 1) + ".";
      s.layers[t].visit([&](const std::string& name, auto& x) { f(prefix + name, x); });
    }
  }
};

// Suspicious-score head: sigmoid(w3 . (W2 (W1 h + b1) + b2) + b3).
template <typename T>
struct ScoreHeadT {
  BasicTensor<T> w1;  // [2 f1, f1]
  BasicTensor<T> b1;  // [2 f1]
  BasicTensor<T> w2;  // [f1, 2 f1]
  BasicTensor<T> b2;  // [f1]
  BasicTensor<T> w3;  // [f1]
  BasicTensor<T> b3;  // [1]

  template <class F> void visit(F&& f) { visit_all(*this, f); }
  template <class F> void visit(F&& f) const { visit_all(*this, f); }
  template <class Self, class F>
  static void visit_all(Self& s, F& f) {
    f("head.w1", s.w1);
    f("head.b1", s.b1);
    f("head.w2", s.w2);
    f("head.b2", s.b2);
    f("head.w3", s.w3);
    f("head.b3", s.b3);
  }
};

// Every trainable tensor of one encoder except the attribute table.
template <typename T>
struct EncoderParamsT {
  GnnStackT<T> stack;
  ScoreHeadT<T> head;

  template <class F> void visit(F&& f) { stack.visit(f); head.visit(f); }
  template <class F> void visit(F&& f) const { stack.visit(f); head.visit(f); }
};

using AttributeTable = AttributeTableT<float>;
using GnnLayerParams = GnnLayerParamsT<float>;
using GnnStack = GnnStackT<float>;
using ScoreHead = ScoreHeadT<float>;
using EncoderParams = EncoderParamsT<float>;

// Zero-valued copy with identical shapes (gradient accumulators).
template <typename Params>
Params zeros_like(const Params& p) {
  Params z = p;
  z.visit([](const std::string&, auto& t) { t.fill(0); });
  return z;
}

// Same parameters in another scalar type (float <-> double).
template <typename To, template <typename> class P, typename From>
P<To> cast_params(const P<From>& p) {
  std::vector<BasicTensor<To>> tensors;
  p.visit([&](const std::string&, const auto& t) { tensors.push_back(t.template cast<To>()); });
  P<To> out;
  std::size_t k = 0;
  out.visit([&](const std::string&, auto& t) { t = tensors[k++]; });
  return out;
}

// ---- Construction -------------------------------------------------------

AttributeTable init_attribute_table(int width, Rng& rng);
GnnStack init_gnn_stack(const EncoderConfig& config, Rng& rng);
ScoreHead init_score_head(int hidden_width, Rng& rng);
EncoderParams init_encoder(const EncoderConfig& config, Rng& rng);

// Weight matrices from N(0, 1/fan_in), biases zero.
template <typename T = float>
BasicTensor<T> init_weight(std::size_t rows, std::size_t cols, Rng& rng);

// Closed-form trainable-parameter count for an IG-Encoder with l layers.
long long param_count(int layers, int hidden_width, int input_width);

// Exact number of scalars in a constructed encoder (stack + head).
std::size_t trainable_parameter_count(const EncoderParams& params);

// ---- Computation plan ---------------------------------------------------

// Which rows each layer computes and where their inputs come from. Layer-1
// rows read initial representations (rows of X0); layer-2 rows read X0 for
// the self-connection and layer-1 rows for aggregation. Neighbor lists are
// kept in ascending node order so pooling is reproducible.
struct EncoderPlan {
  std::vector<std::uint32_t> l1_self;
  std::vector<std::size_t> l1_offsets{0};
  std::vector<std::uint32_t> l1_neighbors;
  std::vector<std::uint32_t> l2_self;
  std::vector<std::size_t> l2_offsets{0};
  std::vector<std::uint32_t> l2_neighbors;
  std::size_t input_rows = 0;

  std::size_t l1_rows() const { return l1_self.size(); }
  std::size_t l2_rows() const { return l2_self.size(); }
};

// Every node, X0 row i = node i, output row i = node i.
EncoderPlan full_plan(const Graph& g);

// Output row k = targets[k]; only the receptive field is computed.
EncoderPlan targeted_plan(const Graph& g, std::span<const NodeId> targets);

// Per-target masked views. X0 holds 2N rows: rows [0, N) are the visible
// representations and rows [N, 2N) the masked ones. In the view of target i,
// every reference to node i (its self-connection and its appearance in the
// neighborhoods of its neighbors) reads the masked row; all other nodes read
// visible rows. Output row k = targets[k].
EncoderPlan masked_view_plan(const Graph& g, std::span<const NodeId> targets);

// ---- Initial representations --------------------------------------------

// Input row description: attribute bits plus the attributes to show masked.
struct InputRows {
  std::vector<AttributeBits> bits;
  std::vector<AttributeMask> masks;
};

InputRows visible_rows(const Graph& g);
// Visible rows followed by the same rows with `mask` applied (2N rows).
InputRows visible_and_masked_rows(const Graph& g, AttributeMask mask);

// Concatenation of attribute vectors for a single node (width 7 f).
Tensor encode_attributes(const AttributeTable& table, AttributeBits a,
                         std::span<const int> masked_attributes = {});

template <typename T>
RowMatrix<T> encode_rows(const AttributeTableT<T>& table, const InputRows& rows,
                         const RowMatrix<T>* prefix);

// Accumulates d(table) from d(X0); prefix columns are skipped.
template <typename T>
void encode_rows_backward(const RowMatrix<T>& d_x0, const InputRows& rows,
                          int prefix_width, AttributeTableT<T>& grad);

// ---- Layers -------------------------------------------------------------

template <typename T>
struct LayerCache {
  RowMatrix<T> agg;                   // rows x 3d
  std::vector<std::uint32_t> argmax;  // rows x d, input row of the max
  RowMatrix<T> self_in;               // rows x f2 (gathered h0)
  RowMatrix<T> pre_e;                 // rows x 2 f1
  RowMatrix<T> e;
  RowMatrix<T> pre_q;                 // rows x f1
  RowMatrix<T> h;
  std::vector<T> norm;
};

template <typename T>
struct StackCache {
  LayerCache<T> l1;
  LayerCache<T> l2;
};

// mean | max | sum over the listed rows of `input`, in list order.
Tensor aggregate_neighbors(const Tensor& h_prev, std::span<const NodeId> neighbors);

template <typename T>
void layer_forward(const GnnLayerParamsT<T>& p, const RowMatrix<T>& input,
                   const RowMatrix<T>& x0, std::span<const std::uint32_t> self_rows,
                   std::span<const std::size_t> offsets,
                   std::span<const std::uint32_t> neighbors, LayerCache<T>& cache);

// Returns d(input); d(x0) from the self-connection is accumulated into d_x0.
template <typename T>
RowMatrix<T> layer_backward(const GnnLayerParamsT<T>& p, const LayerCache<T>& cache,
                            const RowMatrix<T>& d_h, std::size_t input_rows,
                            std::span<const std::uint32_t> self_rows,
                            std::span<const std::size_t> offsets,
                            std::span<const std::uint32_t> neighbors,
                            RowMatrix<T>& d_x0, GnnLayerParamsT<T>& grad);

// Single layer over a whole graph (h_prev and h0 have one row per node).
Tensor gnn_layer(const GnnLayerParams& params, const Tensor& h_prev, const Tensor& h0,
                 const Graph& g);

template <typename T>
const RowMatrix<T>& stack_forward(const GnnStackT<T>& stack, const EncoderPlan& plan,
                                  const RowMatrix<T>& x0, StackCache<T>& cache);

// Returns d(X0).
template <typename T>
RowMatrix<T> stack_backward(const GnnStackT<T>& stack, const EncoderPlan& plan,
                            const RowMatrix<T>& x0, const StackCache<T>& cache,
                            const RowMatrix<T>& d_out, GnnStackT<T>& grad);

// ---- Score head ---------------------------------------------------------

template <typename T>
struct HeadCache {
  RowMatrix<T> z1;
  RowMatrix<T> z2;
  ColVector<T> logit;
  ColVector<T> prob;
};

template <typename T>
const ColVector<T>& head_forward(const ScoreHeadT<T>& head, const RowMatrix<T>& h,
                                 HeadCache<T>& cache);

// d_logit per row -> d(h), accumulating head gradients.
template <typename T>
RowMatrix<T> head_backward(const ScoreHeadT<T>& head, const RowMatrix<T>& h,
                           const HeadCache<T>& cache, const ColVector<T>& d_logit,
                           ScoreHeadT<T>& grad);

// ---- Whole encoder ------------------------------------------------------

struct IgOutput {
  Tensor representations;  // [N, f1]
  Tensor scores;           // [N]
};

// Forward over every node of g. prefix (optional) is [N, prefix_width].
IgOutput ig_forward(const EncoderParams& params, const AttributeTable& table,
                    const Graph& g, const Tensor* prefix = nullptr);

// Mean BCE over `targets` and its gradient, for any scalar type. Used by
// training (float) and gradient verification (double).
template <typename T>
T ig_loss(const EncoderParamsT<T>& params, const AttributeTableT<T>& table,
          const EncoderPlan& plan, const InputRows& rows, const RowMatrix<T>* prefix,
          std::span<const Label> target_labels, EncoderParamsT<T>* grad_params,
          AttributeTableT<T>* grad_table);

// ---- Training -----------------------------------------------------------

struct IgModel {
  EncoderConfig config;
  AttributeTable table;
  EncoderParams params;
  TrainHistory history;
};

// Probe: receives the model after an epoch and returns a holdout AUC.
using IgProbe = std::function<double(const IgModel&)>;

// Adam on mean BCE over `train_nodes` (labels from g). Requires both classes.
IgModel ig_train(const Graph& g, std::span<const NodeId> train_nodes,
                 const EncoderConfig& config, const TrainOptions& options,
                 const Tensor* prefix = nullptr, const IgProbe& probe = nullptr);

}  // namespace sgrl

#endif  // SGRL_IG_ENCODER_H_
