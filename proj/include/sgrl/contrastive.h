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

// Contrastive structural encoders. A node representation h_i is contrasted
// with the mean-pooled summary s_i of its k-hop subgraph: the discriminator
// should score <h_i, s_i> high and <h_i', s_i> low for a sampled negative i'.
//
//   SSS: every node is a positive, negatives are uniform over other nodes.
//   SS:  labeled BMAs are positives, negatives are labeled non-BMAs.

#ifndef SGRL_CONTRASTIVE_H_
#define SGRL_CONTRASTIVE_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sgrl/graph.h"
#include "sgrl/ig_encoder.h"
#include "sgrl/rng.h"
#include "sgrl/tensor.h"
#include "sgrl/training.h"

namespace sgrl {

enum class ContrastiveMode { kSss, kSs };

const char* mode_name(ContrastiveMode mode);

// D(h, s) = sigmoid(w2 . act(W1 (h | s) + b1) + b2).
template <typename T>
struct DiscriminatorParamsT {
  BasicTensor<T> w1;  // [f1, 2 f1]
  BasicTensor<T> b1;  // [f1]
  BasicTensor<T> w2;  // [f1]
  BasicTensor<T> b2;  // [1]

  template <class F> void visit(F&& f) { visit_all(*this, f); }
  template <class F> void visit(F&& f) const { visit_all(*this, f); }
  template <class Self, class F>
  static void visit_all(Self& s, F& f) {
    f("disc.w1", s.w1);
    f("disc.b1", s.b1);
    f("disc.w2", s.w2);
    f("disc.b2", s.b2);
  }
};

using DiscriminatorParams = DiscriminatorParamsT<float>;

DiscriminatorParams init_discriminator(int hidden_width, Rng& rng);

struct ContrastPair {
  NodeId positive;
  NodeId negative;
};

// One epoch of pairs. The subgraph of a pair is the k-hop set of `positive`.
struct PairBatch {
  std::vector<ContrastPair> pairs;
  int epoch = 0;
};

// Mean of the rows of h over `members`.
Tensor readout(const Tensor& h, std::span<const NodeId> members);

// Hidden-layer activation of the discriminator. With kLinear the logit is
// affine in h and s, which cannot separate pairs whose negatives share the
// positives' marginal distribution (the SSS setting).
enum class DiscriminatorActivation { kLinear, kRelu };

const char* activation_name(DiscriminatorActivation activation);
DiscriminatorActivation parse_activation(std::string_view name);

double discriminate(const DiscriminatorParams& d, const Tensor& h, const Tensor& s,
                    DiscriminatorActivation activation = DiscriminatorActivation::kRelu);

// One pair per node, negative uniform over the other nodes.
PairBatch sample_pairs_sss(const Graph& g, Rng& rng);
// One pair per node of `positives` (all must be unique, in range). Negatives
// uniform over all other nodes.
PairBatch sample_pairs_sss(const Graph& g, std::span<const NodeId> positives, Rng& rng);
// One pair per labeled BMA, negative uniform over labeled non-BMAs.
PairBatch sample_pairs_ss(const Graph& g, std::span<const Label> labels, Rng& rng);

// -1/N_pos * sum [ln D(h_i, s_i) + ln(1 - D(h_i', s_i))].
double mi_loss(const DiscriminatorParams& d, const Tensor& h, const SubgraphIndex& index,
               const PairBatch& batch,
               DiscriminatorActivation activation = DiscriminatorActivation::kRelu);
// Same formula from precomputed discriminator outputs.
double mi_loss_from_probabilities(std::span<const double> positive,
                                  std::span<const double> negative);

// Batched discriminator over all pairs of a batch.
template <typename T>
struct PairCache {
  RowMatrix<T> summary;   // pairs x f1
  RowMatrix<T> input_pos;  // pairs x 2 f1
  RowMatrix<T> input_neg;
  RowMatrix<T> hidden_pos;
  RowMatrix<T> hidden_neg;
  ColVector<T> prob_pos;
  ColVector<T> prob_neg;
};

// Loss of the batch given final representations h (one row per node);
// with d_h non-null, accumulates d(loss)/d(h) and discriminator gradients.
template <typename T>
T pair_loss(const DiscriminatorParamsT<T>& d, DiscriminatorActivation activation,
            const RowMatrix<T>& h, const SubgraphIndex& index, const PairBatch& batch,
            RowMatrix<T>* d_h,
            DiscriminatorParamsT<T>* grad, PairCache<T>* cache_out = nullptr);

// Encoder stack + attribute table + discriminator loss end to end.
template <typename T>
T contrastive_loss(const GnnStackT<T>& stack, const AttributeTableT<T>& table,
                   const DiscriminatorParamsT<T>& d, DiscriminatorActivation activation,
                   const Graph& g, const SubgraphIndex& index, const PairBatch& batch,
                   GnnStackT<T>* grad_stack, AttributeTableT<T>* grad_table,
                   DiscriminatorParamsT<T>* grad_d);

struct ContrastiveModel {
  ContrastiveMode mode = ContrastiveMode::kSss;
  DiscriminatorActivation activation = DiscriminatorActivation::kRelu;
  EncoderConfig config;
  AttributeTable table;
  GnnStack stack;
  DiscriminatorParams disc;
  TrainHistory history;

  template <class F> void visit(F&& f) {
    table.visit(f);
    stack.visit(f);
    disc.visit(f);
  }
  template <class F> void visit(F&& f) const {
    table.visit(f);
    stack.visit(f);
    disc.visit(f);
  }
};

using ContrastiveProbe = std::function<double(const ContrastiveModel&)>;

struct ContrastiveOptions {
  TrainOptions train;
  DiscriminatorActivation activation = DiscriminatorActivation::kRelu;
  // SSS only: restrict positives to these nodes (empty = all nodes).
  std::vector<NodeId> positives;
};

// Per-epoch pair stream: identical for the same (seed, mode, epoch).
PairBatch epoch_pairs(ContrastiveMode mode, const Graph& g, std::span<const Label> labels,
                      std::span<const NodeId> positives, std::uint64_t seed, int epoch);

// SS mode requires `labels` (one per node, kUnlabeled allowed) with both classes.
ContrastiveModel train_contrastive(ContrastiveMode mode, const Graph& g,
                                   const SubgraphIndex& index, std::span<const Label> labels,
                                   const EncoderConfig& config,
                                   const ContrastiveOptions& options,
                                   const ContrastiveProbe& probe = nullptr);

// Final representations [N, f1] of every node.
Tensor encode_nodes(const GnnStack& stack, const AttributeTable& table, const Graph& g);

// Fraction of correct decisions (D > 0.5 on positives, D <= 0.5 on negatives).
double discriminator_accuracy(const ContrastiveModel& model, const Graph& g,
                              const SubgraphIndex& index, const PairBatch& batch);

}  // namespace sgrl

#endif  // SGRL_CONTRASTIVE_H_
