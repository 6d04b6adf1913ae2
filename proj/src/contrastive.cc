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

#include "sgrl/contrastive.h"

#include <cmath>
#include <string>

#include "sgrl/numeric.h"

namespace sgrl {

const char* mode_name(ContrastiveMode mode) {
  return mode == ContrastiveMode::kSss ? "sss" : "ss";
}

DiscriminatorParams init_discriminator(int hidden_width, Rng& rng) {
  const std::size_t f1 = hidden_width;
  DiscriminatorParams d;
  d.w1 = init_weight(f1, 2 * f1, rng);
  d.b1 = Tensor({f1});
  const Tensor w2 = init_weight(1, f1, rng);
  d.w2 = Tensor({f1}, std::vector<float>(w2.values().begin(), w2.values().end()));
  d.b2 = Tensor({1});
  return d;
}

Tensor readout(const Tensor& h, std::span<const NodeId> members) {
  check(!members.empty(), ErrorCode::kConfig, "readout: empty subgraph");
  const std::size_t d = h.cols();
  std::vector<double> acc(d, 0.0);
  for (NodeId j : members) {
    check(j < h.rows(), ErrorCode::kOutOfRange, "readout: member out of range");
    for (std::size_t k = 0; k < d; ++k) acc[k] += h.at(j, k);
  }
  Tensor out({d});
  for (std::size_t k = 0; k < d; ++k) {
    out[k] = static_cast<float>(acc[k] / static_cast<double>(members.size()));
  }
  return out;
}

const char* activation_name(DiscriminatorActivation activation) {
  return activation == DiscriminatorActivation::kRelu ? "relu" : "linear";
}

DiscriminatorActivation parse_activation(std::string_view name) {
  if (name == "relu") return DiscriminatorActivation::kRelu;
  if (name == "linear") return DiscriminatorActivation::kLinear;
  fail(ErrorCode::kConfig, "unknown discriminator activation " + std::string(name));
}

double discriminate(const DiscriminatorParams& d, const Tensor& h, const Tensor& s,
                    DiscriminatorActivation activation) {
  check(h.size() == s.size() && d.w1.dim(1) == 2 * h.size(), ErrorCode::kDimension,
        "discriminate: h " + shape_string(h.dims()) + " and s " + shape_string(s.dims()) +
            " do not match discriminator " + shape_string(d.w1.dims()));
  Tensor hs({2 * h.size()});
  std::copy(h.values().begin(), h.values().end(), hs.data());
  std::copy(s.values().begin(), s.values().end(), hs.data() + h.size());
  Tensor hidden = affine(d.w1, d.b1, hs);
  if (activation == DiscriminatorActivation::kRelu) hidden = relu(hidden);
  double logit = d.b2[0];
  for (std::size_t k = 0; k < hidden.size(); ++k) logit += double(d.w2[k]) * hidden[k];
  return sigmoid(logit);
}

// ---- Pair sampling ------------------------------------------------------

PairBatch sample_pairs_sss(const Graph& g, Rng& rng) {
  std::vector<NodeId> all(g.node_count());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<NodeId>(i);
  return sample_pairs_sss(g, all, rng);
}

PairBatch sample_pairs_sss(const Graph& g, std::span<const NodeId> positives, Rng& rng) {
  const std::size_t n = g.node_count();
  check(n >= 2, ErrorCode::kConfig, "SSS pair sampling needs at least 2 nodes");
  PairBatch batch;
  batch.pairs.reserve(positives.size());
  for (NodeId i : positives) {
    check(i < n, ErrorCode::kOutOfRange, "positive node out of range");
    NodeId j = static_cast<NodeId>(uniform_index(rng, n - 1));
    if (j >= i) ++j;
    batch.pairs.push_back({i, j});
  }
  return batch;
}

PairBatch sample_pairs_ss(const Graph& g, std::span<const Label> labels, Rng& rng) {
  check(labels.size() == g.node_count(), ErrorCode::kDimension,
        "SS pair sampling: one label per node required");
  std::vector<NodeId> bma;
  std::vector<NodeId> normal;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) bma.push_back(static_cast<NodeId>(i));
    if (labels[i] == 0) normal.push_back(static_cast<NodeId>(i));
  }
  check(!bma.empty() && !normal.empty(), ErrorCode::kConfig,
        "SS pair sampling needs labeled BMA and non-BMA nodes");
  PairBatch batch;
  batch.pairs.reserve(bma.size());
  for (NodeId i : bma) batch.pairs.push_back({i, normal[uniform_index(rng, normal.size())]});
  return batch;
}

PairBatch epoch_pairs(ContrastiveMode mode, const Graph& g, std::span<const Label> labels,
                      std::span<const NodeId> positives, std::uint64_t seed, int epoch) {
  Rng rng(derive_seed(seed, std::string(mode_name(mode)) + ".pairs." + std::to_string(epoch)));
  PairBatch batch;
  if (mode == ContrastiveMode::kSs) {
    batch = sample_pairs_ss(g, labels, rng);
  } else if (positives.empty()) {
    batch = sample_pairs_sss(g, rng);
  } else {
    batch = sample_pairs_sss(g, positives, rng);
  }
  batch.epoch = epoch;
  return batch;
}

// ---- Loss ---------------------------------------------------------------

double mi_loss_from_probabilities(std::span<const double> positive,
                                  std::span<const double> negative) {
  check(positive.size() == negative.size() && !positive.empty(), ErrorCode::kDimension,
        "mi_loss: one negative per positive required");
  double total = 0.0;
  for (std::size_t p = 0; p < positive.size(); ++p) {
    total += bce(positive[p], 1.0) + bce(negative[p], 0.0);
  }
  return total / static_cast<double>(positive.size());
}

template <typename T>
T pair_loss(const DiscriminatorParamsT<T>& d, DiscriminatorActivation activation,
            const RowMatrix<T>& h, const SubgraphIndex& index, const PairBatch& batch,
            RowMatrix<T>* d_h,
            DiscriminatorParamsT<T>* grad, PairCache<T>* cache_out) {
  const Eigen::Index pairs = static_cast<Eigen::Index>(batch.pairs.size());
  check(pairs > 0, ErrorCode::kConfig, "mi_loss: empty pair batch");
  const Eigen::Index f1 = h.cols();
  check(d.w1.dim(1) == static_cast<std::size_t>(2 * f1), ErrorCode::kDimension,
        "mi_loss: discriminator " + shape_string(d.w1.dims()) +
            " does not match representation width " + std::to_string(f1));
  PairCache<T> local;
  PairCache<T>& c = cache_out ? *cache_out : local;

  c.summary.setZero(pairs, f1);
  for (Eigen::Index p = 0; p < pairs; ++p) {
    const auto members = index[batch.pairs[p].positive];
    for (NodeId j : members) c.summary.row(p) += h.row(j);
    c.summary.row(p) /= static_cast<T>(members.size());
  }
  c.input_pos.resize(pairs, 2 * f1);
  c.input_neg.resize(pairs, 2 * f1);
  for (Eigen::Index p = 0; p < pairs; ++p) {
    c.input_pos.row(p).head(f1) = h.row(batch.pairs[p].positive);
    c.input_neg.row(p).head(f1) = h.row(batch.pairs[p].negative);
  }
  c.input_pos.rightCols(f1) = c.summary;
  c.input_neg.rightCols(f1) = c.summary;

  const auto w1 = d.w1.mat();
  c.hidden_pos.noalias() = c.input_pos * w1.transpose();
  c.hidden_pos.rowwise() += d.b1.vec().transpose();
  c.hidden_neg.noalias() = c.input_neg * w1.transpose();
  c.hidden_neg.rowwise() += d.b1.vec().transpose();
  const bool rectify = activation == DiscriminatorActivation::kRelu;
  if (rectify) {
    c.hidden_pos = c.hidden_pos.cwiseMax(T(0));
    c.hidden_neg = c.hidden_neg.cwiseMax(T(0));
  }
  ColVector<T> logit_pos = c.hidden_pos * d.w2.vec();
  ColVector<T> logit_neg = c.hidden_neg * d.w2.vec();
  c.prob_pos.resize(pairs);
  c.prob_neg.resize(pairs);
  T loss = 0;
  for (Eigen::Index p = 0; p < pairs; ++p) {
    c.prob_pos[p] = sigmoid(logit_pos[p] + d.b2[0]);
    c.prob_neg[p] = sigmoid(logit_neg[p] + d.b2[0]);
    loss += bce(c.prob_pos[p], T(1)) + bce(c.prob_neg[p], T(0));
  }
  const T inv = T(1) / static_cast<T>(pairs);
  loss *= inv;
  if (d_h == nullptr) return loss;

  ColVector<T> dl_pos(pairs);
  ColVector<T> dl_neg(pairs);
  for (Eigen::Index p = 0; p < pairs; ++p) {
    dl_pos[p] = bce_logit_grad(c.prob_pos[p], T(1)) * inv;
    dl_neg[p] = bce_logit_grad(c.prob_neg[p], T(0)) * inv;
  }
  grad->w2.vec().noalias() += c.hidden_pos.transpose() * dl_pos;
  grad->w2.vec().noalias() += c.hidden_neg.transpose() * dl_neg;
  grad->b2[0] += dl_pos.sum() + dl_neg.sum();
  RowMatrix<T> dh_pos = dl_pos * d.w2.vec().transpose();
  RowMatrix<T> dh_neg = dl_neg * d.w2.vec().transpose();
  if (rectify) {
    dh_pos = (c.hidden_pos.array() > T(0)).select(dh_pos, T(0));
    dh_neg = (c.hidden_neg.array() > T(0)).select(dh_neg, T(0));
  }
  grad->w1.mat().noalias() += dh_pos.transpose() * c.input_pos;
  grad->w1.mat().noalias() += dh_neg.transpose() * c.input_neg;
  grad->b1.vec() += dh_pos.colwise().sum().transpose();
  grad->b1.vec() += dh_neg.colwise().sum().transpose();
  const RowMatrix<T> din_pos = dh_pos * w1;
  const RowMatrix<T> din_neg = dh_neg * w1;
  for (Eigen::Index p = 0; p < pairs; ++p) {
    const ContrastPair& pair = batch.pairs[p];
    d_h->row(pair.positive) += din_pos.row(p).head(f1);
    d_h->row(pair.negative) += din_neg.row(p).head(f1);
    const auto members = index[pair.positive];
    const T share = T(1) / static_cast<T>(members.size());
    for (NodeId j : members) {
      d_h->row(j) += share * (din_pos.row(p).tail(f1) + din_neg.row(p).tail(f1));
    }
  }
  return loss;
}

double mi_loss(const DiscriminatorParams& d, const Tensor& h, const SubgraphIndex& index,
               const PairBatch& batch, DiscriminatorActivation activation) {
  const RowMatrix<double> hd = h.mat().cast<double>();
  const DiscriminatorParamsT<double> dd = cast_params<double>(d);
  return pair_loss<double>(dd, activation, hd, index, batch, nullptr, nullptr);
}

template <typename T>
T contrastive_loss(const GnnStackT<T>& stack, const AttributeTableT<T>& table,
                   const DiscriminatorParamsT<T>& d, DiscriminatorActivation activation,
                   const Graph& g, const SubgraphIndex& index, const PairBatch& batch,
                   GnnStackT<T>* grad_stack, AttributeTableT<T>* grad_table,
                   DiscriminatorParamsT<T>* grad_d) {
  const EncoderPlan plan = full_plan(g);
  const InputRows rows = visible_rows(g);
  const RowMatrix<T> x0 = encode_rows<T>(table, rows, nullptr);
  StackCache<T> cache;
  const RowMatrix<T>& h = stack_forward(stack, plan, x0, cache);
  if (grad_stack == nullptr) return pair_loss<T>(d, activation, h, index, batch, nullptr, nullptr);
  RowMatrix<T> d_h = RowMatrix<T>::Zero(h.rows(), h.cols());
  const T loss = pair_loss<T>(d, activation, h, index, batch, &d_h, grad_d);
  const RowMatrix<T> d_x0 = stack_backward(stack, plan, x0, cache, d_h, *grad_stack);
  if (grad_table) encode_rows_backward(d_x0, rows, 0, *grad_table);
  return loss;
}

// ---- Training -----------------------------------------------------------

Tensor encode_nodes(const GnnStack& stack, const AttributeTable& table, const Graph& g) {
  const EncoderPlan plan = full_plan(g);
  const RowMatrix<float> x0 = encode_rows<float>(table, visible_rows(g), nullptr);
  StackCache<float> cache;
  const RowMatrix<float>& h = stack_forward(stack, plan, x0, cache);
  Tensor out({static_cast<std::size_t>(h.rows()), static_cast<std::size_t>(h.cols())});
  out.mat() = h;
  return out;
}

double discriminator_accuracy(const ContrastiveModel& model, const Graph& g,
                              const SubgraphIndex& index, const PairBatch& batch) {
  const Tensor h = encode_nodes(model.stack, model.table, g);
  const RowMatrix<float> hm = h.mat();
  PairCache<float> cache;
  pair_loss<float>(model.disc, model.activation, hm, index, batch, nullptr, nullptr, &cache);
  std::size_t correct = 0;
  for (Eigen::Index p = 0; p < cache.prob_pos.size(); ++p) {
    correct += cache.prob_pos[p] > 0.5f;
    correct += cache.prob_neg[p] <= 0.5f;
  }
  return static_cast<double>(correct) / (2.0 * static_cast<double>(batch.pairs.size()));
}

ContrastiveModel train_contrastive(ContrastiveMode mode, const Graph& g,
                                   const SubgraphIndex& index, std::span<const Label> labels,
                                   const EncoderConfig& config,
                                   const ContrastiveOptions& options,
                                   const ContrastiveProbe& probe) {
  config.validate();
  check(config.prefix_width() == 0, ErrorCode::kConfig,
        "contrastive encoders take no prefix");
  check(index.node_count() == g.node_count(), ErrorCode::kDimension,
        "subgraph index does not match graph");
  if (mode == ContrastiveMode::kSs) {
    check(labels.size() == g.node_count(), ErrorCode::kConfig,
          "SS encoder requires labels");
  }
  // Validates class presence / node count before any work.
  epoch_pairs(mode, g, labels, options.positives, options.train.seed, 0);

  Rng rng = make_rng(options.train.seed, std::string(mode_name(mode)) + ".init");
  ContrastiveModel model;
  model.mode = mode;
  model.activation = options.activation;
  model.config = config;
  model.table = init_attribute_table(config.attribute_width, rng);
  model.stack = init_gnn_stack(config, rng);
  model.disc = init_discriminator(config.hidden_width, rng);

  AdamOptions adam;
  adam.learning_rate = options.train.learning_rate;
  AdamOptimizer<ContrastiveModel> optimizer(model, adam);
  ContrastiveModel grads = zeros_like(model);

  auto step = [&](ContrastiveModel& m, int epoch) {
    grads.visit([](const std::string&, Tensor& t) { t.fill(0.0f); });
    const PairBatch batch =
        epoch_pairs(mode, g, labels, options.positives, options.train.seed, epoch);
    const float loss = contrastive_loss<float>(m.stack, m.table, m.disc, m.activation, g, index, batch,
                                               &grads.stack, &grads.table, &grads.disc);
    optimizer.step(m, grads);
    return static_cast<double>(loss);
  };
  model.history = train_with_probe<ContrastiveModel>(model, options.train, step, probe);
  return model;
}

#define SGRL_INSTANTIATE(T)                                                             \
  template T pair_loss<T>(const DiscriminatorParamsT<T>&, DiscriminatorActivation,     \
                          const RowMatrix<T>&, const SubgraphIndex&, const PairBatch&,  \
                          RowMatrix<T>*,                                                \
                          DiscriminatorParamsT<T>*, PairCache<T>*);                     \
  template T contrastive_loss<T>(const GnnStackT<T>&, const AttributeTableT<T>&,        \
                                 const DiscriminatorParamsT<T>&,                        \
                                 DiscriminatorActivation, const Graph&,                 \
                                 const SubgraphIndex&, const PairBatch&, GnnStackT<T>*, \
                                 AttributeTableT<T>*, DiscriminatorParamsT<T>*);

SGRL_INSTANTIATE(float)
SGRL_INSTANTIATE(double)

#undef SGRL_INSTANTIATE

}  // namespace sgrl
