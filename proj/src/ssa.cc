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

#include "sgrl/ssa.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sgrl/numeric.h"

namespace sgrl {

PseudoLabelSpec select_pseudo_labels(std::span<const double> importance) {
  check(importance.size() == kNumAttributes, ErrorCode::kDimension,
        "select_pseudo_labels: expected 7 importance scores");
  std::array<int, kNumAttributes> order;
  std::iota(order.begin(), order.end(), 0);
  for (double v : importance) {
    check(std::isfinite(v) && v >= 0.0, ErrorCode::kNumeric,
          "select_pseudo_labels: importance must be finite and non-negative");
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return importance[a] > importance[b]; });
  PseudoLabelSpec spec;
  spec.indices = {std::min(order[0], order[1]), std::max(order[0], order[1])};
  std::copy(importance.begin(), importance.end(), spec.importance.begin());
  return spec;
}

PseudoLabelSpec make_pseudo_label_spec(int a, int b) {
  check(a >= 0 && a < kNumAttributes && b >= 0 && b < kNumAttributes && a != b,
        ErrorCode::kConfig, "pseudo labels must be two distinct attributes in [0, 7)");
  PseudoLabelSpec spec;
  spec.indices = {std::min(a, b), std::max(a, b)};
  return spec;
}

SsaHead init_ssa_head(int hidden_width, Rng& rng) {
  check(hidden_width % 2 == 0, ErrorCode::kConfig, "SSA head needs an even hidden width");
  const std::size_t f1 = hidden_width;
  SsaHead head;
  head.w1 = init_weight(f1 / 2, f1, rng);
  head.b1 = Tensor({f1 / 2});
  head.w2 = init_weight(2, f1 / 2, rng);
  head.b2 = Tensor({2});
  return head;
}

std::vector<std::array<int, 2>> pseudo_labels(const Graph& g, const PseudoLabelSpec& spec) {
  std::vector<std::array<int, 2>> y(g.node_count());
  for (NodeId i = 0; i < g.node_count(); ++i) {
    y[i] = {attribute_set(g.attributes(i), spec.indices[0]) ? 1 : 0,
            attribute_set(g.attributes(i), spec.indices[1]) ? 1 : 0};
  }
  return y;
}

namespace {

template <typename T>
void ssa_head_forward(const SsaHeadT<T>& head, const RowMatrix<T>& h, RowMatrix<T>& z,
                      RowMatrix<T>& r) {
  z.noalias() = h * head.w1.mat().transpose();
  z.rowwise() += head.b1.vec().transpose();
  r.noalias() = z * head.w2.mat().transpose();
  r.rowwise() += head.b2.vec().transpose();
  r = r.unaryExpr([](T v) { return sigmoid(v); });
}

}  // namespace

template <typename T>
T ssa_loss(const GnnStackT<T>& stack, const AttributeTableT<T>& table,
           const SsaHeadT<T>& head, const EncoderPlan& plan, const InputRows& rows,
           std::span<const std::array<int, 2>> labels, GnnStackT<T>* grad_stack,
           AttributeTableT<T>* grad_table, SsaHeadT<T>* grad_head) {
  check(labels.size() == plan.l2_rows(), ErrorCode::kDimension,
        "ssa_loss: one pseudo-label pair per target required");
  const RowMatrix<T> x0 = encode_rows<T>(table, rows, nullptr);
  StackCache<T> cache;
  const RowMatrix<T>& h = stack_forward(stack, plan, x0, cache);
  RowMatrix<T> z;
  RowMatrix<T> r;
  ssa_head_forward(head, h, z, r);
  T loss = 0;
  RowMatrix<T> d_logit(r.rows(), 2);
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    for (int j = 0; j < 2; ++j) {
      const T y = static_cast<T>(labels[i][j]);
      loss += bce(r(i, j), y);
      d_logit(i, j) = T(0.5) * bce_logit_grad(r(i, j), y);
    }
  }
  loss *= T(0.5);
  if (grad_stack == nullptr) return loss;

  grad_head->w2.mat().noalias() += d_logit.transpose() * z;
  grad_head->b2.vec() += d_logit.colwise().sum().transpose();
  const RowMatrix<T> d_z = d_logit * head.w2.mat();
  grad_head->w1.mat().noalias() += d_z.transpose() * h;
  grad_head->b1.vec() += d_z.colwise().sum().transpose();
  const RowMatrix<T> d_h = d_z * head.w1.mat();
  const RowMatrix<T> d_x0 = stack_backward(stack, plan, x0, cache, d_h, *grad_stack);
  if (grad_table) encode_rows_backward(d_x0, rows, 0, *grad_table);
  return loss;
}

Tensor ssa_predict(const SsaModel& model, const Graph& g, std::span<const NodeId> targets) {
  const EncoderPlan plan = masked_view_plan(g, targets);
  const InputRows rows = visible_and_masked_rows(g, model.spec.mask());
  const RowMatrix<float> x0 = encode_rows<float>(model.table, rows, nullptr);
  StackCache<float> cache;
  const RowMatrix<float>& h = stack_forward(model.stack, plan, x0, cache);
  RowMatrix<float> z;
  RowMatrix<float> r;
  ssa_head_forward(model.head, h, z, r);
  Tensor out({static_cast<std::size_t>(r.rows()), 2});
  out.mat() = r;
  return out;
}

Tensor ssa_predict(const SsaModel& model, const Graph& g) {
  std::vector<NodeId> all(g.node_count());
  std::iota(all.begin(), all.end(), 0u);
  return ssa_predict(model, g, all);
}

std::array<double, 2> ssa_forward_one(const SsaModel& model, const Graph& g, NodeId i) {
  check(i < g.node_count(), ErrorCode::kOutOfRange,
        "ssa_forward_one: node " + std::to_string(i) + " out of range");
  const NodeId target[1] = {i};
  const Tensor r = ssa_predict(model, g, target);
  return {r[0], r[1]};
}

double gmml_loss(const Tensor& predictions, std::span<const std::array<int, 2>> labels) {
  check(predictions.rank() == 2 && predictions.cols() == 2 &&
            predictions.rows() == labels.size(),
        ErrorCode::kDimension,
        "gmml_loss: predictions " + shape_string(predictions.dims()) + " for " +
            std::to_string(labels.size()) + " label pairs");
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (int j = 0; j < 2; ++j) {
      total += bce(static_cast<double>(predictions.at(i, j)), static_cast<double>(labels[i][j]));
    }
  }
  return 0.5 * total;
}

AttributeBits replace_attributes(AttributeBits a, const PseudoLabelSpec& spec,
                                 std::array<double, 2> r, double threshold) {
  check(threshold > 0.0 && threshold < 1.0, ErrorCode::kConfig,
        "replacement threshold must lie in (0, 1)");
  for (int j = 0; j < 2; ++j) {
    const auto bit = static_cast<AttributeBits>(1u << spec.indices[j]);
    a = r[j] >= threshold ? (a | bit) : (a & ~bit);
  }
  return a;
}

std::vector<AttributeBits> replace_all_attributes(const Graph& g, const PseudoLabelSpec& spec,
                                                  const Tensor& predictions, double threshold) {
  check(predictions.rows() == g.node_count() && predictions.cols() == 2,
        ErrorCode::kDimension, "replace_all_attributes: one prediction pair per node required");
  std::vector<AttributeBits> out(g.node_count());
  for (NodeId i = 0; i < g.node_count(); ++i) {
    out[i] = replace_attributes(g.attributes(i), spec,
                                {predictions.at(i, 0), predictions.at(i, 1)}, threshold);
  }
  return out;
}

PseudoLabelSpec fit_pseudo_labels(const Graph& g, std::span<const NodeId> train_nodes,
                                  std::span<const NodeId> valid_nodes,
                                  const GbdtConfig& config, std::uint64_t seed) {
  auto features = [&](std::span<const NodeId> nodes, std::vector<int>& y) {
    Tensor x({nodes.size(), static_cast<std::size_t>(kNumAttributes)});
    y.clear();
    for (std::size_t r = 0; r < nodes.size(); ++r) {
      const NodeId i = nodes[r];
      check(i < g.node_count(), ErrorCode::kOutOfRange, "labeled node out of range");
      check(g.label(i) != kUnlabeled, ErrorCode::kConfig,
            "node " + std::to_string(i) + " has no label");
      for (int a = 0; a < kNumAttributes; ++a) x.at(r, a) = attribute_set(g.attributes(i), a);
      y.push_back(g.label(i));
    }
    return x;
  };
  std::vector<int> y_train;
  std::vector<int> y_valid;
  const Tensor x_train = features(train_nodes, y_train);
  const Tensor x_valid = features(valid_nodes, y_valid);
  const TreeEnsemble model = gbdt_fit(x_train, y_train, config,
                                      valid_nodes.empty() ? nullptr : &x_valid, y_valid, seed);
  const std::vector<double> importance = gbdt_importance(model, config.importance);
  return select_pseudo_labels(importance);
}

SsaModel train_ssa(const Graph& g, const PseudoLabelSpec& spec, const EncoderConfig& config,
                   const TrainOptions& options, const SsaProbe& probe) {
  config.validate();
  check(config.prefix_width() == 0, ErrorCode::kConfig, "SSA encoder takes no prefix");
  check(g.node_count() > 0, ErrorCode::kConfig, "SSA encoder needs a non-empty graph");
  Rng rng = make_rng(options.seed, "ssa.init");
  SsaModel model;
  model.config = config;
  model.spec = spec;
  model.table = init_attribute_table(config.attribute_width, rng);
  model.stack = init_gnn_stack(config, rng);
  model.head = init_ssa_head(config.hidden_width, rng);

  std::vector<NodeId> all(g.node_count());
  std::iota(all.begin(), all.end(), 0u);
  const EncoderPlan plan = masked_view_plan(g, all);
  const InputRows rows = visible_and_masked_rows(g, spec.mask());
  const std::vector<std::array<int, 2>> labels = pseudo_labels(g, spec);

  AdamOptions adam;
  adam.learning_rate = options.learning_rate;
  AdamOptimizer<SsaModel> optimizer(model, adam);
  SsaModel grads = zeros_like(model);
  auto step = [&](SsaModel& m, int) {
    grads.visit([](const std::string&, Tensor& t) { t.fill(0.0f); });
    const float loss = ssa_loss<float>(m.stack, m.table, m.head, plan, rows, labels,
                                       &grads.stack, &grads.table, &grads.head);
    optimizer.step(m, grads);
    return static_cast<double>(loss);
  };
  model.history = train_with_probe<SsaModel>(model, options, step, probe);
  return model;
}

#define SGRL_INSTANTIATE(T)                                                              \
  template T ssa_loss<T>(const GnnStackT<T>&, const AttributeTableT<T>&,                 \
                         const SsaHeadT<T>&, const EncoderPlan&, const InputRows&,       \
                         std::span<const std::array<int, 2>>, GnnStackT<T>*,             \
                         AttributeTableT<T>*, SsaHeadT<T>*);

SGRL_INSTANTIATE(float)
SGRL_INSTANTIATE(double)

#undef SGRL_INSTANTIATE

}  // namespace sgrl
