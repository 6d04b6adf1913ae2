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

#include "sgrl/ig_encoder.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace sgrl {
namespace {

constexpr std::uint32_t kNoRow = std::numeric_limits<std::uint32_t>::max();

AttributeState state_of(AttributeBits bits, AttributeMask mask, int a) {
  if ((mask >> a) & 1u) return AttributeState::kMasked;
  return attribute_set(bits, a) ? AttributeState::kPresent : AttributeState::kAbsent;
}

template <typename T>
RowMatrix<T> to_matrix(const Tensor& t) {
  return t.mat().template cast<T>();
}

}  // namespace

void EncoderConfig::validate() const {
  check(layers == 2, ErrorCode::kConfig,
        "encoder stacks exactly 2 layers, got " + std::to_string(layers));
  check(attribute_width >= 1 && hidden_width >= 1, ErrorCode::kConfig,
        "encoder widths must be positive");
  check(input_width >= kNumAttributes * attribute_width, ErrorCode::kConfig,
        "input width " + std::to_string(input_width) +
            " is smaller than 7 x attribute width " + std::to_string(attribute_width));
  check(threshold > 0.0 && threshold < 1.0, ErrorCode::kConfig,
        "decision threshold must lie in (0, 1)");
}

// ---- Construction -------------------------------------------------------

template <typename T>
BasicTensor<T> init_weight(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(cols)));
  BasicTensor<T> w({rows, cols});
  for (auto& v : w.values()) v = static_cast<T>(normal(rng));
  return w;
}

template BasicTensor<float> init_weight<float>(std::size_t, std::size_t, Rng&);
template BasicTensor<double> init_weight<double>(std::size_t, std::size_t, Rng&);

AttributeTable init_attribute_table(int width, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  AttributeTable table;
  table.vectors = Tensor({static_cast<std::size_t>(kNumAttributes),
                          static_cast<std::size_t>(kAttributeStates),
                          static_cast<std::size_t>(width)});
  for (auto& v : table.vectors.values()) v = static_cast<float>(normal(rng));
  return table;
}

GnnStack init_gnn_stack(const EncoderConfig& config, Rng& rng) {
  config.validate();
  const std::size_t f1 = config.hidden_width;
  const std::size_t f2 = config.input_width;
  GnnStack stack;
  for (int t = 0; t < 2; ++t) {
    const std::size_t d_in = t == 0 ? f2 : f1;
    GnnLayerParams& p = stack.layers[t];
    p.agg_weight = init_weight(f1, 3 * d_in, rng);
    p.agg_bias = Tensor({f1});
    p.self_weight = init_weight(f1, f2, rng);
    p.self_bias = Tensor({f1});
    p.out_weight = init_weight(f1, 2 * f1, rng);
    p.out_bias = Tensor({f1});
  }
  return stack;
}

ScoreHead init_score_head(int hidden_width, Rng& rng) {
  const std::size_t f1 = hidden_width;
  ScoreHead head;
  head.w1 = init_weight(2 * f1, f1, rng);
  head.b1 = Tensor({2 * f1});
  head.w2 = init_weight(f1, 2 * f1, rng);
  head.b2 = Tensor({f1});
  Tensor w3 = init_weight(1, f1, rng);
  head.w3 = Tensor({f1}, std::vector<float>(w3.values().begin(), w3.values().end()));
  head.b3 = Tensor({1});
  return head;
}

EncoderParams init_encoder(const EncoderConfig& config, Rng& rng) {
  EncoderParams params;
  params.stack = init_gnn_stack(config, rng);
  params.head = init_score_head(config.hidden_width, rng);
  return params;
}

long long param_count(int layers, int hidden_width, int input_width) {
  check(layers >= 1 && hidden_width >= 1 && input_width >= 1, ErrorCode::kConfig,
        "param_count needs positive dimensions");
  const long long l = layers;
  const long long f1 = hidden_width;
  const long long f2 = input_width;
  return (3 * l * f1 + 2 * l * f2 + 4 * f1 + 4 * l + 4) * f1 + 1;
}

std::size_t trainable_parameter_count(const EncoderParams& params) {
  return count_parameters(params);
}

// ---- Plans --------------------------------------------------------------

EncoderPlan full_plan(const Graph& g) {
  EncoderPlan plan;
  const std::size_t n = g.node_count();
  plan.input_rows = n;
  plan.l1_self.resize(n);
  for (std::size_t i = 0; i < n; ++i) plan.l1_self[i] = static_cast<std::uint32_t>(i);
  plan.l1_offsets.assign(g.offsets().begin(), g.offsets().end());
  plan.l1_neighbors.assign(g.adjacency().begin(), g.adjacency().end());
  plan.l2_self = plan.l1_self;
  plan.l2_offsets = plan.l1_offsets;
  plan.l2_neighbors = plan.l1_neighbors;
  return plan;
}

EncoderPlan targeted_plan(const Graph& g, std::span<const NodeId> targets) {
  EncoderPlan plan;
  const std::size_t n = g.node_count();
  plan.input_rows = n;
  std::vector<std::uint32_t> l1_row(n, kNoRow);
  for (NodeId t : targets) {
    check(t < n, ErrorCode::kOutOfRange, "target node " + std::to_string(t) + " out of range");
    for (NodeId j : g.neighbors(t)) l1_row[j] = 0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (l1_row[j] == kNoRow) continue;
    l1_row[j] = static_cast<std::uint32_t>(plan.l1_self.size());
    plan.l1_self.push_back(static_cast<std::uint32_t>(j));
    for (NodeId x : g.neighbors(static_cast<NodeId>(j))) plan.l1_neighbors.push_back(x);
    plan.l1_offsets.push_back(plan.l1_neighbors.size());
  }
  for (NodeId t : targets) {
    plan.l2_self.push_back(t);
    for (NodeId j : g.neighbors(t)) plan.l2_neighbors.push_back(l1_row[j]);
    plan.l2_offsets.push_back(plan.l2_neighbors.size());
  }
  return plan;
}

EncoderPlan masked_view_plan(const Graph& g, std::span<const NodeId> targets) {
  EncoderPlan plan;
  const std::size_t n = g.node_count();
  plan.input_rows = 2 * n;
  for (NodeId i : targets) {
    check(i < n, ErrorCode::kOutOfRange, "target node " + std::to_string(i) + " out of range");
    plan.l2_self.push_back(static_cast<std::uint32_t>(n + i));
    for (NodeId j : g.neighbors(i)) {
      plan.l2_neighbors.push_back(static_cast<std::uint32_t>(plan.l1_self.size()));
      plan.l1_self.push_back(j);
      for (NodeId x : g.neighbors(j)) {
        plan.l1_neighbors.push_back(x == i ? static_cast<std::uint32_t>(n + i) : x);
      }
      plan.l1_offsets.push_back(plan.l1_neighbors.size());
    }
    plan.l2_offsets.push_back(plan.l2_neighbors.size());
  }
  return plan;
}

// ---- Initial representations --------------------------------------------

InputRows visible_rows(const Graph& g) {
  InputRows rows;
  rows.bits.assign(g.all_attributes().begin(), g.all_attributes().end());
  rows.masks.assign(rows.bits.size(), 0);
  return rows;
}

InputRows visible_and_masked_rows(const Graph& g, AttributeMask mask) {
  InputRows rows = visible_rows(g);
  const std::size_t n = rows.bits.size();
  rows.bits.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) rows.bits.push_back(rows.bits[i]);
  rows.masks.resize(2 * n, mask);
  return rows;
}

Tensor encode_attributes(const AttributeTable& table, AttributeBits a,
                         std::span<const int> masked_attributes) {
  AttributeMask mask = 0;
  for (int m : masked_attributes) {
    check(m >= 0 && m < kNumAttributes, ErrorCode::kOutOfRange,
          "masked attribute index " + std::to_string(m) + " outside [0, 7)");
    mask |= static_cast<AttributeMask>(1u << m);
  }
  const int f = table.width();
  Tensor out({static_cast<std::size_t>(kNumAttributes * f)});
  for (int attr = 0; attr < kNumAttributes; ++attr) {
    const float* src = table.slot(attr, state_of(a, mask, attr));
    std::copy(src, src + f, out.data() + attr * f);
  }
  return out;
}

template <typename T>
RowMatrix<T> encode_rows(const AttributeTableT<T>& table, const InputRows& rows,
                         const RowMatrix<T>* prefix) {
  const int f = table.width();
  const Eigen::Index p = prefix ? prefix->cols() : 0;
  const Eigen::Index n = static_cast<Eigen::Index>(rows.bits.size());
  if (prefix) {
    check(prefix->rows() == n, ErrorCode::kDimension,
          "prefix has " + std::to_string(prefix->rows()) + " rows for " +
              std::to_string(n) + " inputs");
  }
  RowMatrix<T> x0(n, p + kNumAttributes * f);
  if (prefix) x0.leftCols(p) = *prefix;
  for (Eigen::Index r = 0; r < n; ++r) {
    T* dst = x0.row(r).data() + p;
    for (int a = 0; a < kNumAttributes; ++a) {
      const T* src = table.slot(a, state_of(rows.bits[r], rows.masks[r], a));
      std::copy(src, src + f, dst + a * f);
    }
  }
  return x0;
}

template <typename T>
void encode_rows_backward(const RowMatrix<T>& d_x0, const InputRows& rows,
                          int prefix_width, AttributeTableT<T>& grad) {
  const int f = grad.width();
  for (Eigen::Index r = 0; r < d_x0.rows(); ++r) {
    const T* src = d_x0.row(r).data() + prefix_width;
    for (int a = 0; a < kNumAttributes; ++a) {
      T* dst = grad.slot(a, state_of(rows.bits[r], rows.masks[r], a));
      for (int k = 0; k < f; ++k) dst[k] += src[a * f + k];
    }
  }
}

// ---- Layers -------------------------------------------------------------

Tensor aggregate_neighbors(const Tensor& h_prev, std::span<const NodeId> neighbors) {
  const std::size_t d = h_prev.cols();
  Tensor out({3 * d});
  if (neighbors.empty()) return out;
  for (std::size_t k = 0; k < d; ++k) out[d + k] = -std::numeric_limits<float>::infinity();
  for (NodeId j : neighbors) {
    check(j < h_prev.rows(), ErrorCode::kOutOfRange,
          "neighbor row " + std::to_string(j) + " out of range");
    for (std::size_t k = 0; k < d; ++k) {
      const float v = h_prev.at(j, k);
      out[2 * d + k] += v;
      out[d + k] = std::max(out[d + k], v);
    }
  }
  for (std::size_t k = 0; k < d; ++k) {
    out[k] = out[2 * d + k] / static_cast<float>(neighbors.size());
  }
  return out;
}

template <typename T>
void layer_forward(const GnnLayerParamsT<T>& p, const RowMatrix<T>& input,
                   const RowMatrix<T>& x0, std::span<const std::uint32_t> self_rows,
                   std::span<const std::size_t> offsets,
                   std::span<const std::uint32_t> neighbors, LayerCache<T>& c) {
  const Eigen::Index n = static_cast<Eigen::Index>(self_rows.size());
  const Eigen::Index d = input.cols();
  const Eigen::Index f1 = static_cast<Eigen::Index>(p.agg_bias.size());
  if (p.agg_weight.dim(1) != static_cast<std::size_t>(3 * d) ||
      p.self_weight.dim(1) != static_cast<std::size_t>(x0.cols())) {
    fail(ErrorCode::kDimension,
         "gnn layer: aggregation weight " + shape_string(p.agg_weight.dims()) +
             " / self weight " + shape_string(p.self_weight.dims()) +
             " do not match input width " + std::to_string(d) + " and h0 width " +
             std::to_string(x0.cols()));
  }

  c.agg.setZero(n, 3 * d);
  c.argmax.assign(static_cast<std::size_t>(n * d), kNoRow);
  for (Eigen::Index r = 0; r < n; ++r) {
    const std::size_t begin = offsets[r];
    const std::size_t end = offsets[r + 1];
    if (begin == end) continue;
    T* mean = c.agg.row(r).data();
    T* mx = mean + d;
    T* sum = mean + 2 * d;
    std::uint32_t* arg = c.argmax.data() + r * d;
    for (std::size_t e = begin; e < end; ++e) {
      const std::uint32_t src_row = neighbors[e];
      const T* v = input.row(src_row).data();
      for (Eigen::Index k = 0; k < d; ++k) {
        sum[k] += v[k];
        if (arg[k] == kNoRow || v[k] > mx[k]) {
          mx[k] = v[k];
          arg[k] = src_row;
        }
      }
    }
    const T inv = T(1) / static_cast<T>(end - begin);
    for (Eigen::Index k = 0; k < d; ++k) mean[k] = sum[k] * inv;
  }

  c.self_in.resize(n, x0.cols());
  for (Eigen::Index r = 0; r < n; ++r) c.self_in.row(r) = x0.row(self_rows[r]);

  c.pre_e.resize(n, 2 * f1);
  c.pre_e.leftCols(f1).noalias() = c.agg * p.agg_weight.mat().transpose();
  c.pre_e.leftCols(f1).rowwise() += p.agg_bias.vec().transpose();
  c.pre_e.rightCols(f1).noalias() = c.self_in * p.self_weight.mat().transpose();
  c.pre_e.rightCols(f1).rowwise() += p.self_bias.vec().transpose();
  c.e = c.pre_e.cwiseMax(T(0));

  c.pre_q.noalias() = c.e * p.out_weight.mat().transpose();
  c.pre_q.rowwise() += p.out_bias.vec().transpose();
  c.h = c.pre_q.cwiseMax(T(0));
  c.norm.resize(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const T norm = c.h.row(r).norm();
    c.norm[r] = norm;
    c.h.row(r) /= std::max(norm, static_cast<T>(kNormEpsilon));
  }
}

template <typename T>
RowMatrix<T> layer_backward(const GnnLayerParamsT<T>& p, const LayerCache<T>& c,
                            const RowMatrix<T>& d_h, std::size_t input_rows,
                            std::span<const std::uint32_t> self_rows,
                            std::span<const std::size_t> offsets,
                            std::span<const std::uint32_t> neighbors,
                            RowMatrix<T>& d_x0, GnnLayerParamsT<T>& grad) {
  const Eigen::Index n = c.h.rows();
  const Eigen::Index f1 = c.h.cols();
  const Eigen::Index d = c.agg.cols() / 3;

  RowMatrix<T> d_pre_q(n, f1);
  for (Eigen::Index r = 0; r < n; ++r) {
    const T norm = c.norm[r];
    if (norm >= static_cast<T>(kNormEpsilon)) {
      const T proj = c.h.row(r).dot(d_h.row(r));
      d_pre_q.row(r) = (d_h.row(r) - proj * c.h.row(r)) / norm;
    } else {
      d_pre_q.row(r) = d_h.row(r) / static_cast<T>(kNormEpsilon);
    }
  }
  d_pre_q = d_pre_q.cwiseProduct((c.pre_q.array() > T(0)).template cast<T>().matrix());

  grad.out_weight.mat().noalias() += d_pre_q.transpose() * c.e;
  grad.out_bias.vec() += d_pre_q.colwise().sum().transpose();
  RowMatrix<T> d_pre_e = d_pre_q * p.out_weight.mat();
  d_pre_e = d_pre_e.cwiseProduct((c.pre_e.array() > T(0)).template cast<T>().matrix());

  const auto d_g = d_pre_e.leftCols(f1);
  const auto d_s = d_pre_e.rightCols(f1);
  grad.agg_weight.mat().noalias() += d_g.transpose() * c.agg;
  grad.agg_bias.vec() += d_g.colwise().sum().transpose();
  grad.self_weight.mat().noalias() += d_s.transpose() * c.self_in;
  grad.self_bias.vec() += d_s.colwise().sum().transpose();

  const RowMatrix<T> d_self = d_s * p.self_weight.mat();
  for (Eigen::Index r = 0; r < n; ++r) d_x0.row(self_rows[r]) += d_self.row(r);

  const RowMatrix<T> d_agg = d_g * p.agg_weight.mat();
  RowMatrix<T> d_input = RowMatrix<T>::Zero(static_cast<Eigen::Index>(input_rows), d);
  for (Eigen::Index r = 0; r < n; ++r) {
    const std::size_t begin = offsets[r];
    const std::size_t end = offsets[r + 1];
    if (begin == end) continue;
    const T inv = T(1) / static_cast<T>(end - begin);
    const T* g_mean = d_agg.row(r).data();
    const T* g_max = g_mean + d;
    const T* g_sum = g_mean + 2 * d;
    for (std::size_t e = begin; e < end; ++e) {
      T* dst = d_input.row(neighbors[e]).data();
      for (Eigen::Index k = 0; k < d; ++k) dst[k] += g_mean[k] * inv + g_sum[k];
    }
    const std::uint32_t* arg = c.argmax.data() + r * d;
    for (Eigen::Index k = 0; k < d; ++k) d_input(arg[k], k) += g_max[k];
  }
  return d_input;
}

Tensor gnn_layer(const GnnLayerParams& params, const Tensor& h_prev, const Tensor& h0,
                 const Graph& g) {
  check(h_prev.rows() == g.node_count() && h0.rows() == g.node_count(),
        ErrorCode::kDimension, "gnn_layer: representation rows must equal node count");
  const RowMatrix<float> input = h_prev.mat();
  const RowMatrix<float> x0 = h0.mat();
  std::vector<std::uint32_t> self(g.node_count());
  for (std::size_t i = 0; i < self.size(); ++i) self[i] = static_cast<std::uint32_t>(i);
  LayerCache<float> cache;
  layer_forward<float>(params, input, x0, self, g.offsets(), g.adjacency(), cache);
  Tensor out({static_cast<std::size_t>(cache.h.rows()),
              static_cast<std::size_t>(cache.h.cols())});
  out.mat() = cache.h;
  return out;
}

template <typename T>
const RowMatrix<T>& stack_forward(const GnnStackT<T>& stack, const EncoderPlan& plan,
                                  const RowMatrix<T>& x0, StackCache<T>& cache) {
  check(static_cast<std::size_t>(x0.rows()) == plan.input_rows, ErrorCode::kDimension,
        "plan expects " + std::to_string(plan.input_rows) + " input rows, got " +
            std::to_string(x0.rows()));
  layer_forward(stack.layers[0], x0, x0, plan.l1_self, plan.l1_offsets,
                plan.l1_neighbors, cache.l1);
  layer_forward(stack.layers[1], cache.l1.h, x0, plan.l2_self, plan.l2_offsets,
                plan.l2_neighbors, cache.l2);
  return cache.l2.h;
}

template <typename T>
RowMatrix<T> stack_backward(const GnnStackT<T>& stack, const EncoderPlan& plan,
                            const RowMatrix<T>& x0, const StackCache<T>& cache,
                            const RowMatrix<T>& d_out, GnnStackT<T>& grad) {
  RowMatrix<T> d_x0 = RowMatrix<T>::Zero(x0.rows(), x0.cols());
  const RowMatrix<T> d_l1 =
      layer_backward(stack.layers[1], cache.l2, d_out, plan.l1_rows(), plan.l2_self,
                     plan.l2_offsets, plan.l2_neighbors, d_x0, grad.layers[1]);
  const RowMatrix<T> d_agg_in =
      layer_backward(stack.layers[0], cache.l1, d_l1, plan.input_rows, plan.l1_self,
                     plan.l1_offsets, plan.l1_neighbors, d_x0, grad.layers[0]);
  d_x0 += d_agg_in;
  return d_x0;
}

// ---- Head ---------------------------------------------------------------

template <typename T>
const ColVector<T>& head_forward(const ScoreHeadT<T>& head, const RowMatrix<T>& h,
                                 HeadCache<T>& c) {
  c.z1.noalias() = h * head.w1.mat().transpose();
  c.z1.rowwise() += head.b1.vec().transpose();
  c.z2.noalias() = c.z1 * head.w2.mat().transpose();
  c.z2.rowwise() += head.b2.vec().transpose();
  c.logit = c.z2 * head.w3.vec();
  c.logit.array() += head.b3[0];
  c.prob.resize(c.logit.size());
  for (Eigen::Index r = 0; r < c.logit.size(); ++r) c.prob[r] = sigmoid(c.logit[r]);
  return c.prob;
}

template <typename T>
RowMatrix<T> head_backward(const ScoreHeadT<T>& head, const RowMatrix<T>& h,
                           const HeadCache<T>& c, const ColVector<T>& d_logit,
                           ScoreHeadT<T>& grad) {
  grad.w3.vec().noalias() += c.z2.transpose() * d_logit;
  grad.b3[0] += d_logit.sum();
  const RowMatrix<T> d_z2 = d_logit * head.w3.vec().transpose();
  grad.w2.mat().noalias() += d_z2.transpose() * c.z1;
  grad.b2.vec() += d_z2.colwise().sum().transpose();
  const RowMatrix<T> d_z1 = d_z2 * head.w2.mat();
  grad.w1.mat().noalias() += d_z1.transpose() * h;
  grad.b1.vec() += d_z1.colwise().sum().transpose();
  return d_z1 * head.w1.mat();
}

// ---- Whole encoder ------------------------------------------------------

IgOutput ig_forward(const EncoderParams& params, const AttributeTable& table,
                    const Graph& g, const Tensor* prefix) {
  const EncoderPlan plan = full_plan(g);
  const InputRows rows = visible_rows(g);
  RowMatrix<float> prefix_m;
  if (prefix) prefix_m = to_matrix<float>(*prefix);
  const RowMatrix<float> x0 = encode_rows(table, rows, prefix ? &prefix_m : nullptr);
  StackCache<float> cache;
  const RowMatrix<float>& h = stack_forward(params.stack, plan, x0, cache);
  HeadCache<float> head_cache;
  const ColVector<float>& p = head_forward(params.head, h, head_cache);
  IgOutput out;
  out.representations = Tensor({static_cast<std::size_t>(h.rows()),
                                static_cast<std::size_t>(h.cols())});
  out.representations.mat() = h;
  out.scores = Tensor({static_cast<std::size_t>(p.size())});
  out.scores.vec() = p;
  return out;
}

template <typename T>
T ig_loss(const EncoderParamsT<T>& params, const AttributeTableT<T>& table,
          const EncoderPlan& plan, const InputRows& rows, const RowMatrix<T>* prefix,
          std::span<const Label> target_labels, EncoderParamsT<T>* grad_params,
          AttributeTableT<T>* grad_table) {
  check(target_labels.size() == plan.l2_rows(), ErrorCode::kDimension,
        "ig_loss: one label per plan target required");
  const RowMatrix<T> x0 = encode_rows(table, rows, prefix);
  StackCache<T> cache;
  const RowMatrix<T>& h = stack_forward(params.stack, plan, x0, cache);
  HeadCache<T> head_cache;
  const ColVector<T>& p = head_forward(params.head, h, head_cache);
  const Eigen::Index n = p.size();
  T loss = 0;
  for (Eigen::Index r = 0; r < n; ++r) loss += bce(p[r], static_cast<T>(target_labels[r]));
  loss /= static_cast<T>(n);
  if (grad_params == nullptr) return loss;

  ColVector<T> d_logit(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    d_logit[r] = bce_logit_grad(p[r], static_cast<T>(target_labels[r])) / static_cast<T>(n);
  }
  const RowMatrix<T> d_h = head_backward(params.head, h, head_cache, d_logit, grad_params->head);
  const RowMatrix<T> d_x0 = stack_backward(params.stack, plan, x0, cache, d_h, grad_params->stack);
  if (grad_table) {
    encode_rows_backward(d_x0, rows, prefix ? static_cast<int>(prefix->cols()) : 0,
                         *grad_table);
  }
  return loss;
}

// ---- Training -----------------------------------------------------------

IgModel ig_train(const Graph& g, std::span<const NodeId> train_nodes,
                 const EncoderConfig& config, const TrainOptions& options,
                 const Tensor* prefix, const IgProbe& probe) {
  config.validate();
  std::vector<Label> labels;
  bool has_pos = false;
  bool has_neg = false;
  for (NodeId i : train_nodes) {
    check(i < g.node_count(), ErrorCode::kOutOfRange, "training node out of range");
    const Label l = g.label(i);
    check(l != kUnlabeled, ErrorCode::kConfig,
          "ig_train: node " + std::to_string(i) + " has no label");
    labels.push_back(l);
    has_pos |= l == 1;
    has_neg |= l == 0;
  }
  check(has_pos && has_neg, ErrorCode::kConfig,
        "ig_train: labeled set must contain both BMA and non-BMA nodes");
  if (prefix) {
    check(prefix->rows() == g.node_count() &&
              static_cast<int>(prefix->cols()) == config.prefix_width(),
          ErrorCode::kDimension, "ig_train: prefix shape " + shape_string(prefix->dims()) +
                                     " does not match configured prefix width " +
                                     std::to_string(config.prefix_width()));
  } else {
    check(config.prefix_width() == 0, ErrorCode::kConfig,
          "ig_train: configuration expects a prefix of width " +
              std::to_string(config.prefix_width()));
  }

  Rng rng = make_rng(options.seed, "ig.init");
  IgModel model;
  model.config = config;
  model.table = init_attribute_table(config.attribute_width, rng);
  model.params = init_encoder(config, rng);

  const EncoderPlan plan = targeted_plan(g, train_nodes);
  const InputRows rows = visible_rows(g);
  RowMatrix<float> prefix_m;
  if (prefix) prefix_m = to_matrix<float>(*prefix);
  const RowMatrix<float>* prefix_ptr = prefix ? &prefix_m : nullptr;

  AdamOptions adam;
  adam.learning_rate = options.learning_rate;
  AdamOptimizer<EncoderParams> params_opt(model.params, adam);
  AdamOptimizer<AttributeTable> table_opt(model.table, adam);
  EncoderParams grad_params = zeros_like(model.params);
  AttributeTable grad_table = zeros_like(model.table);

  auto step = [&](IgModel& m, int) {
    grad_params.visit([](const std::string&, Tensor& t) { t.fill(0.0f); });
    grad_table.vectors.fill(0.0f);
    const float loss = ig_loss<float>(m.params, m.table, plan, rows, prefix_ptr, labels,
                                      &grad_params, &grad_table);
    params_opt.step(m.params, grad_params);
    table_opt.step(m.table, grad_table);
    return static_cast<double>(loss);
  };
  model.history = train_with_probe<IgModel>(model, options, step, probe);
  return model;
}

// ---- Instantiations -----------------------------------------------------

#define SGRL_INSTANTIATE(T)                                                          \
  template RowMatrix<T> encode_rows<T>(const AttributeTableT<T>&, const InputRows&,  \
                                       const RowMatrix<T>*);                         \
  template void encode_rows_backward<T>(const RowMatrix<T>&, const InputRows&, int,  \
                                        AttributeTableT<T>&);                        \
  template void layer_forward<T>(const GnnLayerParamsT<T>&, const RowMatrix<T>&,     \
                                 const RowMatrix<T>&, std::span<const std::uint32_t>, \
                                 std::span<const std::size_t>,                       \
                                 std::span<const std::uint32_t>, LayerCache<T>&);     \
  template RowMatrix<T> layer_backward<T>(                                           \
      const GnnLayerParamsT<T>&, const LayerCache<T>&, const RowMatrix<T>&,          \
      std::size_t, std::span<const std::uint32_t>, std::span<const std::size_t>,     \
      std::span<const std::uint32_t>, RowMatrix<T>&, GnnLayerParamsT<T>&);           \
  template const RowMatrix<T>& stack_forward<T>(const GnnStackT<T>&,                 \
                                                const EncoderPlan&,                  \
                                                const RowMatrix<T>&, StackCache<T>&); \
  template RowMatrix<T> stack_backward<T>(const GnnStackT<T>&, const EncoderPlan&,   \
                                          const RowMatrix<T>&, const StackCache<T>&, \
                                          const RowMatrix<T>&, GnnStackT<T>&);       \
  template const ColVector<T>& head_forward<T>(const ScoreHeadT<T>&,                 \
                                               const RowMatrix<T>&, HeadCache<T>&);  \
  template RowMatrix<T> head_backward<T>(const ScoreHeadT<T>&, const RowMatrix<T>&,  \
                                         const HeadCache<T>&, const ColVector<T>&,   \
                                         ScoreHeadT<T>&);                            \
  template T ig_loss<T>(const EncoderParamsT<T>&, const AttributeTableT<T>&,         \
                        const EncoderPlan&, const InputRows&, const RowMatrix<T>*,   \
                        std::span<const Label>, EncoderParamsT<T>*,                  \
                        AttributeTableT<T>*);

SGRL_INSTANTIATE(float)
SGRL_INSTANTIATE(double)

#undef SGRL_INSTANTIATE

}  // namespace sgrl
