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

#include "sgrl/verify.h"

#include <numeric>
#include <random>

#include "sgrl/contrastive.h"
#include "sgrl/ig_encoder.h"
#include "sgrl/rng.h"
#include "sgrl/ssa.h"

namespace sgrl {
namespace {

template <typename T>
struct IgParts {
  EncoderParamsT<T> params;
  AttributeTableT<T> table;

  template <class F> void visit(F&& f) { params.visit(f); table.visit(f); }
  template <class F> void visit(F&& f) const { params.visit(f); table.visit(f); }
};

template <typename T>
struct ContrastiveParts {
  GnnStackT<T> stack;
  AttributeTableT<T> table;
  DiscriminatorParamsT<T> disc;

  template <class F> void visit(F&& f) { stack.visit(f); table.visit(f); disc.visit(f); }
  template <class F> void visit(F&& f) const { stack.visit(f); table.visit(f); disc.visit(f); }
};

template <typename T>
struct SsaParts {
  GnnStackT<T> stack;
  AttributeTableT<T> table;
  SsaHeadT<T> head;

  template <class F> void visit(F&& f) { stack.visit(f); table.visit(f); head.visit(f); }
  template <class F> void visit(F&& f) const { stack.visit(f); table.visit(f); head.visit(f); }
};

// Fresh initializations put biases at exactly zero, which places isolated
// nodes on a relu kink; checks run at a random point instead.
template <typename Parts>
void randomize_vectors(Parts& parts, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 0.5);
  parts.visit([&](const std::string&, auto& t) {
    if (t.rank() != 1) return;
    for (auto& v : t.values()) v = normal(rng);
  });
}

// loss(parts, grads_or_null) -> value.
template <typename Parts, typename Loss>
GradCheckReport run_check(Parts init, Loss loss, double step, Rng& rng) {
  randomize_vectors(init, rng);
  std::vector<double> x;
  flatten_into(init, x);
  Objective objective;
  objective.value = [&](std::span<const double> flat) {
    Parts p = init;
    unflatten_from(flat, 0, p);
    return loss(p, static_cast<Parts*>(nullptr));
  };
  objective.gradient = [&](std::span<const double> flat) {
    Parts p = init;
    unflatten_from(flat, 0, p);
    Parts grad = zeros_like(p);
    loss(p, &grad);
    std::vector<double> out;
    flatten_into(grad, out);
    return out;
  };
  return grad_check(objective, x, step);
}

EncoderConfig small_config(const GradCheckOptions& o, int prefix) {
  EncoderConfig c;
  c.attribute_width = o.attribute_width;
  c.hidden_width = o.hidden_width;
  c.input_width = prefix + kNumAttributes * o.attribute_width;
  return c;
}

std::vector<NodeId> all_nodes(const Graph& g) {
  std::vector<NodeId> v(g.node_count());
  std::iota(v.begin(), v.end(), 0u);
  return v;
}

GradCheckReport ig_check(const GradCheckOptions& options, std::uint64_t seed, int prefix) {
  const Graph g = gradcheck_graph(options, seed);
  Rng rng = make_rng(seed, "gradcheck.ig");
  const EncoderConfig config = small_config(options, prefix);
  IgParts<double> parts;
  parts.params = cast_params<double>(init_encoder(config, rng));
  parts.table = cast_params<double>(init_attribute_table(config.attribute_width, rng));

  RowMatrix<double> prefix_m(g.node_count(), prefix);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index k = 0; k < prefix_m.size(); ++k) prefix_m.data()[k] = normal(rng);

  // Targets: every labeled node except the last, so the receptive field is partial.
  std::vector<NodeId> targets = all_nodes(g);
  targets.pop_back();
  std::vector<Label> labels;
  for (NodeId i : targets) labels.push_back(g.label(i));
  const EncoderPlan plan = targeted_plan(g, targets);
  const InputRows rows = visible_rows(g);
  const RowMatrix<double>* prefix_ptr = prefix > 0 ? &prefix_m : nullptr;
  return run_check(
      parts,
      [&](const IgParts<double>& p, IgParts<double>* grad) {
        return ig_loss<double>(p.params, p.table, plan, rows, prefix_ptr, labels,
                               grad ? &grad->params : nullptr, grad ? &grad->table : nullptr);
      },
      options.step, rng);
}

GradCheckReport contrastive_check(ContrastiveMode mode, DiscriminatorActivation activation,
                                  const GradCheckOptions& options, std::uint64_t seed) {
  const Graph g = gradcheck_graph(options, seed);
  Rng rng = make_rng(seed, std::string("gradcheck.") + mode_name(mode));
  const EncoderConfig config = small_config(options, 0);
  ContrastiveParts<double> parts;
  parts.table = cast_params<double>(init_attribute_table(config.attribute_width, rng));
  parts.stack = cast_params<double>(init_gnn_stack(config, rng));
  parts.disc = cast_params<double>(init_discriminator(config.hidden_width, rng));
  const SubgraphIndex index = precompute_subgraphs(g, 1);
  const PairBatch batch = epoch_pairs(mode, g, g.labels(), {}, seed, 1);
  return run_check(
      parts,
      [&](const ContrastiveParts<double>& p, ContrastiveParts<double>* grad) {
        return contrastive_loss<double>(p.stack, p.table, p.disc, activation, g, index, batch,
                                        grad ? &grad->stack : nullptr,
                                        grad ? &grad->table : nullptr,
                                        grad ? &grad->disc : nullptr);
      },
      options.step, rng);
}

}  // namespace

Graph gradcheck_graph(const GradCheckOptions& options, std::uint64_t seed) {
  Rng rng = make_rng(seed, "gradcheck.graph");
  const std::size_t n = options.nodes;
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (bernoulli(rng, options.edge_probability)) edges.push_back({u, v});
  std::vector<AttributeBits> attrs(n);
  for (auto& a : attrs) a = static_cast<AttributeBits>(uniform_index(rng, 128));
  std::vector<Label> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<Label>(i % 2);
  return build_graph(edges, n, std::move(attrs), std::move(labels));
}

GradCheckReport check_ig_gradients(const GradCheckOptions& options, std::uint64_t seed) {
  return ig_check(options, seed, 0);
}

GradCheckReport check_detector_gradients(const GradCheckOptions& options, std::uint64_t seed) {
  return ig_check(options, seed, 2 * options.hidden_width);
}

GradCheckReport check_sss_gradients(const GradCheckOptions& options, std::uint64_t seed) {
  return contrastive_check(ContrastiveMode::kSss, options.activation, options, seed);
}

GradCheckReport check_ss_gradients(const GradCheckOptions& options, std::uint64_t seed) {
  return contrastive_check(ContrastiveMode::kSs, options.activation, options, seed);
}

GradCheckReport check_ssa_gradients(const GradCheckOptions& options, std::uint64_t seed) {
  const Graph g = gradcheck_graph(options, seed);
  Rng rng = make_rng(seed, "gradcheck.ssa");
  const EncoderConfig config = small_config(options, 0);
  SsaParts<double> parts;
  parts.table = cast_params<double>(init_attribute_table(config.attribute_width, rng));
  parts.stack = cast_params<double>(init_gnn_stack(config, rng));
  parts.head = cast_params<double>(init_ssa_head(config.hidden_width, rng));
  const PseudoLabelSpec spec = make_pseudo_label_spec(1, 3);
  const std::vector<NodeId> targets = all_nodes(g);
  const EncoderPlan plan = masked_view_plan(g, targets);
  const InputRows rows = visible_and_masked_rows(g, spec.mask());
  const auto labels = pseudo_labels(g, spec);
  return run_check(
      parts,
      [&](const SsaParts<double>& p, SsaParts<double>* grad) {
        return ssa_loss<double>(p.stack, p.table, p.head, plan, rows, labels,
                                grad ? &grad->stack : nullptr, grad ? &grad->table : nullptr,
                                grad ? &grad->head : nullptr);
      },
      options.step, rng);
}

std::vector<NamedGradCheck> check_all_gradients(const GradCheckOptions& options, int seeds) {
  std::vector<NamedGradCheck> out;
  for (int s = 1; s <= seeds; ++s) {
    const auto seed = static_cast<std::uint64_t>(s);
    out.push_back({"ig", seed, check_ig_gradients(options, seed)});
    out.push_back({"detector", seed, check_detector_gradients(options, seed)});
    out.push_back({"sss", seed, check_sss_gradients(options, seed)});
    out.push_back({"ss", seed, check_ss_gradients(options, seed)});
    out.push_back({"ssa", seed, check_ssa_gradients(options, seed)});
  }
  return out;
}

}  // namespace sgrl
