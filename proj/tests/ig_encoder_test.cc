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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracle.h"
#include "sgrl/ig_encoder.h"
#include "test_support.h"

namespace sgrl {
namespace {

EncoderConfig tiny_config() {
  EncoderConfig c;
  c.attribute_width = 3;
  c.hidden_width = 6;
  c.input_width = 21;
  return c;
}

// Random biases so the oracle comparison exercises every term.
template <typename Params>
void jitter(Params& p, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<float> normal(0.0f, 0.3f);
  p.visit([&](const std::string&, Tensor& t) {
    if (t.rank() == 1) for (auto& v : t.values()) v = normal(rng);
  });
}

TEST_CASE("param_count closed form") {
  CHECK(param_count(2, 32, 56) == 17793);
  CHECK(param_count(2, 1, 1) == 27);
  CHECK(param_count(2, 128, 448) == 394753);
}

TEST_CASE("constructed encoder size") {
  // Exact sizes of the architecture as built: per layer the aggregation
  // weight sees the 3-way pooled input, plus self, output weights and biases.
  Rng rng(1);
  EncoderConfig small;
  EncoderConfig det;
  det.attribute_width = 64;
  det.hidden_width = 128;
  det.input_width = 448;
  auto expected = [](long long f1, long long f2) {
    const long long layer1 = f1 * 3 * f2 + f1 * f2 + 2 * f1 * f1 + 3 * f1;
    const long long layer2 = f1 * 3 * f1 + f1 * f2 + 2 * f1 * f1 + 3 * f1;
    const long long head = 4 * f1 * f1 + 4 * f1 + 1;
    return layer1 + layer2 + head;
  };
  CHECK(trainable_parameter_count(init_encoder(small, rng)) == expected(32, 56));
  CHECK(expected(32, 56) == 20545);
  CHECK(trainable_parameter_count(init_encoder(det, rng)) == expected(128, 448));
  CHECK(expected(128, 448) == 468225);
}

TEST_CASE("encode_attributes selects slots by state") {
  Rng rng(2);
  const AttributeTable t = init_attribute_table(4, rng);
  const Tensor zeros = encode_attributes(t, 0);
  const Tensor ones = encode_attributes(t, 0x7f);
  REQUIRE(zeros.size() == 28);
  for (int a = 0; a < 7; ++a) {
    for (int k = 0; k < 4; ++k) {
      CHECK(zeros[a * 4 + k] == t.slot(a, AttributeState::kAbsent)[k]);
      CHECK(ones[a * 4 + k] == t.slot(a, AttributeState::kPresent)[k]);
    }
  }
  const int masked[] = {1, 3};
  const AttributeBits bits = 0b0001010;
  const Tensor m = encode_attributes(t, bits, masked);
  for (int a = 0; a < 7; ++a) {
    const AttributeState expected = (a == 1 || a == 3) ? AttributeState::kMasked
                                    : attribute_set(bits, a) ? AttributeState::kPresent
                                                             : AttributeState::kAbsent;
    for (int k = 0; k < 4; ++k) CHECK(m[a * 4 + k] == t.slot(a, expected)[k]);
  }
  const int bad[] = {7};
  CHECK_THROWS_AS(encode_attributes(t, 0, bad), Error);
}

TEST_CASE("aggregate_neighbors examples") {
  const Tensor h = Tensor::matrix(3, 2, {1, 0, 0, 1, 2, 3});
  const NodeId two[] = {0, 1};
  CHECK(aggregate_neighbors(h, two) == Tensor::vector({0.5f, 0.5f, 1, 1, 1, 1}));
  const NodeId one[] = {2};
  CHECK(aggregate_neighbors(h, one) == Tensor::vector({2, 3, 2, 3, 2, 3}));
  CHECK(aggregate_neighbors(h, {}) == Tensor({6}));
}

TEST_CASE("gnn_layer: zero params give zero rows, isolated nodes use only h0") {
  Rng rng(3);
  const EncoderConfig c = tiny_config();
  GnnStack stack = init_gnn_stack(c, rng);
  const Graph g = testing::path_graph(3);
  Tensor h0({3, 21});
  for (auto& v : h0.values()) v = static_cast<float>(uniform01(rng));
  GnnLayerParams zero = zeros_like(stack.layers[0]);
  const Tensor out = gnn_layer(zero, h0, h0, g);
  for (float v : out.values()) CHECK(v == 0.0f);

  const Graph iso = build_graph({}, 1, std::vector<AttributeBits>(1, 0));
  const Tensor h0_one({1, 21}, std::vector<float>(h0.values().begin(), h0.values().begin() + 21));
  const Tensor a = gnn_layer(stack.layers[0], h0_one, h0_one, iso);
  GnnLayerParams no_agg = stack.layers[0];
  no_agg.agg_weight.fill(0.0f);
  const Tensor b = gnn_layer(no_agg, h0_one, h0_one, iso);
  CHECK(a == b);
}

TEST_CASE("gnn_layer matches the straight-line oracle on a path") {
  Rng rng(1);
  const EncoderConfig c = tiny_config();
  GnnStack stack = init_gnn_stack(c, rng);
  jitter(stack, 1);
  const Graph g = testing::path_graph(3);
  Tensor h0({3, 21});
  for (auto& v : h0.values()) v = static_cast<float>(uniform01(rng) - 0.5);
  const Tensor out = gnn_layer(stack.layers[0], h0, h0, g);
  for (NodeId i = 0; i < 3; ++i) {
    std::vector<oracle::Vec> nb;
    for (NodeId j : g.neighbors(i)) nb.push_back({&h0.at(j, 0), &h0.at(j, 0) + 21});
    const oracle::Vec self(&h0.at(i, 0), &h0.at(i, 0) + 21);
    const oracle::Vec expected = oracle::layer(stack.layers[0], nb, self, 21);
    for (std::size_t k = 0; k < 6; ++k) CHECK(out.at(i, k) == doctest::Approx(expected[k]).epsilon(1e-6));
  }
}

TEST_CASE("ig_forward matches the oracle on 10-node graphs") {
  const EncoderConfig c = tiny_config();
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Rng rng(seed);
    const Graph g = testing::random_graph(10, 0.3, seed);
    const AttributeTable table = init_attribute_table(c.attribute_width, rng);
    EncoderParams params = init_encoder(c, rng);
    jitter(params, seed);
    const IgOutput out = ig_forward(params, table, g);
    const auto h = oracle::encode_graph(params.stack, table, g);
    for (NodeId i = 0; i < 10; ++i) {
      for (std::size_t k = 0; k < 6; ++k) {
        CHECK(std::abs(out.representations.at(i, k) - h[i][k]) < 1e-6);
      }
      CHECK(std::abs(out.scores[i] - oracle::head(params.head, h[i])) < 1e-6);
    }
  }
}

TEST_CASE("ig_forward with a prefix matches the oracle") {
  EncoderConfig c = tiny_config();
  c.input_width = 4 + 21;
  Rng rng(8);
  const Graph g = testing::random_graph(10, 0.3, 8);
  const AttributeTable table = init_attribute_table(c.attribute_width, rng);
  EncoderParams params = init_encoder(c, rng);
  jitter(params, 8);
  Tensor prefix({10, 4});
  std::vector<oracle::Vec> pre(10);
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t k = 0; k < 4; ++k) {
      prefix.at(i, k) = static_cast<float>(uniform01(rng));
      pre[i].push_back(prefix.at(i, k));
    }
  }
  const IgOutput out = ig_forward(params, table, g, &prefix);
  const auto h = oracle::encode_graph(params.stack, table, g, nullptr, &pre);
  for (NodeId i = 0; i < 10; ++i) {
    CHECK(std::abs(out.scores[i] - oracle::head(params.head, h[i])) < 1e-6);
  }
}

TEST_CASE("ig_forward: zero head gives 0.5, scores in (0,1), unit-norm rows") {
  const EncoderConfig c = tiny_config();
  Rng rng(4);
  const Graph g = testing::random_graph(20, 0.2, 4);
  const AttributeTable table = init_attribute_table(c.attribute_width, rng);
  EncoderParams params = init_encoder(c, rng);
  const IgOutput out = ig_forward(params, table, g);
  for (NodeId i = 0; i < 20; ++i) {
    CHECK(out.scores[i] > 0.0f);
    CHECK(out.scores[i] < 1.0f);
    double sq = 0;
    for (std::size_t k = 0; k < 6; ++k) sq += double(out.representations.at(i, k)) * out.representations.at(i, k);
    const double norm = std::sqrt(sq);
    CHECK((norm == 0.0 || std::abs(norm - 1.0) <= 1e-5));
  }
  params.head = zeros_like(params.head);
  const IgOutput zero = ig_forward(params, table, g);
  for (float p : zero.scores.values()) CHECK(p == 0.5f);
}

TEST_CASE("neighbor-order invariance and inductiveness") {
  const EncoderConfig c = tiny_config();
  Rng rng(5);
  const Graph g = testing::random_graph(15, 0.25, 5);
  const AttributeTable table = init_attribute_table(c.attribute_width, rng);
  const EncoderParams params = init_encoder(c, rng);
  const IgOutput base = ig_forward(params, table, g);

  std::vector<Edge> edges;
  for (NodeId u = 0; u < 15; ++u)
    for (NodeId v : g.neighbors(u)) edges.push_back({v, u});
  std::shuffle(edges.begin(), edges.end(), rng);
  const Graph shuffled = build_graph(edges, 15, std::vector<AttributeBits>(
                                                    g.all_attributes().begin(), g.all_attributes().end()));
  CHECK(ig_forward(params, table, shuffled).scores == base.scores);

  // Disjoint union with another graph leaves the first graph's scores unchanged.
  const Graph other = testing::random_graph(7, 0.4, 6);
  std::vector<Edge> both = edges;
  for (NodeId u = 0; u < 7; ++u)
    for (NodeId v : other.neighbors(u)) both.push_back({u + 15, v + 15});
  std::vector<AttributeBits> attrs(g.all_attributes().begin(), g.all_attributes().end());
  attrs.insert(attrs.end(), other.all_attributes().begin(), other.all_attributes().end());
  const Graph combined = build_graph(both, 22, attrs);
  const IgOutput joint = ig_forward(params, table, combined);
  for (NodeId i = 0; i < 15; ++i) CHECK(joint.scores[i] == base.scores[i]);
}

TEST_CASE("targeted plan agrees with full forward") {
  const EncoderConfig c = tiny_config();
  Rng rng(6);
  const Graph g = testing::random_graph(25, 0.12, 6);
  const AttributeTable table = init_attribute_table(c.attribute_width, rng);
  const EncoderParams params = init_encoder(c, rng);
  const IgOutput full = ig_forward(params, table, g);
  const std::vector<NodeId> targets{3, 17, 4, 20};
  const EncoderPlan plan = targeted_plan(g, targets);
  const RowMatrix<float> x0 = encode_rows<float>(table, visible_rows(g), nullptr);
  StackCache<float> cache;
  const RowMatrix<float>& h = stack_forward(params.stack, plan, x0, cache);
  for (std::size_t k = 0; k < targets.size(); ++k) {
    for (Eigen::Index j = 0; j < h.cols(); ++j) {
      CHECK(h(k, j) == doctest::Approx(full.representations.at(targets[k], j)).epsilon(1e-6));
    }
  }
}

TEST_CASE("ig_train: loss decreases, rejects one class, deterministic") {
  EncoderConfig c = tiny_config();
  const Graph g = testing::random_graph(12, 0.3, 9);
  const std::vector<NodeId> two{0, 1};
  TrainOptions o;
  o.max_epochs = 200;
  o.learning_rate = 1e-2;
  o.seed = 4;
  const IgModel m = ig_train(g, two, c, o);
  REQUIRE(m.history.losses.size() == 200);
  CHECK(m.history.losses.back() < m.history.losses.front());

  const std::vector<NodeId> same{0, 2, 4};
  try {
    ig_train(g, same, c, o);
    FAIL("expected configuration error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfig);
  }
  const IgModel again = ig_train(g, two, c, o);
  CHECK(again.params.stack.layers[0].agg_weight == m.params.stack.layers[0].agg_weight);
  CHECK(again.params.head.w3 == m.params.head.w3);
  CHECK(again.table.vectors == m.table.vectors);
}

TEST_CASE("train_with_probe stops at the first decrease") {
  struct Counter {
    int value = 0;
  };
  Counter model;
  TrainOptions o;
  o.max_epochs = 20;
  const std::vector<double> aucs{0.6, 0.7, 0.75, 0.74, 0.9};
  std::size_t calls = 0;
  const TrainHistory h = train_with_probe<Counter>(
      model, o, [](Counter& m, int) { ++m.value; return 1.0; },
      [&](const Counter&) { return aucs[calls++]; });
  CHECK(h.probes.size() == 4);
  CHECK(h.selected_epoch == 3);
  CHECK(model.value == 3);
  for (std::size_t k = 0; k + 1 < h.probes.size(); ++k) {
    if (h.probes[k].epoch == h.selected_epoch) CHECK(h.probes[k].auc >= h.probes[k + 1].auc);
  }
}

}  // namespace
}  // namespace sgrl
