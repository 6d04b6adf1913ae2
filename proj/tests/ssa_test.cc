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
#include <random>

#include "doctest.h"
#include "oracle.h"
#include "sgrl/ssa.h"
#include "test_support.h"

namespace sgrl {
namespace {

EncoderConfig small_config(int hidden = 6) {
  EncoderConfig c;
  c.attribute_width = 3;
  c.hidden_width = hidden;
  c.input_width = 21;
  return c;
}

SsaModel random_model(std::uint64_t seed, const PseudoLabelSpec& spec, int hidden = 6) {
  Rng rng(seed);
  SsaModel m;
  m.config = small_config(hidden);
  m.table = init_attribute_table(3, rng);
  m.stack = init_gnn_stack(m.config, rng);
  m.head = init_ssa_head(hidden, rng);
  m.spec = spec;
  std::normal_distribution<float> normal(0.0f, 0.3f);
  m.visit([&](const std::string&, Tensor& t) {
    if (t.rank() == 1) for (auto& v : t.values()) v = normal(rng);
  });
  return m;
}

std::array<double, 2> oracle_forward(const SsaModel& m, const Graph& g, NodeId target) {
  const std::uint8_t mask = m.spec.mask();
  const auto h = oracle::encode_graph(m.stack, m.table, g,
                                      [&](NodeId j) { return j == target ? mask : 0; });
  const oracle::Vec z = oracle::matvec(m.head.w1, m.head.b1, h[target]);
  const oracle::Vec r = oracle::matvec(m.head.w2, m.head.b2, z);
  return {oracle::sigmoid(r[0]), oracle::sigmoid(r[1])};
}

Graph star(std::size_t leaves) {
  std::vector<Edge> edges;
  for (NodeId k = 1; k <= leaves; ++k) edges.push_back({0, k});
  std::vector<AttributeBits> attrs;
  for (std::size_t k = 0; k <= leaves; ++k) attrs.push_back(static_cast<AttributeBits>((37 * k + 11) % 128));
  return build_graph(edges, leaves + 1, attrs);
}

TEST_CASE("select_pseudo_labels examples") {
  const double a[] = {0.1, 0.3, 0.05, 0.25, 0.1, 0.1, 0.1};
  CHECK(select_pseudo_labels(a).indices == std::array<int, 2>{1, 3});
  const double equal[] = {1, 1, 1, 1, 1, 1, 1};
  CHECK(select_pseudo_labels(equal).indices == std::array<int, 2>{0, 1});
  const double tail[] = {0, 0, 0, 0, 0, 0.9, 0.8};
  CHECK(select_pseudo_labels(tail).indices == std::array<int, 2>{5, 6});
  const double reversed[] = {0, 0.2, 0, 0, 0, 0, 0.7};
  const PseudoLabelSpec s = select_pseudo_labels(reversed);
  CHECK(s.indices == std::array<int, 2>{1, 6});
  CHECK(s.importance[6] == 0.7);
  CHECK(s.mask() == ((1 << 1) | (1 << 6)));
}

TEST_CASE("select_pseudo_labels property: two distinct ascending top scores") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::array<double, 7> s{};
    for (auto& v : s) v = static_cast<double>(uniform_index(rng, 4));
    const auto idx = select_pseudo_labels(s).indices;
    CHECK(idx[0] < idx[1]);
    for (int k = 0; k < 7; ++k) {
      if (k == idx[0] || k == idx[1]) continue;
      CHECK(s[k] <= std::min(s[idx[0]], s[idx[1]]));
      // A tied unselected attribute must have a larger index than the tied selected one.
      if (s[k] == s[idx[0]] && s[idx[0]] <= s[idx[1]]) CHECK(k > idx[0]);
      if (s[k] == s[idx[1]] && s[idx[1]] <= s[idx[0]]) CHECK(k > idx[1]);
    }
  }
}

TEST_CASE("replace_attributes examples") {
  const PseudoLabelSpec spec = make_pseudo_label_spec(1, 3);
  CHECK(replace_attributes(0, spec, {0.9, 0.1}, 0.5) == 0b0000010);
  CHECK(replace_attributes(0, spec, {0.5, 0.5}, 0.5) == 0b0001010);
  CHECK(replace_attributes(0b1111111, spec, {0.2, 0.3}, 0.5) == 0b1110101);
  const AttributeBits a = 0b1001010;
  CHECK(replace_attributes(a, spec, {0.7, 0.6}, 0.5) == a);
  CHECK(make_pseudo_label_spec(3, 1).indices == std::array<int, 2>{1, 3});
  CHECK_THROWS_AS(make_pseudo_label_spec(2, 2), Error);
  CHECK_THROWS_AS(make_pseudo_label_spec(0, 7), Error);
}

TEST_CASE("gmml_loss examples") {
  const Tensor half = Tensor::matrix(3, 2, {0.5f, 0.5f, 0.5f, 0.5f, 0.5f, 0.5f});
  const std::array<int, 2> y3[] = {{1, 0}, {0, 0}, {1, 1}};
  CHECK(gmml_loss(half, y3) == doctest::Approx(3 * std::log(2.0)).epsilon(1e-6));
  const Tensor r = Tensor::matrix(1, 2, {0.8f, 0.3f});
  const std::array<int, 2> y1[] = {{1, 0}};
  CHECK(gmml_loss(r, y1) == doctest::Approx(0.289909).epsilon(1e-6));
  const Tensor perfect = Tensor::matrix(2, 2, {1.0f, 0.0f, 0.0f, 1.0f});
  const std::array<int, 2> yp[] = {{1, 0}, {0, 1}};
  CHECK(gmml_loss(perfect, yp) < 1e-5 * 2);
  CHECK(gmml_loss(perfect, yp) >= 0.0);
}

TEST_CASE("pseudo_labels read the spec attributes") {
  const Graph g = build_graph({}, 2, std::vector<AttributeBits>{0b0001010, 0b0000010});
  const auto y = pseudo_labels(g, make_pseudo_label_spec(1, 3));
  CHECK(y[0] == std::array<int, 2>{1, 1});
  CHECK(y[1] == std::array<int, 2>{1, 0});
}

TEST_CASE("ssa forward: zero head gives one half") {
  SsaModel m = random_model(1, make_pseudo_label_spec(1, 3));
  m.head.w2.fill(0);
  m.head.b2.fill(0);
  const Graph g = star(4);
  for (NodeId i = 0; i < 5; ++i) {
    const auto r = ssa_forward_one(m, g, i);
    CHECK(r[0] == 0.5);
    CHECK(r[1] == 0.5);
  }
}

TEST_CASE("ssa forward matches the masked-view oracle on a star") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const SsaModel m = random_model(seed, make_pseudo_label_spec(2, 5));
    const Graph g = star(4);
    const Tensor all = ssa_predict(m, g);
    for (NodeId i = 0; i < 5; ++i) {
      const auto expected = oracle_forward(m, g, i);
      const auto one = ssa_forward_one(m, g, i);
      for (int j = 0; j < 2; ++j) {
        CHECK(std::abs(one[j] - expected[j]) < 1e-6);
        CHECK(std::abs(all.at(i, j) - expected[j]) < 1e-6);
      }
    }
  }
}

TEST_CASE("ssa forward matches the oracle on random graphs") {
  const SsaModel m = random_model(9, make_pseudo_label_spec(0, 6));
  const Graph g = testing::random_graph(12, 0.3, 9);
  const Tensor all = ssa_predict(m, g);
  for (NodeId i = 0; i < 12; ++i) {
    const auto expected = oracle_forward(m, g, i);
    for (int j = 0; j < 2; ++j) CHECK(std::abs(all.at(i, j) - expected[j]) < 1e-6);
  }
}

TEST_CASE("masked slots equal to true slots reproduce the unmasked forward") {
  SsaModel m = random_model(4, make_pseudo_label_spec(1, 3));
  const Graph g = testing::random_graph(10, 0.3, 4);
  std::vector<AttributeBits> attrs(g.all_attributes().begin(), g.all_attributes().end());
  for (auto& x : attrs) x |= m.spec.mask();
  const Graph present = g.with_attributes(attrs);
  for (int a : m.spec.indices) {
    std::copy_n(m.table.slot(a, AttributeState::kPresent), 3, m.table.slot(a, AttributeState::kMasked));
  }
  const Tensor masked = ssa_predict(m, present);
  const auto h = oracle::encode_graph(m.stack, m.table, present);
  for (NodeId i = 0; i < 10; ++i) {
    const oracle::Vec z = oracle::matvec(m.head.w1, m.head.b1, h[i]);
    const oracle::Vec r = oracle::matvec(m.head.w2, m.head.b2, z);
    for (int j = 0; j < 2; ++j) CHECK(std::abs(masked.at(i, j) - oracle::sigmoid(r[j])) < 1e-6);
  }
}

TEST_CASE("masked view locality") {
  const SsaModel m = random_model(5, make_pseudo_label_spec(1, 3));
  // Path 0-1-2-3-4-5: node 0's receptive field is {0,1,2}.
  std::vector<Edge> edges;
  for (NodeId i = 0; i < 5; ++i) edges.push_back({i, i + 1});
  std::vector<AttributeBits> attrs{3, 17, 40, 5, 9, 100};
  const Graph g = build_graph(edges, 6, attrs);
  const auto base = ssa_forward_one(m, g, 0);
  attrs[3] = 127;
  attrs[5] = 0;
  const auto far = ssa_forward_one(m, build_graph(edges, 6, attrs), 0);
  CHECK(base == far);
  attrs[2] = 0;
  const auto near = ssa_forward_one(m, build_graph(edges, 6, attrs), 0);
  CHECK(base != near);
}

TEST_CASE("a target's own masked bits are hidden from its prediction") {
  const SsaModel m = random_model(6, make_pseudo_label_spec(1, 3), 16);
  const Graph g = testing::random_graph(10, 0.3, 6);
  std::vector<AttributeBits> attrs(g.all_attributes().begin(), g.all_attributes().end());
  const NodeId target = 4;
  const auto before = ssa_forward_one(m, g, target);
  attrs[target] ^= m.spec.mask();
  const Graph flipped = g.with_attributes(attrs);
  CHECK(ssa_forward_one(m, flipped, target) == before);
  // Other nodes whose receptive field contains the target do see the change.
  REQUIRE(g.degree(target) > 0);
  int changed = 0;
  for (NodeId j : g.neighbors(target)) {
    changed += ssa_forward_one(m, flipped, j) != ssa_forward_one(m, g, j);
  }
  CHECK(changed > 0);
}

TEST_CASE("train_ssa lowers the loss and is deterministic") {
  const Graph g = testing::random_graph(30, 0.1, 7);
  TrainOptions o;
  o.max_epochs = 40;
  o.learning_rate = 1e-2;
  o.seed = 2;
  const PseudoLabelSpec spec = make_pseudo_label_spec(1, 3);
  const SsaModel a = train_ssa(g, spec, small_config(), o);
  const SsaModel b = train_ssa(g, spec, small_config(), o);
  CHECK(a.history.losses.back() < a.history.losses.front());
  CHECK(a.history.losses == b.history.losses);
  CHECK(a.head.w1 == b.head.w1);
  CHECK(a.spec == spec);
  EncoderConfig odd = small_config();
  odd.hidden_width = 5;
  CHECK_THROWS_AS(train_ssa(g, spec, odd, o), Error);
}

TEST_CASE("fit_pseudo_labels finds planted attributes") {
  // Labels depend only on attributes 2 and 5.
  Rng rng(11);
  const std::size_t n = 400;
  std::vector<AttributeBits> attrs(n);
  std::vector<Label> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    attrs[i] = static_cast<AttributeBits>(uniform_index(rng, 128));
    const bool signal = attribute_set(attrs[i], 2) && attribute_set(attrs[i], 5);
    labels[i] = static_cast<Label>(bernoulli(rng, signal ? 0.9 : 0.05));
  }
  const Graph g = build_graph({}, n, attrs, labels);
  std::vector<NodeId> train, valid;
  for (NodeId i = 0; i < n; ++i) (i % 5 == 0 ? valid : train).push_back(i);
  const PseudoLabelSpec spec = fit_pseudo_labels(g, train, valid, GbdtConfig{}, 1);
  CHECK(spec.indices == std::array<int, 2>{2, 5});
  const PseudoLabelSpec again = fit_pseudo_labels(g, train, valid, GbdtConfig{}, 1);
  CHECK(again == spec);
}

}  // namespace
}  // namespace sgrl
