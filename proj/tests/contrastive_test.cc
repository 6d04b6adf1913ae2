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


#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "oracle.h"
#include "sgrl/contrastive.h"
#include "test_support.h"

namespace sgrl {
namespace {

DiscriminatorParams random_discriminator(int f1, std::uint64_t seed) {
  Rng rng(seed);
  DiscriminatorParams d = init_discriminator(f1, rng);
  std::normal_distribution<float> normal(0.0f, 0.3f);
  d.b1 = Tensor({static_cast<std::size_t>(f1)});
  for (auto& v : d.b1.values()) v = normal(rng);
  d.b2 = Tensor::vector({normal(rng)});
  return d;
}

Tensor random_rows(std::size_t n, std::size_t f, std::uint64_t seed) {
  Rng rng(seed);
  Tensor h({n, f});
  for (auto& v : h.values()) v = static_cast<float>(uniform01(rng) * 2 - 1);
  return h;
}

Tensor row(const Tensor& h, NodeId i) {
  const std::size_t f = h.dim(1);
  return Tensor({f}, std::vector<float>(&h.at(i, 0), &h.at(i, 0) + f));
}

TEST_CASE("readout examples") {
  const Tensor h = Tensor::matrix(3, 2, {1, 0, 0, 1, 4, 4});
  const NodeId self[] = {2};
  CHECK(readout(h, self) == Tensor::vector({4, 4}));
  const NodeId two[] = {0, 1};
  CHECK(readout(h, two) == Tensor::vector({0.5f, 0.5f}));
  const Tensor same = Tensor::matrix(3, 2, {3, -1, 3, -1, 3, -1});
  const NodeId all[] = {0, 1, 2};
  CHECK(readout(same, all) == Tensor::vector({3, -1}));
  CHECK_THROWS_AS(readout(h, {}), Error);
}

TEST_CASE("readout is permutation invariant") {
  const Tensor h = random_rows(6, 4, 3);
  const NodeId a[] = {0, 2, 3, 5};
  const NodeId b[] = {5, 3, 0, 2};
  const Tensor ra = readout(h, a);
  const Tensor rb = readout(h, b);
  for (std::size_t k = 0; k < 4; ++k) CHECK(ra[k] == doctest::Approx(rb[k]).epsilon(1e-7));
}

TEST_CASE("discriminate: zero params, range, oracle") {
  Rng rng(1);
  DiscriminatorParams zero = init_discriminator(4, rng);
  zero.w1.fill(0);
  zero.w2.fill(0);
  const Tensor h = random_rows(2, 4, 9);
  CHECK(discriminate(zero, row(h, 0), row(h, 1)) == 0.5);

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const DiscriminatorParams d = random_discriminator(4, seed);
    const Tensor x = random_rows(2, 4, seed + 100);
    const double p = discriminate(d, row(x, 0), row(x, 1));
    const double p_linear =
        discriminate(d, row(x, 0), row(x, 1), DiscriminatorActivation::kLinear);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
    oracle::Vec hv(x.values().begin(), x.values().begin() + 4);
    oracle::Vec sv(x.values().begin() + 4, x.values().end());
    const oracle::Vec z = oracle::matvec(d.w1, d.b1, oracle::concat(hv, sv));
    CHECK(std::abs(p - oracle::sigmoid(oracle::dot(d.w2, oracle::relu(z)) + d.b2[0])) < 1e-6);
    CHECK(std::abs(p_linear - oracle::sigmoid(oracle::dot(d.w2, z) + d.b2[0])) < 1e-6);
  }
  CHECK_THROWS_AS(discriminate(zero, row(h, 0), Tensor({3})), Error);
}

TEST_CASE("sample_pairs_sss") {
  const Graph two = testing::path_graph(2);
  Rng rng(1);
  const PairBatch forced = sample_pairs_sss(two, rng);
  REQUIRE(forced.pairs.size() == 2);
  CHECK(forced.pairs[0].positive == 0);
  CHECK(forced.pairs[0].negative == 1);
  CHECK(forced.pairs[1].negative == 0);

  const Graph g = testing::random_graph(30, 0.1, 2);
  const PairBatch b = sample_pairs_sss(g, rng);
  REQUIRE(b.pairs.size() == 30);
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(b.pairs[i].positive == i);
    CHECK(b.pairs[i].negative != i);
    CHECK(b.pairs[i].negative < 30);
  }
  CHECK_THROWS_AS(sample_pairs_sss(testing::path_graph(1), rng), Error);
}

TEST_CASE("sss negatives are roughly uniform") {
  const Graph g = testing::path_graph(5);
  Rng rng(7);
  std::vector<int> counts(5, 0);
  for (int r = 0; r < 4000; ++r) counts[sample_pairs_sss(g, rng).pairs[0].negative]++;
  CHECK(counts[0] == 0);
  for (int k = 1; k < 5; ++k) CHECK(std::abs(counts[k] - 1000) < 150);
}

TEST_CASE("epoch_pairs is seeded per epoch") {
  const Graph g = testing::random_graph(40, 0.1, 3);
  const auto labels = g.labels();
  auto negatives = [](const PairBatch& b) {
    std::vector<NodeId> n;
    for (const auto& p : b.pairs) n.push_back(p.negative);
    return n;
  };
  const PairBatch a = epoch_pairs(ContrastiveMode::kSss, g, labels, {}, 5, 1);
  const PairBatch again = epoch_pairs(ContrastiveMode::kSss, g, labels, {}, 5, 1);
  const PairBatch next = epoch_pairs(ContrastiveMode::kSss, g, labels, {}, 5, 2);
  CHECK(negatives(a) == negatives(again));
  CHECK(negatives(a) != negatives(next));
  CHECK(a.epoch == 1);
  CHECK(next.epoch == 2);
}

TEST_CASE("sample_pairs_ss") {
  const Graph g = testing::path_graph(4);
  std::vector<Label> labels{kUnlabeled, 1, 0, kUnlabeled};
  Rng rng(1);
  const PairBatch b = sample_pairs_ss(g, labels, rng);
  REQUIRE(b.pairs.size() == 1);
  CHECK(b.pairs[0].positive == 1);
  CHECK(b.pairs[0].negative == 2);

  const Graph big = testing::random_graph(50, 0.1, 4);
  std::vector<Label> partial(big.labels().begin(), big.labels().end());
  for (std::size_t i = 0; i < partial.size(); i += 3) partial[i] = kUnlabeled;
  std::size_t bmas = 0;
  for (Label l : partial) bmas += (l == 1);
  for (int r = 0; r < 20; ++r) {
    const PairBatch p = sample_pairs_ss(big, partial, rng);
    CHECK(p.pairs.size() == bmas);
    for (const auto& pair : p.pairs) {
      CHECK(partial[pair.positive] == 1);
      CHECK(partial[pair.negative] == 0);
    }
  }
  std::vector<Label> only_bma{1, 1, kUnlabeled, 1};
  CHECK_THROWS_AS(sample_pairs_ss(g, only_bma, rng), Error);
}

TEST_CASE("mi_loss examples") {
  const double half[] = {0.5, 0.5, 0.5};
  CHECK(mi_loss_from_probabilities(half, half) == doctest::Approx(2 * std::log(2.0)).epsilon(1e-9));
  const double pos[] = {0.8};
  const double neg[] = {0.3};
  CHECK(mi_loss_from_probabilities(pos, neg) == doctest::Approx(0.579818).epsilon(1e-6));
  const double sure_pos[] = {1.0 - 1e-9};
  const double sure_neg[] = {1e-9};
  CHECK(mi_loss_from_probabilities(sure_pos, sure_neg) < 1e-6);
  CHECK(mi_loss_from_probabilities(sure_pos, sure_neg) >= 0.0);
}

TEST_CASE("mi_loss with an uninformative discriminator is 2 ln 2 on any graph") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Graph g = testing::random_graph(15 + seed, 0.2, seed);
    const SubgraphIndex index = precompute_subgraphs(g, 1);
    Rng rng(seed);
    DiscriminatorParams d = init_discriminator(5, rng);
    d.w2.fill(0);
    const Tensor h = random_rows(g.node_count(), 5, seed);
    const PairBatch b = sample_pairs_sss(g, rng);
    CHECK(std::abs(mi_loss(d, h, index, b) - 2 * std::log(2.0)) < 1e-6);
  }
}

TEST_CASE("mi_loss matches a per-pair oracle") {
  const Graph g = testing::random_graph(12, 0.3, 6);
  const SubgraphIndex index = precompute_subgraphs(g, 1);
  const DiscriminatorParams d = random_discriminator(4, 6);
  const Tensor h = random_rows(12, 4, 16);
  Rng rng(6);
  const PairBatch b = sample_pairs_sss(g, rng);
  for (auto act : {DiscriminatorActivation::kRelu, DiscriminatorActivation::kLinear}) {
    std::vector<double> pos, neg;
    for (const auto& p : b.pairs) {
      const Tensor s = readout(h, index[p.positive]);
      pos.push_back(discriminate(d, row(h, p.positive), s, act));
      neg.push_back(discriminate(d, row(h, p.negative), s, act));
    }
    CHECK(mi_loss(d, h, index, b, act) ==
          doctest::Approx(mi_loss_from_probabilities(pos, neg)).epsilon(1e-6));
  }
}

TEST_CASE("train_contrastive: runs self-supervised, deterministic, rejects SS without labels") {
  EncoderConfig c;
  c.attribute_width = 2;
  c.hidden_width = 4;
  c.input_width = 14;
  ContrastiveOptions o;
  o.train.max_epochs = 5;
  o.train.learning_rate = 1e-2;
  o.train.seed = 3;

  const Graph two = testing::path_graph(2);
  const SubgraphIndex two_index = precompute_subgraphs(two, 1);
  const ContrastiveModel m2 = train_contrastive(ContrastiveMode::kSss, two, two_index, {}, c, o);
  CHECK(m2.history.losses.size() == 5);

  const Graph g = testing::random_graph(20, 0.2, 3);
  const SubgraphIndex index = precompute_subgraphs(g, 1);
  for (ContrastiveMode mode : {ContrastiveMode::kSss, ContrastiveMode::kSs}) {
    const ContrastiveModel a = train_contrastive(mode, g, index, g.labels(), c, o);
    const ContrastiveModel b = train_contrastive(mode, g, index, g.labels(), c, o);
    CHECK(a.history.losses == b.history.losses);
    CHECK(a.stack.layers[1].out_weight == b.stack.layers[1].out_weight);
    CHECK(a.disc.w1 == b.disc.w1);
    CHECK(a.table.vectors == b.table.vectors);
  }
  const std::vector<Label> none(g.node_count(), kUnlabeled);
  CHECK_THROWS_AS(train_contrastive(ContrastiveMode::kSs, g, index, none, c, o), Error);
}

TEST_CASE("train_contrastive reduces the MI loss") {
  EncoderConfig c;
  c.attribute_width = 4;
  c.hidden_width = 8;
  c.input_width = 28;
  ContrastiveOptions o;
  o.train.max_epochs = 60;
  o.train.learning_rate = 1e-2;
  const Graph g = testing::random_graph(40, 0.08, 8);
  const SubgraphIndex index = precompute_subgraphs(g, 1);
  const ContrastiveModel m = train_contrastive(ContrastiveMode::kSss, g, index, {}, c, o);
  double first = 0, last = 0;
  for (int k = 0; k < 5; ++k) {
    first += m.history.losses[k];
    last += m.history.losses[m.history.losses.size() - 1 - k];
  }
  CHECK(last < first);
}

TEST_CASE("activation names round trip") {
  for (auto act : {DiscriminatorActivation::kRelu, DiscriminatorActivation::kLinear})
    CHECK(parse_activation(activation_name(act)) == act);
  CHECK_THROWS_AS(parse_activation("tanh"), Error);
}

}  // namespace
}  // namespace sgrl
