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
#include <fstream>

#include "doctest.h"
#include "oracle.h"
#include "sgrl/graph.h"
#include "test_support.h"

namespace sgrl {
namespace {

std::vector<NodeId> to_vec(std::span<const NodeId> s) { return {s.begin(), s.end()}; }

TEST_CASE("build_graph merges duplicate and reversed edges") {
  const std::vector<Edge> edges{{0, 1}, {1, 0}, {0, 1}};
  const Graph g = build_graph(edges, 2, std::vector<AttributeBits>(2, 0));
  CHECK(g.edge_count() == 1);
  CHECK(to_vec(g.neighbors(0)) == std::vector<NodeId>{1});
  CHECK(to_vec(g.neighbors(1)) == std::vector<NodeId>{0});
}

TEST_CASE("build_graph: isolated nodes and degrees") {
  const Graph empty = build_graph({}, 3, std::vector<AttributeBits>(3, 0));
  for (NodeId i = 0; i < 3; ++i) CHECK(empty.degree(i) == 0);
  const Graph path = testing::path_graph(3);
  CHECK(path.degree(0) == 1);
  CHECK(path.degree(1) == 2);
  CHECK(path.degree(2) == 1);
}

TEST_CASE("build_graph drops self loops and validates input") {
  const std::vector<Edge> loops{{0, 0}, {0, 1}};
  const Graph g = build_graph(loops, 2, std::vector<AttributeBits>(2, 0));
  CHECK(to_vec(g.neighbors(0)) == std::vector<NodeId>{1});

  const std::vector<Edge> bad{{0, 5}};
  try {
    build_graph(bad, 2, std::vector<AttributeBits>(2, 0));
    FAIL("expected out of range");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOutOfRange);
  }
  std::vector<std::array<int, kNumAttributes>> rows(2, {0, 0, 0, 0, 0, 0, 0});
  rows[1][3] = 2;
  try {
    build_graph(std::span<const Edge>{}, 2, rows);
    FAIL("expected data error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kData);
  }
}

TEST_CASE("adjacency symmetric, sorted, layout reproducible") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Graph g = testing::random_graph(30, 0.15, seed);
    for (NodeId i = 0; i < g.node_count(); ++i) {
      const auto nb = g.neighbors(i);
      CHECK(std::is_sorted(nb.begin(), nb.end()));
      CHECK(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
      for (NodeId j : nb) {
        CHECK(j != i);
        const auto back = g.neighbors(j);
        CHECK(std::binary_search(back.begin(), back.end(), i));
      }
    }
    const Graph again = testing::random_graph(30, 0.15, seed);
    CHECK(std::equal(g.offsets().begin(), g.offsets().end(), again.offsets().begin(),
                     again.offsets().end()));
    CHECK(std::equal(g.adjacency().begin(), g.adjacency().end(), again.adjacency().begin(),
                     again.adjacency().end()));
  }
}

TEST_CASE("khop_subgraph examples") {
  const Graph path = testing::path_graph(3);
  CHECK(khop_subgraph(path, 1, 1) == std::vector<NodeId>{0, 1, 2});
  CHECK(khop_subgraph(path, 0, 2) == std::vector<NodeId>{0, 1, 2});
  CHECK(khop_subgraph(path, 0, 1) == std::vector<NodeId>{0, 1});
  const Graph iso = build_graph({}, 2, std::vector<AttributeBits>(2, 0));
  CHECK(khop_subgraph(iso, 1, 3) == std::vector<NodeId>{1});
  CHECK_THROWS_AS(khop_subgraph(path, 7, 1), Error);
  CHECK_THROWS_AS(khop_subgraph(path, 0, 0), Error);
}

TEST_CASE("khop_subgraph equals BFS oracle") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const std::size_t n = 5 + seed % 45;
    const Graph g = testing::random_graph(n, 3.0 / n, seed);
    for (int k = 1; k <= 3; ++k) {
      const SubgraphIndex index = precompute_subgraphs(g, k);
      CHECK(index.hops() == k);
      for (NodeId i = 0; i < n; ++i) {
        const auto expected = oracle::khop(g, i, k);
        CHECK(khop_subgraph(g, i, k) == expected);
        CHECK(to_vec(index[i]) == expected);
      }
    }
  }
}

TEST_CASE("precompute_subgraphs on star and complete graphs") {
  const std::vector<Edge> star{{0, 1}, {0, 2}, {0, 3}};
  const SubgraphIndex s = precompute_subgraphs(build_graph(star, 4, std::vector<AttributeBits>(4, 0)), 1);
  CHECK(s[0].size() == 4);
  for (NodeId leaf = 1; leaf < 4; ++leaf) CHECK(s[leaf].size() == 2);

  std::vector<Edge> k4;
  for (NodeId u = 0; u < 4; ++u)
    for (NodeId v = u + 1; v < 4; ++v) k4.push_back({u, v});
  const SubgraphIndex c = precompute_subgraphs(build_graph(k4, 4, std::vector<AttributeBits>(4, 0)), 1);
  for (NodeId i = 0; i < 4; ++i) CHECK(c[i].size() == 4);
}

TEST_CASE("file round trip with external ids") {
  const auto dir = testing::temp_dir("graph_io");
  {
    std::ofstream a(dir / "attrs.csv");
    a << "node_id,a0,a1,a2,a3,a4,a5,a6\n"
      << "10,1,0,0,0,0,0,1\n"
      << "20,0,1,0,0,0,0,0\n"
      << "30,0,0,0,0,0,0,0\n";
    std::ofstream e(dir / "edges.tsv");
    e << "10\t20\n20\t10\n30\t30\n";
    std::ofstream l(dir / "labels.csv");
    l << "node_id,label\n20,1\n30,0\n";
  }
  const Graph g = load_graph(DatasetPaths::in_directory(dir));
  REQUIRE(g.node_count() == 3);
  CHECK(g.edge_count() == 1);
  CHECK(g.external_id(0) == "10");
  CHECK(g.attributes(0) == 0b1000001);
  CHECK(g.label(0) == kUnlabeled);
  CHECK(g.label(1) == 1);
  CHECK(g.label(2) == 0);

  const auto out = testing::temp_dir("graph_io_out");
  write_edges_tsv(out / "edges.tsv", g);
  write_attributes_csv(out / "attrs.csv", g);
  write_labels_csv(out / "labels.csv", g, g.labels());
  const Graph h = load_graph(DatasetPaths::in_directory(out));
  CHECK(std::equal(g.adjacency().begin(), g.adjacency().end(), h.adjacency().begin(),
                   h.adjacency().end()));
  CHECK(std::equal(g.labels().begin(), g.labels().end(), h.labels().begin(), h.labels().end()));
  CHECK(h.external_id(2) == "30");
}

TEST_CASE("malformed files are data errors") {
  const auto dir = testing::temp_dir("graph_bad");
  {
    std::ofstream a(dir / "attrs.csv");
    a << "node_id,a0,a1,a2,a3,a4,a5,a6\n0,1,0,0,0,0,0\n";
    std::ofstream e(dir / "edges.tsv");
  }
  try {
    load_graph(DatasetPaths::in_directory(dir));
    FAIL("expected data error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kData);
  }
  {
    std::ofstream a(dir / "attrs.csv");
    a << "node_id,a0,a1,a2,a3,a4,a5,a6\n0,1,0,0,0,0,0,0\n";
    std::ofstream e(dir / "edges.tsv");
    e << "0\t9\n";
  }
  try {
    load_graph(DatasetPaths::in_directory(dir));
    FAIL("expected out of range");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOutOfRange);
  }
  {
    std::ofstream e(dir / "edges.tsv");
    e << "0 x\n";
  }
  CHECK_THROWS_AS(load_graph(DatasetPaths::in_directory(dir)), Error);
  CHECK_THROWS_AS(load_graph(DatasetPaths::in_directory(dir / "missing")), Error);
}

}  // namespace
}  // namespace sgrl
