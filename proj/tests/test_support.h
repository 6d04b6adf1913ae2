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

#ifndef SGRL_TESTS_TEST_SUPPORT_H_
#define SGRL_TESTS_TEST_SUPPORT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "sgrl/graph.h"
#include "sgrl/rng.h"

namespace sgrl::testing {

// Erdos-Renyi graph with random attributes and labels on every node.
inline Graph random_graph(std::size_t n, double edge_p, std::uint64_t seed,
                          bool labeled = true) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (bernoulli(rng, edge_p)) edges.push_back({u, v});
  std::vector<AttributeBits> attrs(n);
  for (auto& a : attrs) a = static_cast<AttributeBits>(uniform_index(rng, 128));
  std::vector<Label> labels;
  if (labeled) {
    labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<Label>(i % 2);
  }
  return build_graph(edges, n, std::move(attrs), std::move(labels));
}

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return build_graph(edges, n, std::vector<AttributeBits>(n, 0));
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("sgrl_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace sgrl::testing

#endif  // SGRL_TESTS_TEST_SUPPORT_H_
