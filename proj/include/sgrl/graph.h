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

#ifndef SGRL_GRAPH_H_
#define SGRL_GRAPH_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sgrl {

using NodeId = std::uint32_t;

inline constexpr int kNumAttributes = 7;

// Binary attribute vector, bit a set <=> attribute a present.
using AttributeBits = std::uint8_t;

inline bool attribute_set(AttributeBits bits, int a) { return (bits >> a) & 1u; }

// -1 unlabeled, 0 non-BMA, 1 BMA.
using Label = std::int8_t;
inline constexpr Label kUnlabeled = -1;

struct Edge {
  NodeId u;
  NodeId v;
};

// Immutable undirected graph in compressed adjacency form. Neighbor lists are
// sorted ascending, duplicate-free and contain no self-loops.
class Graph {
 public:
  Graph() = default;

  std::size_t node_count() const { return attributes_.size(); }
  std::size_t edge_count() const { return neighbors_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId i) const {
    return {neighbors_.data() + offsets_[i], neighbors_.data() + offsets_[i + 1]};
  }
  std::size_t degree(NodeId i) const { return offsets_[i + 1] - offsets_[i]; }

  AttributeBits attributes(NodeId i) const { return attributes_[i]; }
  std::span<const AttributeBits> all_attributes() const { return attributes_; }

  Label label(NodeId i) const { return labels_[i]; }
  std::span<const Label> labels() const { return labels_; }
  bool has_labels() const;

  // External identifiers, one per node, as read from attrs.csv.
  const std::string& external_id(NodeId i) const { return ids_[i]; }
  std::span<const std::string> external_ids() const { return ids_; }

  std::span<const std::size_t> offsets() const { return offsets_; }
  std::span<const NodeId> adjacency() const { return neighbors_; }

  // Same topology and attributes with a different label assignment.
  Graph with_labels(std::vector<Label> labels) const;
  // Same topology and labels with different attributes.
  Graph with_attributes(std::vector<AttributeBits> attributes) const;

 private:
  friend Graph build_graph(std::span<const Edge>, std::size_t,
                           std::vector<AttributeBits>, std::vector<Label>,
                           std::vector<std::string>);

  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> neighbors_;
  std::vector<AttributeBits> attributes_;
  std::vector<Label> labels_;
  std::vector<std::string> ids_;
};

// Deduplicates and symmetrizes edges, drops self-loops. labels may be empty
// (all unlabeled); ids may be empty (decimal indices are used).
Graph build_graph(std::span<const Edge> edges, std::size_t node_count,
                  std::vector<AttributeBits> attributes,
                  std::vector<Label> labels = {}, std::vector<std::string> ids = {});

// Convenience overload with attributes given as N x 7 rows of 0/1.
Graph build_graph(std::span<const Edge> edges, std::size_t node_count,
                  const std::vector<std::array<int, kNumAttributes>>& attribute_rows,
                  std::vector<Label> labels = {});

// Sorted node set within k hops of i, including i.
std::vector<NodeId> khop_subgraph(const Graph& g, NodeId i, int k);

// Per-node k-hop node sets, precomputed once (the sets are fixed).
class SubgraphIndex {
 public:
  SubgraphIndex() = default;
  SubgraphIndex(std::vector<std::size_t> offsets, std::vector<NodeId> members, int hops)
      : offsets_(std::move(offsets)), members_(std::move(members)), hops_(hops) {}

  std::span<const NodeId> operator[](NodeId i) const {
    return {members_.data() + offsets_[i], members_.data() + offsets_[i + 1]};
  }
  std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  int hops() const { return hops_; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> members_;
  int hops_ = 0;
};

SubgraphIndex precompute_subgraphs(const Graph& g, int k);

// ---- Files --------------------------------------------------------------
// edges.tsv   "u<TAB>v" per line
// attrs.csv   header "node_id,a0,a1,a2,a3,a4,a5,a6"
// labels.csv  header "node_id,label"; absent nodes are unlabeled

struct DatasetPaths {
  std::filesystem::path edges;
  std::filesystem::path attributes;
  std::filesystem::path labels;  // optional; empty path or missing file => no labels

  static DatasetPaths in_directory(const std::filesystem::path& dir);
};

Graph load_graph(const DatasetPaths& paths);

// Reads a labels.csv-format file into a per-node vector for an already loaded
// graph (used for ground_truth.csv at evaluation time).
std::vector<Label> load_labels(const std::filesystem::path& path, const Graph& g);
// Same, keyed by an explicit id list (one entry per node).
std::vector<Label> load_labels(const std::filesystem::path& path,
                               std::span<const std::string> ids);

void write_edges_tsv(const std::filesystem::path& path, const Graph& g);
void write_attributes_csv(const std::filesystem::path& path, const Graph& g);
void write_labels_csv(const std::filesystem::path& path, const Graph& g,
                      std::span<const Label> labels);

}  // namespace sgrl

#endif  // SGRL_GRAPH_H_
