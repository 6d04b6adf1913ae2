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

#include "sgrl/graph.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "sgrl/error.h"

namespace sgrl {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && s[b] == ' ') ++b;
  return s.substr(b);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

std::string where(const std::filesystem::path& path, std::size_t line_no) {
  return path.filename().string() + ":" + std::to_string(line_no);
}

}  // namespace

bool Graph::has_labels() const {
  return std::any_of(labels_.begin(), labels_.end(),
                     [](Label l) { return l != kUnlabeled; });
}

Graph Graph::with_labels(std::vector<Label> labels) const {
  check(labels.size() == node_count(), ErrorCode::kDimension,
        "label vector has " + std::to_string(labels.size()) + " entries for " +
            std::to_string(node_count()) + " nodes");
  Graph g = *this;
  g.labels_ = std::move(labels);
  return g;
}

Graph Graph::with_attributes(std::vector<AttributeBits> attributes) const {
  check(attributes.size() == node_count(), ErrorCode::kDimension,
        "attribute vector has " + std::to_string(attributes.size()) + " entries for " +
            std::to_string(node_count()) + " nodes");
  for (AttributeBits a : attributes) {
    check(a < (1u << kNumAttributes), ErrorCode::kData, "attribute bits out of range");
  }
  Graph g = *this;
  g.attributes_ = std::move(attributes);
  return g;
}

Graph build_graph(std::span<const Edge> edges, std::size_t node_count,
                  std::vector<AttributeBits> attributes, std::vector<Label> labels,
                  std::vector<std::string> ids) {
  check(attributes.size() == node_count, ErrorCode::kData,
        "attribute table has " + std::to_string(attributes.size()) + " rows for " +
            std::to_string(node_count) + " nodes");
  for (std::size_t i = 0; i < node_count; ++i) {
    check(attributes[i] < (1u << kNumAttributes), ErrorCode::kData,
          "attribute vector of node " + std::to_string(i) + " is not 7-bit binary");
  }
  if (labels.empty()) labels.assign(node_count, kUnlabeled);
  check(labels.size() == node_count, ErrorCode::kData, "label vector size mismatch");
  for (Label l : labels) {
    check(l == kUnlabeled || l == 0 || l == 1, ErrorCode::kData,
          "labels must be 0, 1 or unlabeled");
  }
  if (ids.empty()) {
    ids.reserve(node_count);
    for (std::size_t i = 0; i < node_count; ++i) ids.push_back(std::to_string(i));
  }
  check(ids.size() == node_count, ErrorCode::kData, "id table size mismatch");

  std::vector<std::pair<NodeId, NodeId>> arcs;
  arcs.reserve(edges.size() * 2);
  for (const Edge& e : edges) {
    if (e.u >= node_count || e.v >= node_count) {
      fail(ErrorCode::kOutOfRange, "edge (" + std::to_string(e.u) + ", " +
                                       std::to_string(e.v) +
                                       ") has an endpoint outside [0, " +
                                       std::to_string(node_count) + ")");
    }
    if (e.u == e.v) continue;
    arcs.emplace_back(e.u, e.v);
    arcs.emplace_back(e.v, e.u);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  Graph g;
  g.offsets_.assign(node_count + 1, 0);
  for (const auto& [u, v] : arcs) ++g.offsets_[u + 1];
  for (std::size_t i = 0; i < node_count; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.neighbors_.reserve(arcs.size());
  for (const auto& arc : arcs) g.neighbors_.push_back(arc.second);
  g.attributes_ = std::move(attributes);
  g.labels_ = std::move(labels);
  g.ids_ = std::move(ids);
  return g;
}

Graph build_graph(std::span<const Edge> edges, std::size_t node_count,
                  const std::vector<std::array<int, kNumAttributes>>& attribute_rows,
                  std::vector<Label> labels) {
  std::vector<AttributeBits> bits;
  bits.reserve(attribute_rows.size());
  for (std::size_t i = 0; i < attribute_rows.size(); ++i) {
    AttributeBits b = 0;
    for (int a = 0; a < kNumAttributes; ++a) {
      const int v = attribute_rows[i][a];
      check(v == 0 || v == 1, ErrorCode::kData,
            "attribute " + std::to_string(a) + " of node " + std::to_string(i) +
                " is " + std::to_string(v) + ", expected 0 or 1");
      b |= static_cast<AttributeBits>(v << a);
    }
    bits.push_back(b);
  }
  return build_graph(edges, node_count, std::move(bits), std::move(labels));
}

std::vector<NodeId> khop_subgraph(const Graph& g, NodeId i, int k) {
  check(i < g.node_count(), ErrorCode::kOutOfRange,
        "node " + std::to_string(i) + " outside graph of " +
            std::to_string(g.node_count()) + " nodes");
  check(k >= 1, ErrorCode::kConfig, "hop count must be >= 1");
  std::vector<NodeId> frontier{i};
  std::vector<NodeId> seen{i};
  for (int hop = 0; hop < k && !frontier.empty(); ++hop) {
    std::vector<NodeId> next;
    for (NodeId u : frontier) {
      for (NodeId v : g.neighbors(u)) next.push_back(v);
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    std::vector<NodeId> fresh;
    std::set_difference(next.begin(), next.end(), seen.begin(), seen.end(),
                        std::back_inserter(fresh));
    std::vector<NodeId> merged;
    std::merge(seen.begin(), seen.end(), fresh.begin(), fresh.end(),
               std::back_inserter(merged));
    seen = std::move(merged);
    frontier = std::move(fresh);
  }
  return seen;
}

SubgraphIndex precompute_subgraphs(const Graph& g, int k) {
  check(k >= 1, ErrorCode::kConfig, "hop count must be >= 1");
  std::vector<std::size_t> offsets{0};
  std::vector<NodeId> members;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const auto set = khop_subgraph(g, i, k);
    members.insert(members.end(), set.begin(), set.end());
    offsets.push_back(members.size());
  }
  return SubgraphIndex(std::move(offsets), std::move(members), k);
}

DatasetPaths DatasetPaths::in_directory(const std::filesystem::path& dir) {
  return {dir / "edges.tsv", dir / "attrs.csv", dir / "labels.csv"};
}

namespace {

std::vector<Label> read_labels(const std::filesystem::path& path,
                               const std::unordered_map<std::string, NodeId>& index,
                               std::size_t node_count) {
  std::vector<Label> labels(node_count, kUnlabeled);
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || trim(line) != "node_id,label") {
    fail(ErrorCode::kData, path.filename().string() +
                               ": expected header \"node_id,label\"");
  }
  ++line_no;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 2) {
      fail(ErrorCode::kData, where(path, line_no) + ": expected 2 fields");
    }
    auto it = index.find(trim(fields[0]));
    if (it == index.end()) {
      fail(ErrorCode::kData, where(path, line_no) + ": unknown node id \"" +
                                 fields[0] + "\"");
    }
    const std::string v = trim(fields[1]);
    if (v != "0" && v != "1") {
      fail(ErrorCode::kData, where(path, line_no) + ": label must be 0 or 1");
    }
    labels[it->second] = static_cast<Label>(v == "1");
  }
  return labels;
}

}  // namespace

Graph load_graph(const DatasetPaths& paths) {
  std::vector<std::string> ids;
  std::vector<AttributeBits> attributes;
  std::unordered_map<std::string, NodeId> index;
  {
    auto in = open_input(paths.attributes);
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line) || trim(line) != "node_id,a0,a1,a2,a3,a4,a5,a6") {
      fail(ErrorCode::kData, paths.attributes.filename().string() +
                                 ": expected header \"node_id,a0,a1,a2,a3,a4,a5,a6\"");
    }
    while (std::getline(in, line)) {
      ++line_no;
      line = trim(line);
      if (line.empty()) continue;
      const auto fields = split(line, ',');
      if (fields.size() != 1 + kNumAttributes) {
        fail(ErrorCode::kData, where(paths.attributes, line_no) + ": expected 8 fields");
      }
      AttributeBits bits = 0;
      for (int a = 0; a < kNumAttributes; ++a) {
        const std::string v = trim(fields[1 + a]);
        if (v != "0" && v != "1") {
          fail(ErrorCode::kData, where(paths.attributes, line_no) + ": attribute a" +
                                     std::to_string(a) + " is not binary");
        }
        if (v == "1") bits |= static_cast<AttributeBits>(1u << a);
      }
      const std::string id = trim(fields[0]);
      if (!index.emplace(id, static_cast<NodeId>(ids.size())).second) {
        fail(ErrorCode::kData, where(paths.attributes, line_no) +
                                   ": duplicate node id \"" + id + "\"");
      }
      ids.push_back(id);
      attributes.push_back(bits);
    }
  }

  std::vector<Edge> edges;
  {
    auto in = open_input(paths.edges);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      line = trim(line);
      if (line.empty()) continue;
      const auto fields = split(line, '\t');
      if (fields.size() != 2) {
        fail(ErrorCode::kData, where(paths.edges, line_no) +
                                   ": malformed edge record, expected \"u<TAB>v\"");
      }
      NodeId ends[2];
      for (int e = 0; e < 2; ++e) {
        auto it = index.find(trim(fields[e]));
        if (it == index.end()) {
          fail(ErrorCode::kOutOfRange, where(paths.edges, line_no) + ": endpoint \"" +
                                           fields[e] + "\" is not a known node");
        }
        ends[e] = it->second;
      }
      edges.push_back({ends[0], ends[1]});
    }
  }

  std::vector<Label> labels;
  if (!paths.labels.empty() && std::filesystem::exists(paths.labels)) {
    labels = read_labels(paths.labels, index, ids.size());
  }
  const std::size_t n = ids.size();
  return build_graph(edges, n, std::move(attributes), std::move(labels), std::move(ids));
}

std::vector<Label> load_labels(const std::filesystem::path& path, const Graph& g) {
  return load_labels(path, g.external_ids());
}

std::vector<Label> load_labels(const std::filesystem::path& path,
                               std::span<const std::string> ids) {
  std::unordered_map<std::string, NodeId> index;
  for (NodeId i = 0; i < ids.size(); ++i) {
    check(index.emplace(ids[i], i).second, ErrorCode::kData, "duplicate node id " + ids[i]);
  }
  return read_labels(path, index, ids.size());
}

void write_edges_tsv(const std::filesystem::path& path, const Graph& g) {
  auto out = open_output(path);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (u < v) out << g.external_id(u) << '\t' << g.external_id(v) << '\n';
    }
  }
}

void write_attributes_csv(const std::filesystem::path& path, const Graph& g) {
  auto out = open_output(path);
  out << "node_id,a0,a1,a2,a3,a4,a5,a6\n";
  for (NodeId i = 0; i < g.node_count(); ++i) {
    out << g.external_id(i);
    for (int a = 0; a < kNumAttributes; ++a) {
      out << ',' << (attribute_set(g.attributes(i), a) ? '1' : '0');
    }
    out << '\n';
  }
}

void write_labels_csv(const std::filesystem::path& path, const Graph& g,
                      std::span<const Label> labels) {
  auto out = open_output(path);
  out << "node_id,label\n";
  for (NodeId i = 0; i < g.node_count(); ++i) {
    if (labels[i] == kUnlabeled) continue;
    out << g.external_id(i) << ',' << static_cast<int>(labels[i]) << '\n';
  }
}

}  // namespace sgrl
