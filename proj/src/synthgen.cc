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


#include "sgrl/synthgen.h"

#include <string>

#include "sgrl/error.h"
#include "sgrl/rng.h"

namespace sgrl {
namespace {

bool probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void SynthConfig::validate() const {
  check(n_normal >= 0 && n_motifs >= 0 && transaction_accounts >= 0 && service_accounts >= 0 &&
            camouflage_accounts >= 0 && buyers >= 0 && edges_per_node >= 0,
        ErrorCode::kConfig, "synth counts must be non-negative");
  check(probability(p_informative_bma) && probability(p_informative_other) &&
            probability(p_background_attr) && probability(observed_fraction),
        ErrorCode::kConfig, "synth probabilities must lie in [0,1]");
  for (int a : informative) {
    check(a >= 0 && a < kNumAttributes, ErrorCode::kConfig,
          "informative attribute " + std::to_string(a) + " out of range");
  }
  check(informative[0] != informative[1], ErrorCode::kConfig,
        "informative attributes must be distinct");
  check(camouflage_accounts == 0 || n_motifs == 0 || n_normal > 0, ErrorCode::kConfig,
        "camouflage accounts need normal nodes to attach to");
}

SynthConfig default_synth_config() { return SynthConfig{}; }

SynthDataset generate(const SynthConfig& config) {
  config.validate();
  const std::size_t n_normal = config.n_normal;
  const std::size_t n = n_normal + std::size_t(config.n_motifs) * config.motif_size();
  Rng topo = make_rng(config.seed, "synth.topology");

  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n_normal; ++i) {
    const std::size_t k = std::min<std::size_t>(config.edges_per_node, i);
    for (std::size_t j : sample_without_replacement(topo, i, k)) {
      edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
    }
  }

  std::vector<MotifRole> roles(n, MotifRole::kNormal);
  NodeId next = static_cast<NodeId>(n_normal);
  auto take = [&](int count, MotifRole role) {
    std::vector<NodeId> ids;
    for (int k = 0; k < count; ++k) {
      roles[next] = role;
      ids.push_back(next++);
    }
    return ids;
  };
  for (int m = 0; m < config.n_motifs; ++m) {
    const NodeId seller = take(1, MotifRole::kSeller)[0];
    const auto transaction = take(config.transaction_accounts, MotifRole::kTransaction);
    const auto service = take(config.service_accounts, MotifRole::kService);
    const auto camouflage = take(config.camouflage_accounts, MotifRole::kCamouflage);
    const auto buyers = take(config.buyers, MotifRole::kBuyer);
    for (const auto* group : {&transaction, &service, &camouflage}) {
      for (NodeId v : *group) edges.push_back({seller, v});
    }
    for (NodeId b : buyers) {
      for (NodeId v : transaction) edges.push_back({b, v});
      for (NodeId v : service) edges.push_back({b, v});
    }
    for (NodeId c : camouflage) {
      for (std::size_t j : sample_without_replacement(topo, n_normal, 2)) {
        edges.push_back({c, static_cast<NodeId>(j)});
      }
    }
  }

  std::vector<Label> truth(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    truth[i] = roles[i] == MotifRole::kSeller || roles[i] == MotifRole::kTransaction ||
               roles[i] == MotifRole::kService;
  }

  Rng attr_rng = make_rng(config.seed, "synth.attributes");
  std::vector<AttributeBits> attributes(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (int a = 0; a < kNumAttributes; ++a) {
      double p = config.p_background_attr;
      if (a == config.informative[0] || a == config.informative[1]) {
        p = truth[i] ? config.p_informative_bma : config.p_informative_other;
      }
      if (bernoulli(attr_rng, p)) attributes[i] |= static_cast<AttributeBits>(1u << a);
    }
  }

  // Stratified observation: the same fraction of each class, rounded.
  Rng obs_rng = make_rng(config.seed, "synth.observed");
  std::vector<bool> observed(n, false);
  for (Label cls : {Label(0), Label(1)}) {
    std::vector<NodeId> members;
    for (std::size_t i = 0; i < n; ++i)
      if (truth[i] == cls) members.push_back(static_cast<NodeId>(i));
    const auto k = static_cast<std::size_t>(config.observed_fraction * members.size() + 0.5);
    for (std::size_t j : sample_without_replacement(obs_rng, members.size(), k)) {
      observed[members[j]] = true;
    }
  }
  std::vector<Label> labels(n, kUnlabeled);
  for (std::size_t i = 0; i < n; ++i)
    if (observed[i]) labels[i] = truth[i];

  SynthDataset data;
  data.graph = build_graph(edges, n, std::move(attributes), std::move(labels));
  data.ground_truth = std::move(truth);
  data.roles = std::move(roles);
  data.observed = std::move(observed);
  return data;
}

void write_dataset(const SynthDataset& data, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  check(!ec, ErrorCode::kIo, "cannot create directory " + dir.string() + ": " + ec.message());
  const DatasetPaths paths = DatasetPaths::in_directory(dir);
  write_edges_tsv(paths.edges, data.graph);
  write_attributes_csv(paths.attributes, data.graph);
  write_labels_csv(paths.labels, data.graph, data.graph.labels());
  write_labels_csv(dir / "ground_truth.csv", data.graph, data.ground_truth);
}

}  // namespace sgrl
