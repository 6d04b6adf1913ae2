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


// Seeded generator of graphs with planted black-market motifs.
//
// Background: n_normal nodes, node i linked to min(m, i) distinct uniform
// earlier nodes. Each motif adds a seller hub linked to its transaction,
// service and camouflage accounts; buyers link to every transaction and
// service account of the motif; camouflage accounts also link to two random
// normal nodes. Seller, transaction and service accounts are BMAs.

#ifndef SGRL_SYNTHGEN_H_
#define SGRL_SYNTHGEN_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "sgrl/graph.h"

namespace sgrl {

struct SynthConfig {
  int n_normal = 1800;
  int n_motifs = 20;
  int transaction_accounts = 3;
  int service_accounts = 2;
  int camouflage_accounts = 2;
  int buyers = 2;
  int edges_per_node = 3;
  std::array<int, 2> informative{1, 3};
  double p_informative_bma = 0.8;
  double p_informative_other = 0.1;
  double p_background_attr = 0.3;
  double observed_fraction = 0.5;
  std::uint64_t seed = 0;

  int motif_size() const {
    return 1 + transaction_accounts + service_accounts + camouflage_accounts + buyers;
  }
  int bmas_per_motif() const { return 1 + transaction_accounts + service_accounts; }
  void validate() const;
};

SynthConfig default_synth_config();

enum class MotifRole : std::uint8_t {
  kNormal,
  kSeller,
  kTransaction,
  kService,
  kCamouflage,
  kBuyer,
};

struct SynthDataset {
  // Labels of g are the observed subset; the rest are unlabeled.
  Graph graph;
  std::vector<Label> ground_truth;
  std::vector<MotifRole> roles;
  std::vector<bool> observed;
};

SynthDataset generate(const SynthConfig& config);

// Writes edges.tsv, attrs.csv, labels.csv (observed only) and
// ground_truth.csv into dir, creating it if needed.
void write_dataset(const SynthDataset& data, const std::filesystem::path& dir);

}  // namespace sgrl

#endif  // SGRL_SYNTHGEN_H_
