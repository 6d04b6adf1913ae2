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

// Gradient-boosted regression trees for the binary logistic objective.
//
// Trees are grown level by level with exact greedy split search over
// presorted feature columns. A split at threshold t sends x < t left.

#ifndef SGRL_GBDT_H_
#define SGRL_GBDT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sgrl/tensor.h"

namespace sgrl {

enum class ImportanceType { kGain, kFrequency };

struct GbdtConfig {
  double learning_rate = 0.2;
  int max_depth = 4;
  int n_estimators = 300;
  double subsample = 0.9;
  double colsample_bytree = 0.8;
  int early_stopping_rounds = 50;
  double l2_reg = 1.0;
  double min_child_weight = 1.0;
  ImportanceType importance = ImportanceType::kGain;

  void validate() const;
};

struct TreeNode {
  int feature = -1;  // -1 for leaves
  float threshold = 0.0f;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf output, learning rate already applied
  double gain = 0.0;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(const float* x) const;
  int depth() const;
};

struct TreeEnsemble {
  double base_score = 0.0;  // log-odds
  std::size_t features = 0;
  std::vector<Tree> trees;
  // Validation AUC after each boosting round (empty without validation data).
  std::vector<double> validation_auc;
  int best_iteration = -1;
};

// Rows of x are samples. y values are 0/1. With validation data, boosting
// stops after early_stopping_rounds rounds without validation-AUC
// improvement and the ensemble is truncated to its best round.
TreeEnsemble gbdt_fit(const Tensor& x, std::span<const int> y, const GbdtConfig& config,
                      const Tensor* x_valid, std::span<const int> y_valid,
                      std::uint64_t seed);

double gbdt_predict(const TreeEnsemble& ensemble, std::span<const float> x);
std::vector<double> gbdt_predict(const TreeEnsemble& ensemble, const Tensor& x);

// Per-feature total split gain (or split count for kFrequency).
std::vector<double> gbdt_importance(const TreeEnsemble& ensemble,
                                    ImportanceType type = ImportanceType::kGain);

}  // namespace sgrl

#endif  // SGRL_GBDT_H_
