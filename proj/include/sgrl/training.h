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

#ifndef SGRL_TRAINING_H_
#define SGRL_TRAINING_H_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace sgrl {

struct TrainOptions {
  int max_epochs = 200;
  double learning_rate = 1e-3;
  // A probe runs every probe_interval epochs (and after the last epoch).
  int probe_interval = 1;
  std::uint64_t seed = 0;
};

struct ProbeRecord {
  int epoch = 0;
  double auc = 0.0;
};

struct TrainHistory {
  std::vector<double> losses;  // one per epoch run
  std::vector<ProbeRecord> probes;
  int selected_epoch = 0;      // epoch of the returned parameters
};

// Full-batch training with probe-based early stopping: after every probe the
// model is snapshotted; the first time a probe AUC is lower than the previous
// one, the previous snapshot is restored and training ends. Without a probe
// the model trains for max_epochs.
//
// step(model) runs one epoch and returns its loss; probe(model) returns AUC.
template <typename Model>
TrainHistory train_with_probe(Model& model, const TrainOptions& options,
                              const std::function<double(Model&, int)>& step,
                              const std::function<double(const Model&)>& probe) {
  TrainHistory history;
  const int interval = std::max(1, options.probe_interval);
  Model snapshot = model;
  double previous = -std::numeric_limits<double>::infinity();
  for (int epoch = 1; epoch <= options.max_epochs; ++epoch) {
    history.losses.push_back(step(model, epoch));
    history.selected_epoch = epoch;
    if (!probe) continue;
    if (epoch % interval != 0 && epoch != options.max_epochs) continue;
    const double auc = probe(model);
    history.probes.push_back({epoch, auc});
    if (auc < previous) {
      model = std::move(snapshot);
      history.selected_epoch = history.probes[history.probes.size() - 2].epoch;
      return history;
    }
    previous = auc;
    snapshot = model;
  }
  return history;
}

}  // namespace sgrl

#endif  // SGRL_TRAINING_H_
