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

#include "sgrl/gbdt.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sgrl/metrics.h"
#include "sgrl/numeric.h"
#include "sgrl/rng.h"

namespace sgrl {
namespace {

struct Split {
  double gain = 0.0;
  int feature = -1;
  float threshold = 0.0f;
};

struct NodeStats {
  double g = 0.0;
  double h = 0.0;
};

std::size_t sample_count(double fraction, std::size_t n) {
  const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  return std::clamp<std::size_t>(k, 1, n);
}

double split_gain(double gl, double hl, double gr, double hr, double lambda) {
  const double g = gl + gr;
  const double h = hl + hr;
  return gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - g * g / (h + lambda);
}

}  // namespace

void GbdtConfig::validate() const {
  check(learning_rate > 0.0, ErrorCode::kConfig, "gbdt: learning_rate must be positive");
  check(max_depth >= 1, ErrorCode::kConfig, "gbdt: max_depth must be at least 1");
  check(n_estimators >= 1, ErrorCode::kConfig, "gbdt: n_estimators must be at least 1");
  check(subsample > 0.0 && subsample <= 1.0, ErrorCode::kConfig,
        "gbdt: subsample must lie in (0, 1]");
  check(colsample_bytree > 0.0 && colsample_bytree <= 1.0, ErrorCode::kConfig,
        "gbdt: colsample_bytree must lie in (0, 1]");
  check(early_stopping_rounds >= 1, ErrorCode::kConfig,
        "gbdt: early_stopping_rounds must be at least 1");
  check(l2_reg >= 0.0 && min_child_weight >= 0.0, ErrorCode::kConfig,
        "gbdt: l2_reg and min_child_weight must be non-negative");
}

double Tree::predict(const float* x) const {
  int k = 0;
  while (nodes[k].feature >= 0) {
    k = x[nodes[k].feature] < nodes[k].threshold ? nodes[k].left : nodes[k].right;
  }
  return nodes[k].value;
}

int Tree::depth() const {
  std::vector<int> d(nodes.size(), 0);
  int best = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k].feature < 0) continue;
    d[nodes[k].left] = d[nodes[k].right] = d[k] + 1;
    best = std::max(best, d[k] + 1);
  }
  return best;
}

TreeEnsemble gbdt_fit(const Tensor& x, std::span<const int> y, const GbdtConfig& config,
                      const Tensor* x_valid, std::span<const int> y_valid,
                      std::uint64_t seed) {
  config.validate();
  check(x.rank() == 2, ErrorCode::kDimension, "gbdt: features must be a matrix");
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  check(d > 0, ErrorCode::kConfig, "gbdt: no features");
  check(y.size() == n && n > 0, ErrorCode::kDimension, "gbdt: one label per row required");
  double positives = 0;
  for (int v : y) {
    check(v == 0 || v == 1, ErrorCode::kData, "gbdt: labels must be 0/1");
    positives += v;
  }
  check(positives > 0 && positives < static_cast<double>(n), ErrorCode::kConfig,
        "gbdt: both classes must be present");
  if (x_valid) {
    check(x_valid->rank() == 2 && x_valid->cols() == d && y_valid.size() == x_valid->rows(),
          ErrorCode::kDimension, "gbdt: validation set does not match training width");
    const auto pos = std::count(y_valid.begin(), y_valid.end(), 1);
    check(pos > 0 && pos < static_cast<long>(y_valid.size()), ErrorCode::kConfig,
          "gbdt: validation set must contain both classes");
  }

  TreeEnsemble ens;
  ens.features = d;
  const double prior = positives / static_cast<double>(n);
  ens.base_score = std::log(prior / (1.0 - prior));

  const float* xs = x.data();
  std::vector<std::vector<std::uint32_t>> sorted(d);
  for (std::size_t f = 0; f < d; ++f) {
    sorted[f].resize(n);
    std::iota(sorted[f].begin(), sorted[f].end(), 0u);
    std::stable_sort(sorted[f].begin(), sorted[f].end(), [&](std::uint32_t a, std::uint32_t b) {
      return xs[a * d + f] < xs[b * d + f];
    });
  }

  std::vector<double> margin(n, ens.base_score);
  std::vector<double> valid_margin(x_valid ? x_valid->rows() : 0, ens.base_score);
  std::vector<double> grad(n);
  std::vector<double> hess(n);
  std::vector<int> node_of(n);
  Rng rng(derive_seed(seed, "gbdt"));
  const double lambda = config.l2_reg;
  double best_auc = -1.0;

  for (int round = 0; round < config.n_estimators; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(margin[i]);
      grad[i] = p - y[i];
      hess[i] = p * (1.0 - p);
    }
    std::fill(node_of.begin(), node_of.end(), -1);
    if (config.subsample < 1.0) {
      for (std::size_t i : sample_without_replacement(rng, n, sample_count(config.subsample, n)))
        node_of[i] = 0;
    } else {
      std::fill(node_of.begin(), node_of.end(), 0);
    }
    std::vector<std::size_t> features;
    if (config.colsample_bytree < 1.0) {
      features = sample_without_replacement(rng, d, sample_count(config.colsample_bytree, d));
      std::sort(features.begin(), features.end());
    } else {
      features.resize(d);
      std::iota(features.begin(), features.end(), 0);
    }

    Tree tree;
    tree.nodes.emplace_back();
    std::vector<NodeStats> stats(1);
    for (std::size_t i = 0; i < n; ++i) {
      if (node_of[i] == 0) {
        stats[0].g += grad[i];
        stats[0].h += hess[i];
      }
    }
    std::vector<int> active{0};
    for (int depth = 0; depth < config.max_depth && !active.empty(); ++depth) {
      // Dense slot per active node for the column scans.
      std::vector<int> slot(tree.nodes.size(), -1);
      for (std::size_t s = 0; s < active.size(); ++s) slot[active[s]] = static_cast<int>(s);
      std::vector<Split> best(active.size());
      std::vector<NodeStats> left(active.size());
      std::vector<float> last(active.size());
      std::vector<char> seen(active.size());
      for (std::size_t f : features) {
        std::fill(left.begin(), left.end(), NodeStats{});
        std::fill(seen.begin(), seen.end(), 0);
        for (std::uint32_t i : sorted[f]) {
          const int node = node_of[i];
          if (node < 0 || slot[node] < 0) continue;
          const int s = slot[node];
          const float v = xs[i * d + f];
          if (seen[s] && v > last[s]) {
            const NodeStats& total = stats[node];
            const double hl = left[s].h;
            const double hr = total.h - hl;
            if (hl >= config.min_child_weight && hr >= config.min_child_weight) {
              const double gain =
                  split_gain(left[s].g, hl, total.g - left[s].g, hr, lambda);
              if (gain > best[s].gain) {
                float t = static_cast<float>(0.5 * (double(last[s]) + double(v)));
                if (!(t > last[s])) t = v;
                best[s] = {gain, static_cast<int>(f), t};
              }
            }
          }
          left[s].g += grad[i];
          left[s].h += hess[i];
          last[s] = v;
          seen[s] = 1;
        }
      }
      std::vector<int> next;
      for (std::size_t s = 0; s < active.size(); ++s) {
        if (best[s].feature < 0) continue;
        const int node = active[s];
        const int l = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        stats.resize(tree.nodes.size());
        TreeNode& split = tree.nodes[node];
        split.feature = best[s].feature;
        split.threshold = best[s].threshold;
        split.gain = best[s].gain;
        split.left = l;
        split.right = l + 1;
        next.push_back(l);
        next.push_back(l + 1);
      }
      for (std::size_t i = 0; i < n; ++i) {
        const int node = node_of[i];
        if (node < 0 || tree.nodes[node].feature < 0) continue;
        const TreeNode& split = tree.nodes[node];
        const int child = xs[i * d + split.feature] < split.threshold ? split.left : split.right;
        node_of[i] = child;
        stats[child].g += grad[i];
        stats[child].h += hess[i];
      }
      active = std::move(next);
    }
    for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
      if (tree.nodes[k].feature < 0) {
        tree.nodes[k].value = -config.learning_rate * stats[k].g / (stats[k].h + lambda);
      }
    }

    for (std::size_t i = 0; i < n; ++i) margin[i] += tree.predict(xs + i * d);
    ens.trees.push_back(std::move(tree));
    if (!x_valid) continue;
    for (std::size_t i = 0; i < valid_margin.size(); ++i) {
      valid_margin[i] += ens.trees.back().predict(x_valid->data() + i * d);
    }
    const double a = auc(valid_margin, y_valid);
    ens.validation_auc.push_back(a);
    if (a > best_auc) {
      best_auc = a;
      ens.best_iteration = round;
    } else if (round - ens.best_iteration >= config.early_stopping_rounds) {
      break;
    }
  }
  if (x_valid) ens.trees.resize(static_cast<std::size_t>(ens.best_iteration + 1));
  return ens;
}

double gbdt_predict(const TreeEnsemble& ensemble, std::span<const float> x) {
  check(x.size() == ensemble.features, ErrorCode::kDimension,
        "gbdt_predict: " + std::to_string(x.size()) + " features given, model expects " +
            std::to_string(ensemble.features));
  double m = ensemble.base_score;
  for (const Tree& t : ensemble.trees) m += t.predict(x.data());
  return sigmoid(m);
}

std::vector<double> gbdt_predict(const TreeEnsemble& ensemble, const Tensor& x) {
  check(x.rank() == 2 && x.cols() == ensemble.features, ErrorCode::kDimension,
        "gbdt_predict: feature matrix " + shape_string(x.dims()) + " does not match model width " +
            std::to_string(ensemble.features));
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = gbdt_predict(ensemble, std::span<const float>(x.data() + i * x.cols(), x.cols()));
  }
  return out;
}

std::vector<double> gbdt_importance(const TreeEnsemble& ensemble, ImportanceType type) {
  std::vector<double> total(ensemble.features, 0.0);
  for (const Tree& t : ensemble.trees) {
    for (const TreeNode& node : t.nodes) {
      if (node.feature < 0) continue;
      total[node.feature] += type == ImportanceType::kGain ? node.gain : 1.0;
    }
  }
  return total;
}

}  // namespace sgrl
