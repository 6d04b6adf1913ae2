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

#include "sgrl/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <vector>

#include "sgrl/error.h"

namespace sgrl {
namespace {

struct ClassCounts {
  double positives = 0;
  double negatives = 0;
};

ClassCounts validate(std::span<const double> scores, std::span<const int> labels,
                     bool need_both) {
  check(scores.size() == labels.size(), ErrorCode::kDimension,
        "metrics: " + std::to_string(scores.size()) + " scores for " +
            std::to_string(labels.size()) + " labels");
  check(!scores.empty(), ErrorCode::kConfig, "metrics: empty input");
  ClassCounts c;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    check(labels[k] == 0 || labels[k] == 1, ErrorCode::kData, "metrics: labels must be 0/1");
    check(std::isfinite(scores[k]), ErrorCode::kNumeric, "metrics: non-finite score");
    (labels[k] == 1 ? c.positives : c.negatives) += 1;
  }
  if (need_both) {
    check(c.positives > 0 && c.negatives > 0, ErrorCode::kConfig,
          "metrics: both classes must be present");
  }
  return c;
}

std::vector<std::size_t> order_by_score(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  return order;
}

}  // namespace

double auc(std::span<const double> scores, std::span<const int> labels) {
  const ClassCounts c = validate(scores, labels, true);
  const std::vector<std::size_t> order = order_by_score(scores);
  // Sum of 1-based average ranks of the positives.
  double rank_sum = 0.0;
  std::size_t k = 0;
  while (k < order.size()) {
    std::size_t end = k;
    while (end < order.size() && scores[order[end]] == scores[order[k]]) ++end;
    const double avg_rank = 0.5 * static_cast<double>(k + 1 + end);
    for (std::size_t m = k; m < end; ++m) {
      if (labels[order[m]] == 1) rank_sum += avg_rank;
    }
    k = end;
  }
  const double u = rank_sum - c.positives * (c.positives + 1) / 2.0;
  return u / (c.positives * c.negatives);
}

double ks(std::span<const double> scores, std::span<const int> labels) {
  const ClassCounts c = validate(scores, labels, true);
  std::vector<std::size_t> order = order_by_score(scores);
  std::reverse(order.begin(), order.end());
  double tp = 0;
  double fp = 0;
  double best = 0;
  std::size_t k = 0;
  while (k < order.size()) {
    const double t = scores[order[k]];
    while (k < order.size() && scores[order[k]] == t) {
      (labels[order[k]] == 1 ? tp : fp) += 1;
      ++k;
    }
    best = std::max(best, std::abs(tp / c.positives - fp / c.negatives));
  }
  return best;
}

ConfusionMetrics confusion_metrics(std::span<const double> scores,
                                   std::span<const int> labels, double threshold) {
  check(threshold > 0.0 && threshold < 1.0, ErrorCode::kConfig,
        "threshold must lie in (0, 1)");
  validate(scores, labels, false);
  ConfusionMetrics m;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    const bool flag = scores[k] > threshold;
    if (labels[k] == 1) {
      flag ? ++m.tp : ++m.fn;
    } else {
      flag ? ++m.fp : ++m.tn;
    }
  }
  const double tp = static_cast<double>(m.tp);
  m.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(scores.size());
  m.recall = m.tp + m.fn > 0 ? tp / static_cast<double>(m.tp + m.fn) : 0.0;
  if (m.tp + m.fp > 0) {
    m.precision = tp / static_cast<double>(m.tp + m.fp);
    m.dsr = m.precision;
  }
  const double p = m.precision.value_or(0.0);
  m.f1 = p + m.recall > 0.0 ? 2.0 * p * m.recall / (p + m.recall) : 0.0;
  return m;
}

EvalReport evaluate(std::span<const double> scores, std::span<const int> labels,
                    double threshold) {
  EvalReport r;
  const ClassCounts c = validate(scores, labels, false);
  r.count = scores.size();
  r.positives = static_cast<std::size_t>(c.positives);
  r.threshold = threshold;
  if (c.positives > 0 && c.negatives > 0) {
    r.auc = auc(scores, labels);
    r.ks = ks(scores, labels);
  }
  r.confusion = confusion_metrics(scores, labels, threshold);
  return r;
}

std::string format_report(const EvalReport& r) {
  auto fmt = [](std::optional<double> v, const char* missing) {
    if (!v) return std::string(missing);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", *v);
    return std::string(buf);
  };
  const ConfusionMetrics& c = r.confusion;
  const std::vector<std::pair<std::string, std::string>> rows{
      {"auc", fmt(r.auc, "undefined")},
      {"acc", fmt(c.accuracy, "")},
      {"ks", fmt(r.ks, "undefined")},
      {"precision", fmt(c.precision, "no-predictions")},
      {"recall", fmt(c.recall, "")},
      {"f1", fmt(c.f1, "")},
      {"dsr", fmt(c.dsr, "no-predictions")},
  };
  std::ostringstream os;
  os << "nodes " << r.count << "  positives " << r.positives << "  threshold "
     << fmt(r.threshold, "") << "\n";
  os << "tp " << c.tp << "  fp " << c.fp << "  fn " << c.fn << "  tn " << c.tn << "\n\n";
  char line[96];
  std::snprintf(line, sizeof line, "%-10s %16s\n", "metric", "value");
  os << line;
  for (const auto& [name, value] : rows) {
    std::snprintf(line, sizeof line, "%-10s %16s\n", name.c_str(), value.c_str());
    os << line;
  }
  os << "\n";
  for (const auto& [name, value] : rows) os << name << "=" << value << "\n";
  return os.str();
}

}  // namespace sgrl
