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

#ifndef SGRL_METRICS_H_
#define SGRL_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>

namespace sgrl {

// Probability that a random positive outscores a random negative, ties
// counted one half. Requires both classes.
double auc(std::span<const double> scores, std::span<const int> labels);

// max over observed thresholds t of |TPR(t) - FPR(t)|, flagging score >= t.
double ks(std::span<const double> scores, std::span<const int> labels);

// Threshold metrics with flags = score > threshold. Precision and DSR are
// empty ("no predictions") when nothing is flagged.
struct ConfusionMetrics {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  double accuracy = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::optional<double> precision;
  std::optional<double> dsr;
};

ConfusionMetrics confusion_metrics(std::span<const double> scores,
                                   std::span<const int> labels, double threshold);

struct EvalReport {
  std::size_t count = 0;
  std::size_t positives = 0;
  double threshold = 0.5;
  std::optional<double> auc;  // empty when a class is missing
  std::optional<double> ks;
  ConfusionMetrics confusion;
};

EvalReport evaluate(std::span<const double> scores, std::span<const int> labels,
                    double threshold);

// Aligned table followed by machine-readable "metric=value" lines.
std::string format_report(const EvalReport& report);

}  // namespace sgrl

#endif  // SGRL_METRICS_H_
