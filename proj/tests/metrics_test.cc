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


#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracle.h"
#include "sgrl/error.h"
#include "sgrl/metrics.h"
#include "sgrl/rng.h"

namespace sgrl {
namespace {

TEST_CASE("auc examples") {
  CHECK(auc(std::vector<double>{0.9, 0.1}, std::vector<int>{1, 0}) == 1.0);
  CHECK(auc(std::vector<double>{0.3, 0.3, 0.3}, std::vector<int>{1, 0, 1}) == 0.5);
  CHECK(auc(std::vector<double>{0.8, 0.4, 0.6, 0.2}, std::vector<int>{1, 1, 0, 0}) == 0.75);
  CHECK_THROWS_AS(auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}), Error);
}

TEST_CASE("ks examples") {
  CHECK(ks(std::vector<double>{0.9, 0.8, 0.1}, std::vector<int>{1, 1, 0}) == 1.0);
  CHECK(ks(std::vector<double>{0.2, 0.5, 0.2, 0.5}, std::vector<int>{1, 1, 0, 0}) == 0.0);
  CHECK(ks(std::vector<double>{0.8, 0.4, 0.6, 0.2}, std::vector<int>{1, 1, 0, 0}) == 0.5);
  CHECK_THROWS_AS(ks(std::vector<double>{0.1, 0.2}, std::vector<int>{0, 0}), Error);
}

TEST_CASE("auc and ks equal brute-force oracles") {
  Rng rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 999);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Coarse grid so ties are common.
      s[i] = static_cast<double>(uniform_index(rng, trial % 2 ? 20 : 100000)) / 100000.0;
      y[i] = static_cast<int>(uniform_index(rng, 2));
    }
    y[0] = 0;
    y[1] = 1;
    CHECK(auc(s, y) == oracle::auc_pairs(s, y));
    CHECK(ks(s, y) == oracle::ks_thresholds(s, y));
  }
}

TEST_CASE("auc and ks are invariant under increasing transforms") {
  Rng rng(2);
  std::vector<double> s(200);
  std::vector<int> y(200);
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = uniform01(rng);
    y[i] = static_cast<int>(bernoulli(rng, 0.3 + 0.4 * s[i]));
  }
  std::vector<double> t(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) t[i] = std::exp(3 * s[i]) + 7;
  CHECK(auc(t, y) == auc(s, y));
  CHECK(ks(t, y) == ks(s, y));
}

TEST_CASE("confusion_metrics examples") {
  const std::vector<double> perfect_s{0.9, 0.8, 0.1};
  const std::vector<int> perfect_y{1, 1, 0};
  const ConfusionMetrics p = confusion_metrics(perfect_s, perfect_y, 0.5);
  CHECK(p.accuracy == 1.0);
  CHECK(p.recall == 1.0);
  CHECK(p.f1 == 1.0);
  CHECK(*p.precision == 1.0);
  CHECK(*p.dsr == 1.0);

  const ConfusionMetrics none = confusion_metrics(perfect_s, perfect_y, 0.95);
  CHECK(none.recall == 0.0);
  CHECK(none.f1 == 0.0);
  CHECK(!none.precision.has_value());
  CHECK(!none.dsr.has_value());

  // TP=2, FP=1, FN=1, TN=6.
  const std::vector<double> s{0.9, 0.8, 0.7, 0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1};
  const std::vector<int> y{1, 1, 0, 1, 0, 0, 0, 0, 0, 0};
  const ConfusionMetrics c = confusion_metrics(s, y, 0.5);
  CHECK(c.tp == 2);
  CHECK(c.fp == 1);
  CHECK(c.fn == 1);
  CHECK(c.tn == 6);
  CHECK(*c.precision == doctest::Approx(2.0 / 3));
  CHECK(c.recall == doctest::Approx(2.0 / 3));
  CHECK(c.f1 == doctest::Approx(2.0 / 3));
  CHECK(c.accuracy == doctest::Approx(0.8));
  CHECK(*c.dsr == *c.precision);

  // Strict threshold: a score equal to the threshold is not flagged.
  const ConfusionMetrics edge = confusion_metrics(std::vector<double>{0.5}, std::vector<int>{1}, 0.5);
  CHECK(edge.tp == 0);
  CHECK_THROWS_AS(confusion_metrics(s, y, 1.0), Error);
  CHECK_THROWS_AS(confusion_metrics(s, y, 0.0), Error);
}

TEST_CASE("evaluate and format_report") {
  const std::vector<double> s{0.8, 0.4, 0.6, 0.2};
  const std::vector<int> y{1, 1, 0, 0};
  const EvalReport r = evaluate(s, y, 0.5);
  CHECK(r.count == 4);
  CHECK(r.positives == 2);
  CHECK(*r.auc == 0.75);
  CHECK(*r.ks == 0.5);
  const std::string text = format_report(r);
  CHECK(text.find("auc=0.750000") != std::string::npos);
  CHECK(text.find("ks=0.500000") != std::string::npos);
  CHECK(text.find("precision=0.500000") != std::string::npos);

  const EvalReport one_class = evaluate(std::vector<double>{0.1, 0.2}, std::vector<int>{0, 0}, 0.5);
  CHECK(!one_class.auc.has_value());
  const std::string t2 = format_report(one_class);
  CHECK(t2.find("auc=undefined") != std::string::npos);
  CHECK(t2.find("precision=no-predictions") != std::string::npos);
  CHECK(t2.find("dsr=no-predictions") != std::string::npos);
}

}  // namespace
}  // namespace sgrl
