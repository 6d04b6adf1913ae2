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


// Acceptance checks. Prints one line per criterion:
//   criterion N PASS|FAIL <measurements> time=<seconds>s
// Exit status is nonzero only with --strict and at least one FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sgrl/contrastive.h"
#include "sgrl/error.h"
#include "sgrl/graph.h"
#include "sgrl/ig_encoder.h"
#include "sgrl/metrics.h"
#include "sgrl/pipeline.h"
#include "sgrl/rng.h"
#include "sgrl/ssa.h"
#include "sgrl/synthgen.h"
#include "sgrl/verify.h"

namespace sgrl {
namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt("%.3f", v[i]);
  return out;
}

SynthDataset dataset(std::uint64_t seed, double observed = 0.5) {
  SynthConfig c = default_synth_config();
  c.seed = seed;
  c.observed_fraction = observed;
  return generate(c);
}

PipelineConfig pipeline_config(std::uint64_t seed) {
  PipelineConfig c;
  c.seed = seed;
  return c;
}

struct TestScore {
  double f1 = 0.0;
  double auc = 0.0;
};

// F1 at the default threshold and AUC over the nodes whose label was not observed.
TestScore unobserved_score(const SynthDataset& d, const std::vector<double>& scores) {
  std::vector<double> s;
  std::vector<int> y;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (d.observed[i]) continue;
    s.push_back(scores[i]);
    y.push_back(d.ground_truth[i]);
  }
  return {confusion_metrics(s, y, 0.5).f1, auc(s, y)};
}

double unobserved_f1(const SynthDataset& d, const std::vector<double>& scores) {
  return unobserved_score(d, scores).f1;
}

double all_nodes_f1(const SynthDataset& d, const std::vector<double>& scores) {
  std::vector<int> y(d.ground_truth.begin(), d.ground_truth.end());
  return confusion_metrics(scores, y, 0.5).f1;
}

// ---- 1: gradients -------------------------------------------------------

Verdict gradients() {
  double worst = 0.0;
  std::string which;
  for (const NamedGradCheck& c : check_all_gradients({}, 5)) {
    if (c.report.max_relative_error >= worst) {
      worst = c.report.max_relative_error;
      which = c.loss;
    }
  }
  return {worst < 1e-4, "max_rel_err=" + fmt("%.3e", worst) + " (" + which + ")"};
}

// ---- 2: parameter count -------------------------------------------------

Verdict parameter_count() {
  Verdict v{true, ""};
  for (auto [f1, f2] : {std::pair{32, 56}, std::pair{128, 448}}) {
    EncoderConfig c;
    c.hidden_width = f1;
    c.input_width = f2;
    c.attribute_width = f2 / kNumAttributes;
    Rng rng(1);
    const auto built = static_cast<long long>(trainable_parameter_count(init_encoder(c, rng)));
    const long long formula = param_count(2, f1, f2);
    v.pass = v.pass && built == formula;
    v.detail += (v.detail.empty() ? "" : " ") + std::string("(2,") + std::to_string(f1) + "," +
                std::to_string(f2) + "): formula=" + std::to_string(formula) +
                " constructed=" + std::to_string(built);
  }
  return v;
}

// ---- 3: metric oracles --------------------------------------------------

double brute_auc(const std::vector<double>& s, const std::vector<int>& y) {
  long long wins2 = 0;
  long long pairs = 0;
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (y[a] != 1) continue;
    for (std::size_t b = 0; b < s.size(); ++b) {
      if (y[b] != 0) continue;
      ++pairs;
      wins2 += s[a] > s[b] ? 2 : (s[a] == s[b] ? 1 : 0);
    }
  }
  return static_cast<double>(wins2) / (2.0 * static_cast<double>(pairs));
}

double brute_ks(const std::vector<double>& s, const std::vector<int>& y) {
  double np = 0, nn = 0;
  for (int v : y) (v ? np : nn) += 1;
  double best = 0.0;
  for (double t : s) {
    double tp = 0, fp = 0;
    for (std::size_t k = 0; k < s.size(); ++k)
      if (s[k] >= t) (y[k] ? tp : fp) += 1;
    best = std::max(best, std::abs(tp / np - fp / nn));
  }
  return best;
}

Verdict metric_oracles() {
  std::mt19937_64 rng(2026);
  int auc_exact = 0;
  int ks_exact = 0;
  const int sets = 200;
  for (int k = 0; k < sets; ++k) {
    const std::size_t n = 2 + rng() % 999;
    // A coarse grid for half the sets so ties are common.
    const bool ties = k % 2 == 0;
    std::vector<double> s(n);
    std::vector<int> y(n);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = ties ? std::floor(u(rng) * 10) / 10 : u(rng);
      y[i] = static_cast<int>(rng() % 2);
    }
    y[0] = 1;
    y[1] = 0;
    auc_exact += auc(s, y) == brute_auc(s, y);
    ks_exact += ks(s, y) == brute_ks(s, y);
  }
  return {auc_exact == sets && ks_exact == sets,
          "auc_exact=" + std::to_string(auc_exact) + "/" + std::to_string(sets) +
              " ks_exact=" + std::to_string(ks_exact) + "/" + std::to_string(sets)};
}

// ---- 4: structural contrast ---------------------------------------------

Verdict structural_contrast() {
  std::vector<double> accs;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SynthDataset d = dataset(seed);
    const Graph& g = d.graph;
    const PipelineConfig pc = pipeline_config(seed);
    // 80% of nodes act as training positives; the rest are held out.
    Rng rng = make_rng(seed, "acceptance.sss.split");
    std::vector<NodeId> order(g.node_count());
    std::iota(order.begin(), order.end(), 0u);
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t cut = g.node_count() * 4 / 5;
    std::vector<NodeId> train(order.begin(), order.begin() + cut);
    std::vector<NodeId> held(order.begin() + cut, order.end());
    std::sort(train.begin(), train.end());
    std::sort(held.begin(), held.end());

    const SubgraphIndex index = precompute_subgraphs(g, pc.hops);
    ContrastiveOptions o;
    o.train.max_epochs = pc.max_epochs;
    o.train.learning_rate = pc.learning_rate;
    o.train.seed = derive_seed(seed, "sss");
    o.activation = pc.disc_activation;
    o.positives = train;
    const ContrastiveModel m =
        train_contrastive(ContrastiveMode::kSss, g, index, {}, pc.encoder_config(), o);
    double acc = 0.0;
    const int rounds = 5;
    for (int r = 0; r < rounds; ++r) {
      const PairBatch b = epoch_pairs(ContrastiveMode::kSss, g, {}, held,
                                      derive_seed(seed, "acceptance.sss.eval"), r);
      acc += discriminator_accuracy(m, g, index, b);
    }
    accs.push_back(acc / rounds);
  }
  const double med = median(accs);
  return {med > 0.7, "median_heldout_acc=" + fmt("%.3f", med) + " per_seed=" + list(accs)};
}

// ---- 5: pseudo-label recovery -------------------------------------------

Verdict pseudo_label_recovery() {
  int hits = 0;
  std::string picks;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SynthDataset d = dataset(seed);
    const PipelineConfig pc = pipeline_config(seed);
    const LabelSplit split =
        split_labels(d.graph, pc.probe_holdout, derive_seed(seed, "probe.split"));
    const PseudoLabelSpec spec = fit_pseudo_labels(d.graph, split.train, split.holdout, pc.gbdt,
                                                   derive_seed(seed, "ssa.importance"));
    hits += spec.indices == std::array<int, 2>{1, 3};
    picks += (picks.empty() ? "" : ",") + std::to_string(spec.indices[0]) +
             std::to_string(spec.indices[1]);
  }
  return {hits >= 9, "recovered=" + std::to_string(hits) + "/10 picks=" + picks};
}

// ---- 6, 7, 8: end to end ------------------------------------------------

struct EndToEnd {
  std::map<std::uint64_t, TestScore> sgrl50, sgrl10;
};

EndToEnd& runs() {
  static EndToEnd e;
  return e;
}

TestScore sgrl_score(std::uint64_t seed, double observed) {
  auto& cache = observed == 0.5 ? runs().sgrl50 : runs().sgrl10;
  if (auto it = cache.find(seed); it != cache.end()) return it->second;
  const SynthDataset d = dataset(seed, observed);
  const PretrainResult r = pretrain(d.graph, pipeline_config(seed));
  return cache[seed] = unobserved_score(d, detect(r.bundle, d.graph).scores);
}

Verdict relative_ordering() {
  std::vector<double> sgrl, ig, attr;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SynthDataset d = dataset(seed);
    const PipelineConfig pc = pipeline_config(seed);
    sgrl.push_back(sgrl_score(seed, 0.5).f1);
    ig.push_back(unobserved_f1(d, ig_baseline_scores(d.graph, pc)));
    attr.push_back(unobserved_f1(d, attribute_baseline_scores(d.graph, pc)));
  }
  const double s = median(sgrl), i = median(ig), a = median(attr);
  return {s >= i + 0.02 && s >= a + 0.05,
          "median_f1 sgrl=" + fmt("%.4f", s) + " ig=" + fmt("%.4f", i) + " attr=" + fmt("%.4f", a) +
              " sgrl=" + list(sgrl) + " ig=" + list(ig) + " attr=" + list(attr)};
}

Verdict label_scarcity() {
  std::vector<double> f50, f10, auc50, auc10;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const TestScore a = sgrl_score(seed, 0.5), b = sgrl_score(seed, 0.1);
    f50.push_back(a.f1);
    f10.push_back(b.f1);
    auc50.push_back(a.auc);
    auc10.push_back(b.auc);
  }
  const double drop = median(f50) - median(f10);
  return {drop < 0.10, "median_f1 50%=" + fmt("%.4f", median(f50)) + " 10%=" +
                           fmt("%.4f", median(f10)) + " drop=" + fmt("%.4f", drop) +
                           " at10%=" + list(f10) + " median_auc 50%=" +
                           fmt("%.4f", median(auc50)) + " 10%=" + fmt("%.4f", median(auc10))};
}

Verdict inductive_transfer() {
  const std::uint64_t seed = 1;
  const SynthDataset train = dataset(seed);
  const PretrainResult r = pretrain(train.graph, pipeline_config(seed));
  const double in_dist = unobserved_f1(train, detect(r.bundle, train.graph).scores);
  const SynthDataset fresh = dataset(seed + 1000);
  const std::uint64_t before = bundle_checksum(r.bundle);
  const ScoreReport report = detect(r.bundle, fresh.graph);
  const bool unchanged = bundle_checksum(r.bundle) == before;
  const double transfer = all_nodes_f1(fresh, report.scores);
  const bool close = std::abs(transfer - in_dist) <= 0.10;
  return {close && unchanged, "in_distribution_f1=" + fmt("%.4f", in_dist) + " fresh_f1=" +
                                  fmt("%.4f", transfer) + " checksum_unchanged=" +
                                  (unchanged ? "yes" : "no")};
}

// ---- 9: determinism and persistence -------------------------------------

Verdict determinism() {
  SynthConfig sc;
  sc.n_normal = 150;
  sc.n_motifs = 8;
  sc.observed_fraction = 0.6;
  sc.seed = 9;
  const SynthDataset d = generate(sc);
  PipelineConfig pc;
  pc.attribute_width = 2;
  pc.hidden_width = 4;
  pc.detect_attribute_width = 2;
  pc.detect_hidden_width = 6;
  pc.max_epochs = 10;
  pc.detect_max_epochs = 10;
  pc.probe_interval = 5;
  pc.probe_holdout = 0.2;
  pc.seed = 9;
  const std::string a = serialize_checkpoint(pretrain(d.graph, pc).bundle);
  const std::string b = serialize_checkpoint(pretrain(d.graph, pc).bundle);
  const bool same = a == b;
  const CheckpointBundle bundle = parse_checkpoint(a);
  const bool round_trip = serialize_checkpoint(parse_checkpoint(serialize_checkpoint(bundle))) == a;

  auto code = [](const std::string& bytes) {
    try {
      parse_checkpoint(bytes);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kOk;
  };
  std::string magic = a;
  magic[1] = '?';
  std::string version = a;
  version[4] = 7;
  std::string shape = a;
  const auto at = shape.find("pipeline.f1=4\n");
  if (at != std::string::npos) shape[at + 12] = '5';
  const ErrorCode codes[] = {code(magic), code(version), code(a.substr(0, a.size() - 1)),
                             code(shape)};
  const bool distinct = codes[0] == ErrorCode::kBadMagic && codes[1] == ErrorCode::kVersion &&
                        codes[2] == ErrorCode::kTruncated && codes[3] == ErrorCode::kInconsistent;
  std::string names;
  for (ErrorCode c : codes) names += std::string(names.empty() ? "" : ",") + error_code_name(c);
  return {same && round_trip && distinct,
          std::string("identical=") + (same ? "yes" : "no") +
              " round_trip=" + (round_trip ? "yes" : "no") + " errors=" + names};
}

struct Criterion {
  int id;
  double budget_seconds;
  std::function<Verdict()> run;
};

}  // namespace
}  // namespace sgrl

int main(int argc, char** argv) {
  using namespace sgrl;
  CLI::App app{"Acceptance checks"};
  std::vector<int> only;
  bool strict = false;
  app.add_option("--criterion", only, "run only these criteria (repeatable)");
  app.add_flag("--strict", strict, "exit nonzero when a criterion fails");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, 60, gradients},
      {2, 10, parameter_count},
      {3, 60, metric_oracles},
      {4, 300, structural_contrast},
      {5, 120, pseudo_label_recovery},
      {6, 1200, relative_ordering},
      {7, 1200, label_scarcity},
      {8, 600, inductive_transfer},
      {9, 10, determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = Clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    const bool in_budget = seconds < c.budget_seconds;
    const bool pass = v.pass && in_budget;
    failed += !pass;
    std::printf("criterion %d %s %s time=%.1fs%s\n", c.id, pass ? "PASS" : "FAIL",
                v.detail.c_str(), seconds, in_budget ? "" : " (over budget)");
    std::fflush(stdout);
  }
  return strict && failed > 0 ? 1 : 0;
}
