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


// Command-line front end over the C interface.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sgrl/sgrl_c.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitCheck = 3;

// Thrown to unwind with a given exit code after a message was printed.
struct Exit {
  int code;
};

int exit_code_for(sgrl_status s) {
  switch (s) {
    case SGRL_OK:
      return kExitOk;
    case SGRL_ERR_CONFIG:
    case SGRL_ERR_ARGUMENT:
      return kExitUsage;
    default:
      return kExitData;
  }
}

void ok(sgrl_status s) {
  if (s == SGRL_OK) return;
  std::fprintf(stderr, "sgrl: %s: %s\n", sgrl_status_name(s), sgrl_last_error());
  throw Exit{exit_code_for(s)};
}

class OwnedString {
 public:
  OwnedString() = default;
  OwnedString(const OwnedString&) = delete;
  OwnedString& operator=(const OwnedString&) = delete;
  ~OwnedString() { sgrl_string_free(p_); }
  char** out() { return &p_; }
  const char* c_str() const { return p_ ? p_ : ""; }

 private:
  char* p_ = nullptr;
};

template <class T, void (*Free)(T*)>
class Handle {
 public:
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p_); }
  T** out() { return &p_; }
  T* get() const { return p_; }

 private:
  T* p_ = nullptr;
};

using Config = Handle<sgrl_config, sgrl_config_free>;
using GraphHandle = Handle<sgrl_graph, sgrl_graph_free>;
using Model = Handle<sgrl_model, sgrl_model_free>;
using Scores = Handle<sgrl_scores, sgrl_scores_free>;

struct ConfigFlags {
  std::string file;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", file, "key=value run configuration file");
    cmd->add_option("--seed", seed, "master seed (overrides the config file)");
    cmd->add_option("--set", overrides, "extra key=value setting, repeatable");
  }

  void build(Config& config) const {
    ok(sgrl_config_new(config.out()));
    if (!file.empty()) ok(sgrl_config_load(config.get(), file.c_str()));
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::fprintf(stderr, "sgrl: --set expects key=value, got '%s'\n", kv.c_str());
        throw Exit{kExitUsage};
      }
      ok(sgrl_config_set(config.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
    }
    if (seed) ok(sgrl_config_set_seed(config.get(), *seed));
  }
};

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (f == nullptr) {
    std::fprintf(stderr, "sgrl: cannot write %s\n", path.string().c_str());
    throw Exit{kExitData};
  }
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

std::string config_text(const Config& config) {
  OwnedString s;
  ok(sgrl_config_format(config.get(), "", s.out()));
  return s.c_str();
}

std::string help_footer() {
  OwnedString help;
  if (sgrl_config_help(help.out()) != SGRL_OK) return {};
  return std::string("Configuration keys (key, default, description):\n") + help.c_str() +
         "\nExit codes: 0 success, 1 usage or config error, 2 data error, 3 check failure.";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Black-market account detection on attributed graphs"};
  app.require_subcommand(1);
  app.footer(help_footer());

  ConfigFlags gen_flags;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("generate", "write a synthetic dataset");
  gen_flags.attach(gen);
  gen->add_option("--out", gen_out, "output directory")->required();

  ConfigFlags pre_flags;
  std::string pre_data, pre_out;
  CLI::App* pre = app.add_subcommand("pretrain", "train all encoders and write a checkpoint");
  pre_flags.attach(pre);
  pre->add_option("--data", pre_data, "dataset directory")->required();
  pre->add_option("--out", pre_out, "checkpoint path")->required();

  std::string det_model, det_data, det_out;
  std::optional<double> det_threshold;
  CLI::App* det = app.add_subcommand("detect", "score every node with a checkpoint");
  det->add_option("--model", det_model, "checkpoint path")->required();
  det->add_option("--data", det_data, "dataset directory")->required();
  det->add_option("--threshold", det_threshold, "flag threshold (default: checkpoint value)");
  det->add_option("--out", det_out, "scores.tsv path")->required();

  std::string ev_scores, ev_labels, ev_exclude;
  double ev_threshold = 0.5;
  CLI::App* ev = app.add_subcommand("eval", "metrics of a scores file against labels");
  ev->add_option("--scores", ev_scores, "scores.tsv path")->required();
  ev->add_option("--labels", ev_labels, "labels.csv or ground_truth.csv path")->required();
  ev->add_option("--exclude", ev_exclude, "labels.csv whose nodes are skipped (training labels)");
  ev->add_option("--threshold", ev_threshold, "flag threshold")->capture_default_str();

  int gc_seeds = 5;
  CLI::App* gc = app.add_subcommand("gradcheck", "finite-difference check of every loss");
  gc->add_option("--seeds", gc_seeds, "number of random graphs")->capture_default_str();

  int pc_l = 2, pc_f1 = 32, pc_f2 = 56;
  CLI::App* pc = app.add_subcommand("paramcount", "closed-form encoder parameter count");
  pc->add_option("l,--l", pc_l, "layers")->capture_default_str();
  pc->add_option("f1,--f1", pc_f1, "hidden width")->capture_default_str();
  pc->add_option("f2,--f2", pc_f2, "input width")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      Config config;
      gen_flags.build(config);
      ok(sgrl_generate(config.get(), gen_out.c_str()));
      write_text(std::filesystem::path(gen_out) / "run_config.txt", config_text(config));
    } else if (pre->parsed()) {
      Config config;
      pre_flags.build(config);
      GraphHandle graph;
      ok(sgrl_graph_load(pre_data.c_str(), graph.out()));
      Model model;
      ok(sgrl_pretrain(config.get(), graph.get(), model.out()));
      const std::filesystem::path dir = std::filesystem::path(pre_out).parent_path();
      std::error_code ec;
      if (!dir.empty()) std::filesystem::create_directories(dir, ec);
      ok(sgrl_model_save(model.get(), pre_out.c_str()));
      ok(sgrl_model_write_probe_history(model.get(), (dir / "probe_history.tsv").string().c_str()));
      std::uint64_t checksum = 0;
      ok(sgrl_model_checksum(model.get(), &checksum));
      std::printf("checkpoint %s checksum %016" PRIx64 "\n", pre_out.c_str(), checksum);
    } else if (det->parsed()) {
      Model model;
      ok(sgrl_model_load(det_model.c_str(), model.out()));
      if (det_threshold) ok(sgrl_model_set_threshold(model.get(), *det_threshold));
      GraphHandle graph;
      ok(sgrl_graph_load(det_data.c_str(), graph.out()));
      Scores scores;
      ok(sgrl_detect(model.get(), graph.get(), scores.out()));
      ok(sgrl_scores_write(scores.get(), graph.get(), det_out.c_str()));
      std::size_t flagged = 0;
      for (std::size_t i = 0; i < sgrl_scores_count(scores.get()); ++i) {
        int flag = 0;
        ok(sgrl_scores_get(scores.get(), i, nullptr, &flag));
        flagged += flag;
      }
      std::printf("scored %zu nodes, flagged %zu\n", sgrl_scores_count(scores.get()), flagged);
    } else if (ev->parsed()) {
      OwnedString report;
      ok(sgrl_eval(ev_scores.c_str(), ev_labels.c_str(), ev_threshold,
                   ev_exclude.empty() ? nullptr : ev_exclude.c_str(), report.out()));
      std::fputs(report.c_str(), stdout);
    } else if (gc->parsed()) {
      double worst = 0.0;
      OwnedString report;
      ok(sgrl_gradcheck(gc_seeds, &worst, report.out()));
      std::fputs(report.c_str(), stdout);
      const bool pass = worst < 1e-4;
      std::printf("max relative error %.3e: %s\n", worst, pass ? "pass" : "FAIL");
      return pass ? kExitOk : kExitCheck;
    } else if (pc->parsed()) {
      long long count = 0;
      ok(sgrl_param_count(pc_l, pc_f1, pc_f2, &count));
      std::printf("%lld\n", count);
    }
  } catch (const Exit& e) {
    return e.code;
  }
  return kExitOk;
}
