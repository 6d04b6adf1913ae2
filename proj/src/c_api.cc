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


#include "sgrl/sgrl_c.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "sgrl/error.h"
#include "sgrl/graph.h"
#include "sgrl/ig_encoder.h"
#include "sgrl/pipeline.h"
#include "sgrl/run_config.h"
#include "sgrl/synthgen.h"
#include "sgrl/verify.h"

struct sgrl_config {
  sgrl::RunConfig value;
};

struct sgrl_graph {
  sgrl::Graph value;
};

struct sgrl_model {
  sgrl::CheckpointBundle bundle;
  std::vector<sgrl::EncoderHistory> histories;
};

struct sgrl_scores {
  sgrl::ScoreReport value;
};

namespace {

thread_local std::string last_error;

template <class F>
sgrl_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return SGRL_OK;
  } catch (const sgrl::Error& e) {
    last_error = e.what();
    return static_cast<sgrl_status>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SGRL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SGRL_ERR_INTERNAL;
  }
}

// Argument errors are not library error codes; they are reported separately.
template <class F>
sgrl_status with_args(bool ok, const char* what, F&& f) {
  if (!ok) {
    last_error = what;
    return SGRL_ERR_ARGUMENT;
  }
  return guarded(std::forward<F>(f));
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* sgrl_last_error(void) { return last_error.c_str(); }

const char* sgrl_status_name(sgrl_status status) {
  switch (status) {
    case SGRL_ERR_ARGUMENT:
      return "argument";
    case SGRL_ERR_INTERNAL:
      return "internal";
    default:
      return sgrl::error_code_name(static_cast<sgrl::ErrorCode>(status));
  }
}

void sgrl_string_free(char* s) { std::free(s); }

sgrl_status sgrl_config_new(sgrl_config** out) {
  return with_args(out != nullptr, "null output", [&] { *out = new sgrl_config(); });
}

void sgrl_config_free(sgrl_config* config) { delete config; }

sgrl_status sgrl_config_load(sgrl_config* config, const char* path) {
  return with_args(config && path, "null argument", [&] {
    std::FILE* f = std::fopen(path, "rb");
    if (f == nullptr) {
      throw sgrl::Error(sgrl::ErrorCode::kIo, std::string("cannot open ") + path);
    }
    std::string text;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, n);
    std::fclose(f);
    config->value = sgrl::parse_run_config(text, config->value);
  });
}

sgrl_status sgrl_config_set(sgrl_config* config, const char* key, const char* value) {
  return with_args(config && key && value, "null argument", [&] {
    sgrl::set_config_value(config->value, key, value);
    config->value.propagate_seed();
  });
}

sgrl_status sgrl_config_get(const sgrl_config* config, const char* key, char** out) {
  return with_args(config && key && out, "null argument", [&] {
    *out = copy_string(sgrl::get_config_value(config->value, key));
  });
}

sgrl_status sgrl_config_set_seed(sgrl_config* config, uint64_t seed) {
  return with_args(config != nullptr, "null config", [&] {
    config->value.seed = seed;
    config->value.propagate_seed();
  });
}

sgrl_status sgrl_config_format(const sgrl_config* config, const char* prefix, char** out) {
  return with_args(config && out, "null argument", [&] {
    std::vector<std::string> prefixes;
    if (prefix != nullptr && *prefix != '\0') prefixes.emplace_back(prefix);
    *out = copy_string(sgrl::format_run_config(config->value, prefixes));
  });
}

sgrl_status sgrl_config_help(char** out) {
  return with_args(out != nullptr, "null output", [&] { *out = copy_string(sgrl::config_help()); });
}

sgrl_status sgrl_generate(const sgrl_config* config, const char* dir) {
  return with_args(config && dir, "null argument", [&] {
    sgrl::write_dataset(sgrl::generate(config->value.synth), dir);
  });
}

sgrl_status sgrl_graph_load(const char* dir, sgrl_graph** out) {
  return with_args(dir && out, "null argument", [&] {
    auto g = std::make_unique<sgrl_graph>();
    g->value = sgrl::load_graph(sgrl::DatasetPaths::in_directory(dir));
    *out = g.release();
  });
}

void sgrl_graph_free(sgrl_graph* graph) { delete graph; }

size_t sgrl_graph_node_count(const sgrl_graph* graph) {
  return graph ? graph->value.node_count() : 0;
}

size_t sgrl_graph_edge_count(const sgrl_graph* graph) {
  return graph ? graph->value.edge_count() : 0;
}

sgrl_status sgrl_pretrain(const sgrl_config* config, const sgrl_graph* graph, sgrl_model** out) {
  return with_args(config && graph && out, "null argument", [&] {
    sgrl::PretrainResult r = sgrl::pretrain(graph->value, config->value.pipeline);
    auto m = std::make_unique<sgrl_model>();
    m->bundle = std::move(r.bundle);
    m->histories = std::move(r.histories);
    *out = m.release();
  });
}

void sgrl_model_free(sgrl_model* model) { delete model; }

sgrl_status sgrl_model_save(const sgrl_model* model, const char* path) {
  return with_args(model && path, "null argument",
                   [&] { sgrl::save_checkpoint(model->bundle, path); });
}

sgrl_status sgrl_model_load(const char* path, sgrl_model** out) {
  return with_args(path && out, "null argument", [&] {
    auto m = std::make_unique<sgrl_model>();
    m->bundle = sgrl::load_checkpoint(path);
    *out = m.release();
  });
}

sgrl_status sgrl_model_write_probe_history(const sgrl_model* model, const char* path) {
  return with_args(model && path, "null argument",
                   [&] { sgrl::write_probe_history(path, model->histories); });
}

sgrl_status sgrl_model_checksum(const sgrl_model* model, uint64_t* out) {
  return with_args(model && out, "null argument",
                   [&] { *out = sgrl::bundle_checksum(model->bundle); });
}

sgrl_status sgrl_model_set_threshold(sgrl_model* model, double threshold) {
  return with_args(model != nullptr, "null model", [&] {
    sgrl::PipelineConfig c = model->bundle.config;
    c.threshold = threshold;
    c.validate();
    model->bundle.config = c;
  });
}

sgrl_status sgrl_model_config(const sgrl_model* model, char** out) {
  return with_args(model && out, "null argument", [&] {
    *out = copy_string(sgrl::format_config_block(model->bundle.config, model->bundle.spec));
  });
}

sgrl_status sgrl_detect(const sgrl_model* model, const sgrl_graph* graph, sgrl_scores** out) {
  return with_args(model && graph && out, "null argument", [&] {
    auto s = std::make_unique<sgrl_scores>();
    s->value = sgrl::detect(model->bundle, graph->value);
    *out = s.release();
  });
}

void sgrl_scores_free(sgrl_scores* scores) { delete scores; }

size_t sgrl_scores_count(const sgrl_scores* scores) {
  return scores ? scores->value.scores.size() : 0;
}

sgrl_status sgrl_scores_get(const sgrl_scores* scores, size_t i, double* score, int* flag) {
  return with_args(scores != nullptr, "null scores", [&] {
    sgrl::check(i < scores->value.scores.size(), sgrl::ErrorCode::kOutOfRange,
                "score index " + std::to_string(i) + " out of range");
    if (score) *score = scores->value.scores[i];
    if (flag) *flag = scores->value.flags[i] ? 1 : 0;
  });
}

sgrl_status sgrl_scores_write(const sgrl_scores* scores, const sgrl_graph* graph,
                              const char* path) {
  return with_args(scores && graph && path, "null argument",
                   [&] { sgrl::write_scores_tsv(path, graph->value, scores->value); });
}

sgrl_status sgrl_eval(const char* scores_path, const char* labels_path, double threshold,
                      const char* exclude_path, char** report) {
  return with_args(scores_path && labels_path && report, "null argument", [&] {
    const sgrl::EvalReport r = sgrl::evaluate_score_file(
        scores_path, labels_path, threshold,
        exclude_path ? std::filesystem::path(exclude_path) : std::filesystem::path());
    *report = copy_string(sgrl::format_report(r));
  });
}

sgrl_status sgrl_gradcheck(int seeds, double* max_error, char** report) {
  return with_args(seeds > 0 && max_error && report, "invalid argument", [&] {
    double worst = 0.0;
    std::string text;
    for (const sgrl::NamedGradCheck& c : sgrl::check_all_gradients({}, seeds)) {
      char line[128];
      std::snprintf(line, sizeof line, "%-9s seed %llu  max relative error %.3e\n",
                    c.loss.c_str(), static_cast<unsigned long long>(c.seed),
                    c.report.max_relative_error);
      text += line;
      worst = std::max(worst, c.report.max_relative_error);
    }
    *max_error = worst;
    *report = copy_string(text);
  });
}

sgrl_status sgrl_param_count(int layers, int hidden_width, int input_width, long long* out) {
  return with_args(out != nullptr, "null output",
                   [&] { *out = sgrl::param_count(layers, hidden_width, input_width); });
}

}  // extern "C"
