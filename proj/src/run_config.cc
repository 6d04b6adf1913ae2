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


#include "sgrl/run_config.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "sgrl/error.h"

namespace sgrl {
namespace {

struct Entry {
  ConfigKey info;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  fail(ErrorCode::kConfig,
       "invalid value '" + std::string(value) + "' for key " + std::string(key));
}

std::string format_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v);
  return out;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view v) {
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v);
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(key, v);
}

std::array<int, 2> parse_pair(std::string_view key, std::string_view v) {
  const auto comma = v.find(',');
  if (comma == std::string_view::npos) bad_value(key, v);
  return {parse_int<int>(key, v.substr(0, comma)), parse_int<int>(key, v.substr(comma + 1))};
}

std::string format_pair(const std::array<int, 2>& p) {
  return std::to_string(p[0]) + "," + std::to_string(p[1]);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename Field>
Entry int_entry(std::string key, std::string description, Field field) {
  return {{key, std::move(description)},
          [field](const RunConfig& c) { return std::to_string(field(c)); },
          [field, key](RunConfig& c, std::string_view v) {
            using Int = std::remove_cvref_t<decltype(field(c))>;
            field(c) = parse_int<Int>(key, v);
          }};
}

template <typename Field>
Entry double_entry(std::string key, std::string description, Field field) {
  return {{key, std::move(description)},
          [field](const RunConfig& c) { return format_double(field(c)); },
          [field, key](RunConfig& c, std::string_view v) { field(c) = parse_double(key, v); }};
}

template <typename Field>
Entry bool_entry(std::string key, std::string description, Field field) {
  return {{key, std::move(description)},
          [field](const RunConfig& c) {
            return std::string(field(c) ? "true" : "false");
          },
          [field, key](RunConfig& c, std::string_view v) { field(c) = parse_bool(key, v); }};
}

template <typename Field>
Entry pair_entry(std::string key, std::string description, Field field) {
  return {{key, std::move(description)},
          [field](const RunConfig& c) { return format_pair(field(c)); },
          [field, key](RunConfig& c, std::string_view v) { field(c) = parse_pair(key, v); }};
}

#define SGRL_FIELD(path) [](auto& c) -> auto& { return c.path; }

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      int_entry("seed", "master seed for every random stream", SGRL_FIELD(seed)),
      int_entry("pipeline.f", "attribute vector width of the representation encoders",
                SGRL_FIELD(pipeline.attribute_width)),
      int_entry("pipeline.f1", "hidden width of the representation encoders",
                SGRL_FIELD(pipeline.hidden_width)),
      int_entry("pipeline.f_det", "attribute vector width of the detection encoder",
                SGRL_FIELD(pipeline.detect_attribute_width)),
      int_entry("pipeline.f1_det", "hidden width of the detection encoder",
                SGRL_FIELD(pipeline.detect_hidden_width)),
      int_entry("pipeline.k", "subgraph radius in hops", SGRL_FIELD(pipeline.hops)),
      double_entry("pipeline.rho", "flag threshold on detection scores (strict)",
                   SGRL_FIELD(pipeline.threshold)),
      double_entry("pipeline.r", "pseudo-label replacement threshold (inclusive)",
                   SGRL_FIELD(pipeline.replace_threshold)),
      int_entry("pipeline.max_epochs", "epoch cap for SSS, SS and SSA encoders",
                SGRL_FIELD(pipeline.max_epochs)),
      double_entry("pipeline.learning_rate", "Adam step for SSS, SS and SSA encoders",
                   SGRL_FIELD(pipeline.learning_rate)),
      int_entry("pipeline.detect_max_epochs", "epoch cap for the detection encoder",
                SGRL_FIELD(pipeline.detect_max_epochs)),
      double_entry("pipeline.detect_learning_rate", "Adam step for the detection encoder",
                   SGRL_FIELD(pipeline.detect_learning_rate)),
      int_entry("pipeline.probe_interval", "epochs between early-stopping probes",
                SGRL_FIELD(pipeline.probe_interval)),
      double_entry("pipeline.probe_holdout", "fraction of labels held out for probes",
                   SGRL_FIELD(pipeline.probe_holdout)),
      {{"pipeline.disc_activation", "discriminator hidden activation: relu or linear"},
       [](const RunConfig& c) {
         return std::string(activation_name(c.pipeline.disc_activation));
       },
       [](RunConfig& c, std::string_view v) {
         if (v != "relu" && v != "linear") bad_value("pipeline.disc_activation", v);
         c.pipeline.disc_activation = parse_activation(v);
       }},
      bool_entry("pipeline.sgrl_sa", "label-free variant (SSS + SSA only)",
                 SGRL_FIELD(pipeline.sgrl_sa)),
      pair_entry("pipeline.sa_pseudo_labels", "pseudo-label attributes in label-free mode",
                 SGRL_FIELD(pipeline.sa_pseudo_labels)),
      double_entry("gbdt.learning_rate", "boosting shrinkage", SGRL_FIELD(pipeline.gbdt.learning_rate)),
      int_entry("gbdt.max_depth", "maximum tree depth", SGRL_FIELD(pipeline.gbdt.max_depth)),
      int_entry("gbdt.n_estimators", "maximum boosting rounds",
                SGRL_FIELD(pipeline.gbdt.n_estimators)),
      double_entry("gbdt.subsample", "row fraction per tree", SGRL_FIELD(pipeline.gbdt.subsample)),
      double_entry("gbdt.colsample_bytree", "feature fraction per tree",
                   SGRL_FIELD(pipeline.gbdt.colsample_bytree)),
      int_entry("gbdt.early_stopping_rounds", "rounds without validation AUC gain before stopping",
                SGRL_FIELD(pipeline.gbdt.early_stopping_rounds)),
      double_entry("gbdt.l2_reg", "L2 penalty on leaf values", SGRL_FIELD(pipeline.gbdt.l2_reg)),
      double_entry("gbdt.min_child_weight", "minimum hessian sum per child",
                   SGRL_FIELD(pipeline.gbdt.min_child_weight)),
      {{"gbdt.importance", "importance type: gain or frequency"},
       [](const RunConfig& c) {
         return std::string(c.pipeline.gbdt.importance == ImportanceType::kGain ? "gain"
                                                                                : "frequency");
       },
       [](RunConfig& c, std::string_view v) {
         if (v == "gain") {
           c.pipeline.gbdt.importance = ImportanceType::kGain;
         } else if (v == "frequency") {
           c.pipeline.gbdt.importance = ImportanceType::kFrequency;
         } else {
           bad_value("gbdt.importance", v);
         }
       }},
      int_entry("synth.n_normal", "background nodes", SGRL_FIELD(synth.n_normal)),
      int_entry("synth.n_motifs", "planted motifs", SGRL_FIELD(synth.n_motifs)),
      int_entry("synth.transaction_accounts", "transaction accounts per motif",
                SGRL_FIELD(synth.transaction_accounts)),
      int_entry("synth.service_accounts", "service accounts per motif",
                SGRL_FIELD(synth.service_accounts)),
      int_entry("synth.camouflage_accounts", "camouflage accounts per motif",
                SGRL_FIELD(synth.camouflage_accounts)),
      int_entry("synth.buyers", "fraudster buyers per motif", SGRL_FIELD(synth.buyers)),
      int_entry("synth.m", "background edges per new node", SGRL_FIELD(synth.edges_per_node)),
      pair_entry("synth.informative", "label-correlated attribute indices",
                 SGRL_FIELD(synth.informative)),
      double_entry("synth.p_informative_bma", "P(informative attribute) for BMAs",
                   SGRL_FIELD(synth.p_informative_bma)),
      double_entry("synth.p_informative_other", "P(informative attribute) for other nodes",
                   SGRL_FIELD(synth.p_informative_other)),
      double_entry("synth.p_background_attr", "P(attribute) for the other attributes",
                   SGRL_FIELD(synth.p_background_attr)),
      double_entry("synth.observed_fraction", "stratified fraction of labels written",
                   SGRL_FIELD(synth.observed_fraction)),
  };
  return table;
}

#undef SGRL_FIELD

const Entry& find_entry(std::string_view key) {
  for (const Entry& e : entries()) {
    if (e.info.key == key) return e;
  }
  fail(ErrorCode::kConfig, "unknown config key " + std::string(key));
}

}  // namespace

void RunConfig::propagate_seed() {
  pipeline.seed = seed;
  synth.seed = seed;
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const Entry& e : entries()) out.push_back(e.info);
    return out;
  }();
  return keys;
}

void set_config_value(RunConfig& config, std::string_view key, std::string_view value) {
  find_entry(key).set(config, trim(value));
}

std::string get_config_value(const RunConfig& config, std::string_view key) {
  return find_entry(key).get(config);
}

RunConfig parse_run_config(std::string_view text, RunConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto end = text.find('\n');
    std::string_view line = trim(text.substr(0, end));
    text = end == std::string_view::npos ? std::string_view() : text.substr(end + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    check(eq != std::string_view::npos, ErrorCode::kConfig,
          "config line " + std::to_string(line_no) + " is not key=value");
    set_config_value(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  base.propagate_seed();
  return base;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  check(static_cast<bool>(in), ErrorCode::kIo, "cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config(buffer.str());
}

std::string format_run_config(const RunConfig& config, const std::vector<std::string>& prefixes) {
  std::string out;
  for (const Entry& e : entries()) {
    bool keep = prefixes.empty();
    for (const auto& p : prefixes) keep |= e.info.key.rfind(p, 0) == 0;
    if (!keep) continue;
    out += e.info.key + "=" + e.get(config) + "\n";
  }
  return out;
}

std::string config_help() {
  const RunConfig defaults;
  std::string out;
  for (const Entry& e : entries()) {
    char line[256];
    std::snprintf(line, sizeof(line), "  %-32s %-10s %s\n", e.info.key.c_str(),
                  e.get(defaults).c_str(), e.info.description.c_str());
    out += line;
  }
  return out;
}

}  // namespace sgrl
