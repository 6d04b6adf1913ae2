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


// Flat key=value run configuration. Keys carry a section prefix
// (pipeline., gbdt., synth.) except the master seed.

#ifndef SGRL_RUN_CONFIG_H_
#define SGRL_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sgrl/pipeline.h"
#include "sgrl/synthgen.h"

namespace sgrl {

struct RunConfig {
  std::uint64_t seed = 0;
  PipelineConfig pipeline;
  SynthConfig synth;

  // Copies seed into the pipeline and synth sections.
  void propagate_seed();
};

struct ConfigKey {
  std::string key;
  std::string description;
};

// Every accepted key in a fixed order.
const std::vector<ConfigKey>& config_keys();

// Unknown keys and unparsable values raise kConfig naming the key.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);
std::string get_config_value(const RunConfig& config, std::string_view key);

// Lines are key=value; blank lines and lines starting with '#' are skipped.
RunConfig parse_run_config(std::string_view text, RunConfig base = {});
RunConfig load_run_config(const std::filesystem::path& path);

// All keys, one key=value line each, in config_keys() order. With a prefix
// filter only keys starting with one of the prefixes are written.
std::string format_run_config(const RunConfig& config,
                              const std::vector<std::string>& prefixes = {});

// Key, default and description per line, for --help.
std::string config_help();

}  // namespace sgrl

#endif  // SGRL_RUN_CONFIG_H_
