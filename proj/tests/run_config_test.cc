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


#include <fstream>

#include "doctest.h"
#include "sgrl/run_config.h"
#include "test_support.h"

namespace sgrl {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

TEST_CASE("defaults match the documented dimensions") {
  const RunConfig c;
  CHECK(c.pipeline.attribute_width == 8);
  CHECK(c.pipeline.hidden_width == 32);
  CHECK(c.pipeline.input_width() == 56);
  CHECK(c.pipeline.detect_input_width() == 512);
  CHECK(c.pipeline.threshold == 0.5);
  CHECK(c.pipeline.hops == 1);
  CHECK(c.synth.n_normal == 1800);
  CHECK(c.synth.n_motifs == 20);
  CHECK(c.pipeline.disc_activation == DiscriminatorActivation::kRelu);
}

TEST_CASE("parse sets keys, skips comments and propagates the seed") {
  const RunConfig c = parse_run_config(
      "# comment\n"
      "\n"
      "seed=9\n"
      "pipeline.f1 = 16\n"
      "synth.n_motifs=4\n"
      "gbdt.max_depth=3\n"
      "gbdt.importance=frequency\n"
      "pipeline.sgrl_sa=true\n"
      "pipeline.sa_pseudo_labels=2,5\n"
      "synth.informative=0,6\n"
      "pipeline.disc_activation=linear\n");
  CHECK(c.seed == 9);
  CHECK(c.pipeline.seed == 9);
  CHECK(c.synth.seed == 9);
  CHECK(c.pipeline.hidden_width == 16);
  CHECK(c.synth.n_motifs == 4);
  CHECK(c.pipeline.gbdt.max_depth == 3);
  CHECK(c.pipeline.gbdt.importance == ImportanceType::kFrequency);
  CHECK(c.pipeline.sgrl_sa);
  CHECK(c.pipeline.sa_pseudo_labels == std::array<int, 2>{2, 5});
  CHECK(c.synth.informative == std::array<int, 2>{0, 6});
  CHECK(c.pipeline.disc_activation == DiscriminatorActivation::kLinear);
}

TEST_CASE("unknown keys are rejected by name") {
  try {
    parse_run_config("synth.bogus=1\n");
    FAIL("expected config error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfig);
    CHECK(std::string(e.what()).find("synth.bogus") != std::string::npos);
  }
}

TEST_CASE("bad values and malformed lines are config errors") {
  CHECK(code_of([] { parse_run_config("pipeline.f1=abc\n"); }) == ErrorCode::kConfig);
  CHECK(code_of([] { parse_run_config("pipeline.f1=12x\n"); }) == ErrorCode::kConfig);
  CHECK(code_of([] { parse_run_config("pipeline.sgrl_sa=maybe\n"); }) == ErrorCode::kConfig);
  CHECK(code_of([] { parse_run_config("gbdt.importance=cover\n"); }) == ErrorCode::kConfig);
  CHECK(code_of([] { parse_run_config("pipeline.disc_activation=tanh\n"); }) ==
        ErrorCode::kConfig);
  CHECK(code_of([] { parse_run_config("just a line\n"); }) == ErrorCode::kConfig);
  CHECK(code_of([] { parse_run_config("synth.informative=1\n"); }) == ErrorCode::kConfig);
}

TEST_CASE("format then parse reproduces every key") {
  RunConfig c = parse_run_config("seed=3\npipeline.learning_rate=0.0123456789\nsynth.m=5\n");
  const RunConfig back = parse_run_config(format_run_config(c));
  for (const ConfigKey& k : config_keys()) {
    CHECK_MESSAGE(get_config_value(back, k.key) == get_config_value(c, k.key), k.key);
  }
  CHECK(back.pipeline.learning_rate == 0.0123456789);
}

TEST_CASE("prefix filter and help text") {
  const RunConfig c;
  const std::string synth_only = format_run_config(c, {"synth."});
  CHECK(synth_only.find("synth.n_normal=1800") != std::string::npos);
  CHECK(synth_only.find("pipeline.") == std::string::npos);
  const std::string help = config_help();
  for (const ConfigKey& k : config_keys()) CHECK(help.find(k.key) != std::string::npos);
}

TEST_CASE("load_run_config reads a file and reports a missing one") {
  const auto dir = testing::temp_dir("run_config");
  std::ofstream(dir / "run.cfg") << "seed=4\npipeline.k=2\n";
  const RunConfig c = load_run_config(dir / "run.cfg");
  CHECK(c.pipeline.seed == 4);
  CHECK(c.pipeline.hops == 2);
  CHECK(code_of([&] { load_run_config(dir / "missing.cfg"); }) == ErrorCode::kIo);
}

}  // namespace
}  // namespace sgrl
