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


// Two-phase detection system. Pretraining fits three representation
// encoders (structural contrast over all nodes, structural contrast between
// labeled classes, attribute self-supervision), freezes them, then fits the
// detection encoder on their concatenated outputs. Detection is a pure
// forward pass over a bundle.

#ifndef SGRL_PIPELINE_H_
#define SGRL_PIPELINE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sgrl/contrastive.h"
#include "sgrl/gbdt.h"
#include "sgrl/graph.h"
#include "sgrl/ig_encoder.h"
#include "sgrl/metrics.h"
#include "sgrl/ssa.h"
#include "sgrl/training.h"

namespace sgrl {

struct PipelineConfig {
  // Representation encoders.
  int attribute_width = 8;   // f
  int hidden_width = 32;     // f1
  // Detection encoder.
  int detect_attribute_width = 64;
  int detect_hidden_width = 128;

  int hops = 1;
  double threshold = 0.5;          // rho, flag = p > rho
  double replace_threshold = 0.5;  // r-hat, a' bit = r >= r-hat

  int max_epochs = 200;
  double learning_rate = 1e-2;
  int detect_max_epochs = 100;
  double detect_learning_rate = 5e-3;
  int probe_interval = 20;
  double probe_holdout = 0.1;
  DiscriminatorActivation disc_activation = DiscriminatorActivation::kRelu;

  // Label-free variant: structural contrast over all nodes plus attribute
  // self-supervision with fixed pseudo-label attributes.
  bool sgrl_sa = false;
  std::array<int, 2> sa_pseudo_labels{1, 3};

  std::uint64_t seed = 0;
  GbdtConfig gbdt;

  int input_width() const { return kNumAttributes * attribute_width; }
  int detect_input_width() const {
    return 2 * hidden_width + kNumAttributes * detect_attribute_width;
  }
  EncoderConfig encoder_config() const;
  EncoderConfig detect_config() const;
  void validate() const;
};

// All learned state needed for detection.
struct CheckpointBundle {
  PipelineConfig config;
  PseudoLabelSpec spec;

  AttributeTable sss_table;
  GnnStack sss_stack;
  DiscriminatorParams sss_disc;

  AttributeTable ss_table;
  GnnStack ss_stack;
  DiscriminatorParams ss_disc;

  AttributeTable ssa_table;
  GnnStack ssa_stack;
  SsaHead ssa_head;

  AttributeTable detect_table;
  EncoderParams detect;

  // Tensors in checkpoint order with their stored names.
  template <class F> void visit(F&& f) { visit_all(*this, f); }
  template <class F> void visit(F&& f) const { visit_all(*this, f); }
  template <class Self, class F>
  static void visit_all(Self& s, F& f) {
    auto with = [&f](const std::string& prefix) {
      return [&f, prefix](const std::string& name, auto& t) { f(prefix + name, t); };
    };
    s.sss_table.visit(with("sss."));
    s.sss_stack.visit(with("sss."));
    s.sss_disc.visit(with("sss."));
    s.ss_table.visit(with("ss."));
    s.ss_stack.visit(with("ss."));
    s.ss_disc.visit(with("ss."));
    s.ssa_table.visit(with("ssa."));
    s.ssa_stack.visit(with("ssa."));
    s.ssa_head.visit(with("ssa."));
    s.detect_table.visit(with("detect."));
    s.detect.visit(with("detect."));
  }
};

// Randomly initialized bundle with every tensor shaped by config.
CheckpointBundle init_bundle(const PipelineConfig& config, std::uint64_t seed);

// Bitwise equality of config block, spec and every tensor.
bool operator==(const CheckpointBundle& a, const CheckpointBundle& b);

// FNV-1a over the serialized bundle.
std::uint64_t bundle_checksum(const CheckpointBundle& bundle);

// ---- Checkpoint file ----------------------------------------------------
// "SGRL", u32 version, u32 config length + key=value lines, u32 tensor
// count, then per tensor: u16 name length, name, u8 rank, u32 dims, f32
// payload. All integers and floats little-endian.

inline constexpr std::uint32_t kCheckpointVersion = 1;

std::string serialize_checkpoint(const CheckpointBundle& bundle);
CheckpointBundle parse_checkpoint(std::string_view bytes);
void save_checkpoint(const CheckpointBundle& bundle, const std::filesystem::path& path);
CheckpointBundle load_checkpoint(const std::filesystem::path& path);

// key=value lines for the pipeline and gbdt settings plus the pseudo-label
// spec, as stored in the checkpoint config block.
std::string format_config_block(const PipelineConfig& config, const PseudoLabelSpec& spec);

// ---- Probes -------------------------------------------------------------

struct LabelSplit {
  std::vector<NodeId> train;
  std::vector<NodeId> holdout;
};

// Stratified split of the labeled nodes of g; each class contributes
// round(fraction * count) nodes (at least one when it has two or more).
LabelSplit split_labels(const Graph& g, double holdout_fraction, std::uint64_t seed);

// [N, d + 7]: representation rows followed by the attribute bits.
Tensor probe_features(const Tensor* representations, std::span<const AttributeBits> attributes);

// Fits the boosted-tree model on features of split.train, validated on
// split.holdout, and returns its best holdout AUC. Labels come from g.
double probe_auc(const Tensor& features, const Graph& g, const LabelSplit& split,
                 const GbdtConfig& config, std::uint64_t seed);

// ---- Pretraining --------------------------------------------------------

struct EncoderHistory {
  std::string encoder;  // "sss", "ss", "ssa", "detect"
  TrainHistory history;
};

struct PretrainResult {
  CheckpointBundle bundle;
  std::vector<EncoderHistory> histories;
};

PretrainResult pretrain(const Graph& g, const PipelineConfig& config);

// "encoder<TAB>epoch<TAB>auc" per probe.
void write_probe_history(const std::filesystem::path& path,
                         std::span<const EncoderHistory> histories);

// ---- Detection ----------------------------------------------------------

struct DetectionInputs {
  Tensor prefix;                        // [N, 2 f1]: SSS then SS representations
  Tensor pseudo_predictions;            // [N, 2]
  std::vector<AttributeBits> replaced;  // a'
};

DetectionInputs detection_inputs(const CheckpointBundle& bundle, const Graph& g);

// Initial detection representation of node i, width 2 f1 + 7 f_det.
Tensor build_detection_input(const CheckpointBundle& bundle, const Graph& g, NodeId i);

struct ScoreReport {
  std::vector<double> scores;
  std::vector<bool> flags;
  double threshold = 0.5;
};

// Scores every node of g. The label-free variant scores by the mean
// predicted probability of the two pseudo-label attributes.
ScoreReport detect(const CheckpointBundle& bundle, const Graph& g);

// "node_id<TAB>score<TAB>flag" with a header row, scores to 6 decimals.
void write_scores_tsv(const std::filesystem::path& path, const Graph& g,
                      const ScoreReport& report);

struct ScoreFile {
  std::vector<std::string> ids;
  std::vector<double> scores;
};

ScoreFile read_scores_tsv(const std::filesystem::path& path);

// Scores of a scores.tsv file against a labels.csv file. Nodes without a
// label, and nodes labeled in `exclude` when it is non-empty, are skipped.
EvalReport evaluate_score_file(const std::filesystem::path& scores,
                               const std::filesystem::path& labels, double threshold,
                               const std::filesystem::path& exclude = {});

// ---- Reference detectors ------------------------------------------------

// IG-Encoder alone on attribute encodings (f_det, f1_det), probe-stopped.
std::vector<double> ig_baseline_scores(const Graph& g, const PipelineConfig& config,
                                       TrainHistory* history = nullptr);

// Boosted trees on the 7 attribute bits, all n_estimators rounds. With only
// 128 distinct inputs the holdout AUC saturates within a round or two, so
// AUC-based truncation would leave the ensemble at the class prior.
std::vector<double> attribute_baseline_scores(const Graph& g, const PipelineConfig& config);

}  // namespace sgrl

#endif  // SGRL_PIPELINE_H_
