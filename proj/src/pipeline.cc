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


#include "sgrl/pipeline.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "sgrl/error.h"
#include "sgrl/metrics.h"
#include "sgrl/rng.h"
#include "sgrl/run_config.h"

namespace sgrl {
namespace {

constexpr char kMagic[4] = {'S', 'G', 'R', 'L'};

// ---- Little-endian encoding ---------------------------------------------

void put_u8(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }

void put_u16(std::string& out, std::uint16_t v) {
  put_u8(out, v & 0xff);
  put_u8(out, v >> 8);
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) put_u8(out, (v >> (8 * k)) & 0xff);
}

void put_f32(std::string& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  put_u32(out, bits);
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::string_view take(std::size_t n, const std::string& what) {
    check(bytes_.size() - pos_ >= n, ErrorCode::kTruncated, "checkpoint truncated in " + what);
    const std::string_view out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint32_t u(std::size_t width, const std::string& what) {
    const std::string_view b = take(width, what);
    std::uint32_t v = 0;
    for (std::size_t k = 0; k < width; ++k) v |= std::uint32_t(std::uint8_t(b[k])) << (8 * k);
    return v;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Parses the config block into config + spec. Any problem is reported as an
// inconsistency between block and tensors.
void parse_config_block(std::string_view block, PipelineConfig& config, PseudoLabelSpec& spec) {
  RunConfig rc;
  std::string rest;
  bool have_spec = false;
  bool have_importance = false;
  std::istringstream lines{std::string(block)};
  std::string line;
  try {
    while (std::getline(lines, line)) {
      if (line.rfind("ssa.pseudo_labels=", 0) == 0) {
        const std::string v = line.substr(std::strlen("ssa.pseudo_labels="));
        const auto comma = v.find(',');
        check(comma != std::string::npos, ErrorCode::kInconsistent, "bad ssa.pseudo_labels");
        spec = make_pseudo_label_spec(std::stoi(v.substr(0, comma)), std::stoi(v.substr(comma + 1)));
        have_spec = true;
      } else if (line.rfind("ssa.importance=", 0) == 0) {
        std::istringstream values(line.substr(std::strlen("ssa.importance=")));
        std::string item;
        for (int a = 0; a < kNumAttributes; ++a) {
          check(static_cast<bool>(std::getline(values, item, ',')), ErrorCode::kInconsistent,
                "ssa.importance needs 7 values");
          spec.importance[a] = std::stod(item);
        }
        have_importance = true;
      } else {
        rest += line + "\n";
      }
    }
    rc = parse_run_config(rest);
    rc.pipeline.validate();
  } catch (const Error& e) {
    fail(ErrorCode::kInconsistent, std::string("checkpoint config block: ") + e.what());
  } catch (const std::exception& e) {
    fail(ErrorCode::kInconsistent, std::string("checkpoint config block: ") + e.what());
  }
  check(have_spec && have_importance, ErrorCode::kInconsistent,
        "checkpoint config block lacks the pseudo-label spec");
  config = rc.pipeline;
}

std::vector<int> node_labels(const Graph& g, std::span<const NodeId> nodes) {
  std::vector<int> y;
  y.reserve(nodes.size());
  for (NodeId i : nodes) y.push_back(g.label(i));
  return y;
}

Tensor gather_rows(const Tensor& x, std::span<const NodeId> nodes) {
  const std::size_t d = x.dim(1);
  Tensor out({nodes.size(), d});
  for (std::size_t r = 0; r < nodes.size(); ++r) {
    std::copy_n(&x.at(nodes[r], 0), d, &out.at(r, 0));
  }
  return out;
}

double holdout_auc(std::span<const double> scores, const Graph& g, std::span<const NodeId> holdout) {
  std::vector<double> s;
  for (NodeId i : holdout) s.push_back(scores[i]);
  return auc(s, node_labels(g, holdout));
}

TrainOptions train_options(const PipelineConfig& c, bool detector, std::string_view stream) {
  TrainOptions o;
  o.max_epochs = detector ? c.detect_max_epochs : c.max_epochs;
  o.learning_rate = detector ? c.detect_learning_rate : c.learning_rate;
  o.probe_interval = c.probe_interval;
  o.seed = derive_seed(c.seed, stream);
  return o;
}

SsaModel ssa_model(const CheckpointBundle& b) {
  SsaModel m;
  m.config = b.config.encoder_config();
  m.table = b.ssa_table;
  m.stack = b.ssa_stack;
  m.head = b.ssa_head;
  m.spec = b.spec;
  return m;
}

Tensor concat_columns(const Tensor& a, const Tensor& b) {
  Tensor out({a.rows(), a.cols() + b.cols()});
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::copy_n(&a.at(i, 0), a.cols(), &out.at(i, 0));
    std::copy_n(&b.at(i, 0), b.cols(), &out.at(i, a.cols()));
  }
  return out;
}

}  // namespace

// ---- Config -------------------------------------------------------------

EncoderConfig PipelineConfig::encoder_config() const {
  EncoderConfig c;
  c.attribute_width = attribute_width;
  c.hidden_width = hidden_width;
  c.input_width = input_width();
  c.threshold = threshold;
  return c;
}

EncoderConfig PipelineConfig::detect_config() const {
  EncoderConfig c;
  c.attribute_width = detect_attribute_width;
  c.hidden_width = detect_hidden_width;
  c.input_width = detect_input_width();
  c.threshold = threshold;
  return c;
}

void PipelineConfig::validate() const {
  check(attribute_width > 0 && hidden_width > 0 && detect_attribute_width > 0 &&
            detect_hidden_width > 0,
        ErrorCode::kConfig, "pipeline widths must be positive");
  check(hidden_width % 2 == 0, ErrorCode::kConfig, "pipeline.f1 must be even");
  check(hops >= 1, ErrorCode::kConfig, "pipeline.k must be at least 1");
  check(threshold > 0.0 && threshold < 1.0, ErrorCode::kConfig, "pipeline.rho must lie in (0,1)");
  check(replace_threshold > 0.0 && replace_threshold < 1.0, ErrorCode::kConfig,
        "pipeline.r must lie in (0,1)");
  check(max_epochs >= 1 && detect_max_epochs >= 1, ErrorCode::kConfig,
        "epoch caps must be at least 1");
  check(learning_rate > 0.0 && detect_learning_rate > 0.0, ErrorCode::kConfig,
        "learning rates must be positive");
  check(probe_interval >= 1, ErrorCode::kConfig, "pipeline.probe_interval must be at least 1");
  check(probe_holdout > 0.0 && probe_holdout < 1.0, ErrorCode::kConfig,
        "pipeline.probe_holdout must lie in (0,1)");
  make_pseudo_label_spec(sa_pseudo_labels[0], sa_pseudo_labels[1]);
  gbdt.validate();
}

// ---- Bundle -------------------------------------------------------------

CheckpointBundle init_bundle(const PipelineConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  const EncoderConfig enc = config.encoder_config();
  CheckpointBundle b;
  b.config = config;
  b.spec = make_pseudo_label_spec(config.sa_pseudo_labels[0], config.sa_pseudo_labels[1]);
  b.sss_table = init_attribute_table(enc.attribute_width, rng);
  b.sss_stack = init_gnn_stack(enc, rng);
  b.sss_disc = init_discriminator(enc.hidden_width, rng);
  b.ss_table = init_attribute_table(enc.attribute_width, rng);
  b.ss_stack = init_gnn_stack(enc, rng);
  b.ss_disc = init_discriminator(enc.hidden_width, rng);
  b.ssa_table = init_attribute_table(enc.attribute_width, rng);
  b.ssa_stack = init_gnn_stack(enc, rng);
  b.ssa_head = init_ssa_head(enc.hidden_width, rng);
  b.detect_table = init_attribute_table(config.detect_attribute_width, rng);
  b.detect = init_encoder(config.detect_config(), rng);
  return b;
}

bool operator==(const CheckpointBundle& a, const CheckpointBundle& b) {
  return serialize_checkpoint(a) == serialize_checkpoint(b);
}

std::uint64_t bundle_checksum(const CheckpointBundle& bundle) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : serialize_checkpoint(bundle)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_config_block(const PipelineConfig& config, const PseudoLabelSpec& spec) {
  RunConfig rc;
  rc.seed = config.seed;
  rc.pipeline = config;
  std::string out = format_run_config(rc, {"seed", "pipeline.", "gbdt."});
  out += "ssa.pseudo_labels=" + std::to_string(spec.indices[0]) + "," +
         std::to_string(spec.indices[1]) + "\n";
  out += "ssa.importance=";
  for (int a = 0; a < kNumAttributes; ++a) {
    out += (a ? "," : "") + format_double(spec.importance[a]);
  }
  out += "\n";
  return out;
}

// ---- Checkpoint ---------------------------------------------------------

std::string serialize_checkpoint(const CheckpointBundle& bundle) {
  std::string out(kMagic, sizeof(kMagic));
  put_u32(out, kCheckpointVersion);
  const std::string block = format_config_block(bundle.config, bundle.spec);
  put_u32(out, static_cast<std::uint32_t>(block.size()));
  out += block;
  std::uint32_t count = 0;
  bundle.visit([&](const std::string&, const Tensor&) { ++count; });
  put_u32(out, count);
  bundle.visit([&](const std::string& name, const Tensor& t) {
    put_u16(out, static_cast<std::uint16_t>(name.size()));
    out += name;
    put_u8(out, static_cast<std::uint8_t>(t.rank()));
    for (std::size_t d : t.dims()) put_u32(out, static_cast<std::uint32_t>(d));
    for (float v : t.values()) put_f32(out, v);
  });
  return out;
}

CheckpointBundle parse_checkpoint(std::string_view bytes) {
  check(bytes.size() >= sizeof(kMagic) && std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) == 0,
        ErrorCode::kBadMagic, "not a checkpoint: bad magic bytes");
  Reader in(bytes.substr(sizeof(kMagic)));
  const std::uint32_t version = in.u(4, "header");
  check(version == kCheckpointVersion, ErrorCode::kVersion,
        "checkpoint version " + std::to_string(version) + " unsupported (expected " +
            std::to_string(kCheckpointVersion) + ")");
  const std::uint32_t block_size = in.u(4, "header");
  const std::string_view block = in.take(block_size, "config block");
  PipelineConfig config;
  PseudoLabelSpec spec;
  parse_config_block(block, config, spec);

  CheckpointBundle bundle = init_bundle(config, 0);
  bundle.spec = spec;
  std::uint32_t expected = 0;
  bundle.visit([&](const std::string&, const Tensor&) { ++expected; });
  const std::uint32_t count = in.u(4, "header");
  check(count == expected, ErrorCode::kInconsistent,
        "checkpoint holds " + std::to_string(count) + " tensors, config implies " +
            std::to_string(expected));
  bundle.visit([&](const std::string& name, Tensor& t) {
    const std::uint16_t name_size = static_cast<std::uint16_t>(in.u(2, "tensor " + name));
    const std::string_view stored = in.take(name_size, "tensor " + name);
    check(stored == name, ErrorCode::kInconsistent,
          "expected tensor " + name + ", found " + std::string(stored));
    const std::uint8_t rank = static_cast<std::uint8_t>(in.u(1, "tensor " + name));
    std::vector<std::size_t> dims(rank);
    for (auto& d : dims) d = in.u(4, "tensor " + name);
    check(dims == t.dims(), ErrorCode::kInconsistent,
          "tensor " + name + " has shape " + shape_string(dims) + ", config implies " +
              shape_string(t.dims()));
    const std::string_view payload = in.take(t.size() * 4, "tensor " + name);
    for (std::size_t k = 0; k < t.size(); ++k) {
      std::uint32_t bits = 0;
      for (int j = 0; j < 4; ++j) bits |= std::uint32_t(std::uint8_t(payload[4 * k + j])) << (8 * j);
      std::memcpy(&t.values()[k], &bits, sizeof(bits));
    }
  });
  check(in.done(), ErrorCode::kData, "checkpoint has trailing bytes after the last tensor");
  return bundle;
}

void save_checkpoint(const CheckpointBundle& bundle, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  check(static_cast<bool>(out), ErrorCode::kIo, "cannot write checkpoint " + path.string());
  const std::string bytes = serialize_checkpoint(bundle);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  check(static_cast<bool>(out), ErrorCode::kIo, "failed writing checkpoint " + path.string());
}

CheckpointBundle load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  check(static_cast<bool>(in), ErrorCode::kIo, "cannot open checkpoint " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_checkpoint(buffer.str());
}

// ---- Probes -------------------------------------------------------------

LabelSplit split_labels(const Graph& g, double holdout_fraction, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<bool> held(g.node_count(), false);
  for (Label cls : {Label(0), Label(1)}) {
    std::vector<NodeId> members;
    for (NodeId i = 0; i < g.node_count(); ++i)
      if (g.label(i) == cls) members.push_back(i);
    auto k = static_cast<std::size_t>(std::lround(holdout_fraction * members.size()));
    if (k == 0 && holdout_fraction > 0.0 && members.size() >= 2) k = 1;
    for (std::size_t j : sample_without_replacement(rng, members.size(), k)) held[members[j]] = true;
  }
  LabelSplit split;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    if (g.label(i) == kUnlabeled) continue;
    (held[i] ? split.holdout : split.train).push_back(i);
  }
  return split;
}

Tensor probe_features(const Tensor* representations, std::span<const AttributeBits> attributes) {
  const std::size_t n = attributes.size();
  const std::size_t d = representations ? representations->cols() : 0;
  if (representations) {
    check(representations->rows() == n, ErrorCode::kDimension,
          "probe features: representation rows do not match node count");
  }
  Tensor x({n, d + kNumAttributes});
  for (std::size_t i = 0; i < n; ++i) {
    if (d) std::copy_n(&representations->at(i, 0), d, &x.at(i, 0));
    for (int a = 0; a < kNumAttributes; ++a) {
      x.at(i, d + a) = attribute_set(attributes[i], a) ? 1.0f : 0.0f;
    }
  }
  return x;
}

double probe_auc(const Tensor& features, const Graph& g, const LabelSplit& split,
                 const GbdtConfig& config, std::uint64_t seed) {
  const std::vector<int> y_valid = node_labels(g, split.holdout);
  bool pos = false;
  bool neg = false;
  for (int v : y_valid) (v ? pos : neg) = true;
  check(pos && neg, ErrorCode::kData, "probe holdout must contain both classes");
  const Tensor x_train = gather_rows(features, split.train);
  const Tensor x_valid = gather_rows(features, split.holdout);
  const TreeEnsemble e =
      gbdt_fit(x_train, node_labels(g, split.train), config, &x_valid, y_valid, seed);
  return auc(gbdt_predict(e, x_valid), y_valid);
}

// ---- Pretraining --------------------------------------------------------

PretrainResult pretrain(const Graph& g, const PipelineConfig& config) {
  config.validate();
  PretrainResult result;
  CheckpointBundle& b = result.bundle;
  b = init_bundle(config, derive_seed(config.seed, "bundle.init"));
  const EncoderConfig enc = config.encoder_config();
  const SubgraphIndex index = precompute_subgraphs(g, config.hops);

  if (config.sgrl_sa) {
    ContrastiveOptions sss_options;
    sss_options.train = train_options(config, false, "sss");
    sss_options.activation = config.disc_activation;
    const ContrastiveModel sss =
        train_contrastive(ContrastiveMode::kSss, g, index, {}, enc, sss_options);
    b.spec = make_pseudo_label_spec(config.sa_pseudo_labels[0], config.sa_pseudo_labels[1]);
    const SsaModel ssa = train_ssa(g, b.spec, enc, train_options(config, false, "ssa"));
    b.sss_table = sss.table;
    b.sss_stack = sss.stack;
    b.sss_disc = sss.disc;
    b.ssa_table = ssa.table;
    b.ssa_stack = ssa.stack;
    b.ssa_head = ssa.head;
    b.ss_table = zeros_like(b.ss_table);
    b.ss_stack = zeros_like(b.ss_stack);
    b.ss_disc = zeros_like(b.ss_disc);
    b.detect_table = zeros_like(b.detect_table);
    b.detect = zeros_like(b.detect);
    result.histories = {{"sss", sss.history}, {"ssa", ssa.history}};
    return result;
  }

  std::size_t class_counts[2] = {0, 0};
  for (Label y : g.labels())
    if (y != kUnlabeled) ++class_counts[y];
  check(class_counts[0] >= 2 && class_counts[1] >= 2, ErrorCode::kData,
        "pretraining needs at least two labeled nodes of each class "
        "(pipeline.sgrl_sa=true trains without labels)");
  const LabelSplit split =
      split_labels(g, config.probe_holdout, derive_seed(config.seed, "probe.split"));
  std::vector<Label> train_labels(g.labels().begin(), g.labels().end());
  for (NodeId i : split.holdout) train_labels[i] = kUnlabeled;

  auto representation_probe = [&](const std::string& name) {
    const std::uint64_t seed = derive_seed(config.seed, "probe." + name);
    return [&, seed](const ContrastiveModel& m) {
      const Tensor h = encode_nodes(m.stack, m.table, g);
      return probe_auc(probe_features(&h, g.all_attributes()), g, split, config.gbdt, seed);
    };
  };

  ContrastiveOptions sss_options;
  sss_options.train = train_options(config, false, "sss");
  sss_options.activation = config.disc_activation;
  const ContrastiveModel sss = train_contrastive(ContrastiveMode::kSss, g, index, train_labels,
                                                 enc, sss_options, representation_probe("sss"));
  ContrastiveOptions ss_options;
  ss_options.train = train_options(config, false, "ss");
  ss_options.activation = config.disc_activation;
  const ContrastiveModel ss = train_contrastive(ContrastiveMode::kSs, g, index, train_labels,
                                                enc, ss_options, representation_probe("ss"));

  b.spec = fit_pseudo_labels(g, split.train, split.holdout, config.gbdt,
                             derive_seed(config.seed, "ssa.importance"));
  const std::uint64_t ssa_probe_seed = derive_seed(config.seed, "probe.ssa");
  const SsaModel ssa = train_ssa(
      g, b.spec, enc, train_options(config, false, "ssa"), [&](const SsaModel& m) {
        const auto replaced =
            replace_all_attributes(g, m.spec, ssa_predict(m, g), config.replace_threshold);
        return probe_auc(probe_features(nullptr, replaced), g, split, config.gbdt, ssa_probe_seed);
      });

  b.sss_table = sss.table;
  b.sss_stack = sss.stack;
  b.sss_disc = sss.disc;
  b.ss_table = ss.table;
  b.ss_stack = ss.stack;
  b.ss_disc = ss.disc;
  b.ssa_table = ssa.table;
  b.ssa_stack = ssa.stack;
  b.ssa_head = ssa.head;

  const DetectionInputs inputs = detection_inputs(b, g);
  const Graph detect_graph = g.with_attributes(inputs.replaced);
  const IgModel detector = ig_train(
      detect_graph, split.train, config.detect_config(), train_options(config, true, "detect"),
      &inputs.prefix, [&](const IgModel& m) {
        const IgOutput out = ig_forward(m.params, m.table, detect_graph, &inputs.prefix);
        const std::vector<double> scores(out.scores.values().begin(), out.scores.values().end());
        return holdout_auc(scores, g, split.holdout);
      });
  b.detect_table = detector.table;
  b.detect = detector.params;

  result.histories = {{"sss", sss.history}, {"ss", ss.history}, {"ssa", ssa.history},
                      {"detect", detector.history}};
  return result;
}

void write_probe_history(const std::filesystem::path& path,
                         std::span<const EncoderHistory> histories) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  check(static_cast<bool>(out), ErrorCode::kIo, "cannot write " + path.string());
  out << "encoder\tepoch\tauc\tselected\n";
  for (const auto& h : histories) {
    for (const auto& p : h.history.probes) {
      char line[128];
      std::snprintf(line, sizeof(line), "%s\t%d\t%.6f\t%d\n", h.encoder.c_str(), p.epoch, p.auc,
                    p.epoch == h.history.selected_epoch ? 1 : 0);
      out << line;
    }
  }
}

// ---- Detection ----------------------------------------------------------

DetectionInputs detection_inputs(const CheckpointBundle& bundle, const Graph& g) {
  DetectionInputs inputs;
  inputs.prefix = concat_columns(encode_nodes(bundle.sss_stack, bundle.sss_table, g),
                                 encode_nodes(bundle.ss_stack, bundle.ss_table, g));
  inputs.pseudo_predictions = ssa_predict(ssa_model(bundle), g);
  inputs.replaced = replace_all_attributes(g, bundle.spec, inputs.pseudo_predictions,
                                           bundle.config.replace_threshold);
  return inputs;
}

Tensor build_detection_input(const CheckpointBundle& bundle, const Graph& g, NodeId i) {
  check(i < g.node_count(), ErrorCode::kOutOfRange, "node " + std::to_string(i) + " out of range");
  const DetectionInputs inputs = detection_inputs(bundle, g);
  const Tensor attrs = encode_attributes(bundle.detect_table, inputs.replaced[i]);
  const std::size_t p = inputs.prefix.cols();
  Tensor out({p + attrs.size()});
  std::copy_n(&inputs.prefix.at(i, 0), p, out.data());
  std::copy(attrs.values().begin(), attrs.values().end(), out.data() + p);
  return out;
}

ScoreReport detect(const CheckpointBundle& bundle, const Graph& g) {
  const DetectionInputs inputs = detection_inputs(bundle, g);
  ScoreReport report;
  report.threshold = bundle.config.threshold;
  report.scores.resize(g.node_count());
  if (bundle.config.sgrl_sa) {
    for (NodeId i = 0; i < g.node_count(); ++i) {
      report.scores[i] = 0.5 * (double(inputs.pseudo_predictions.at(i, 0)) +
                                inputs.pseudo_predictions.at(i, 1));
    }
  } else {
    const IgOutput out = ig_forward(bundle.detect, bundle.detect_table,
                                    g.with_attributes(inputs.replaced), &inputs.prefix);
    for (NodeId i = 0; i < g.node_count(); ++i) report.scores[i] = out.scores[i];
  }
  report.flags.resize(g.node_count());
  for (NodeId i = 0; i < g.node_count(); ++i) {
    report.flags[i] = report.scores[i] > report.threshold;
  }
  return report;
}

void write_scores_tsv(const std::filesystem::path& path, const Graph& g,
                      const ScoreReport& report) {
  check(report.scores.size() == g.node_count(), ErrorCode::kDimension,
        "score report does not match graph");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  check(static_cast<bool>(out), ErrorCode::kIo, "cannot write " + path.string());
  out << "node_id\tscore\tflag\n";
  for (NodeId i = 0; i < g.node_count(); ++i) {
    char line[64];
    std::snprintf(line, sizeof(line), "\t%.6f\t%d\n", report.scores[i], report.flags[i] ? 1 : 0);
    out << g.external_id(i) << line;
  }
}

ScoreFile read_scores_tsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  check(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path.string());
  ScoreFile file;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_no == 1 && line.rfind("node_id", 0) == 0)) continue;
    const auto tab = line.find('\t');
    const std::string where = path.string() + ":" + std::to_string(line_no);
    check(tab != std::string::npos && tab > 0, ErrorCode::kData, where + ": expected id<TAB>score");
    const auto tab2 = line.find('\t', tab + 1);
    const std::string score = line.substr(tab + 1, tab2 == std::string::npos ? std::string::npos
                                                                              : tab2 - tab - 1);
    char* end = nullptr;
    const double v = std::strtod(score.c_str(), &end);
    check(!score.empty() && end == score.c_str() + score.size() && std::isfinite(v),
          ErrorCode::kData, where + ": bad score '" + score + "'");
    file.ids.push_back(line.substr(0, tab));
    file.scores.push_back(v);
  }
  return file;
}

EvalReport evaluate_score_file(const std::filesystem::path& scores,
                               const std::filesystem::path& labels, double threshold,
                               const std::filesystem::path& exclude) {
  const ScoreFile file = read_scores_tsv(scores);
  const std::vector<Label> truth = load_labels(labels, file.ids);
  std::vector<Label> skip(file.ids.size(), kUnlabeled);
  if (!exclude.empty()) skip = load_labels(exclude, file.ids);
  std::vector<double> s;
  std::vector<int> y;
  for (std::size_t i = 0; i < file.ids.size(); ++i) {
    if (truth[i] == kUnlabeled || skip[i] != kUnlabeled) continue;
    s.push_back(file.scores[i]);
    y.push_back(truth[i]);
  }
  check(!s.empty(), ErrorCode::kData, "no labeled nodes to evaluate");
  return evaluate(s, y, threshold);
}

// ---- Reference detectors ------------------------------------------------

std::vector<double> ig_baseline_scores(const Graph& g, const PipelineConfig& config,
                                       TrainHistory* history) {
  config.validate();
  const LabelSplit split =
      split_labels(g, config.probe_holdout, derive_seed(config.seed, "probe.split"));
  EncoderConfig c;
  c.attribute_width = config.detect_attribute_width;
  c.hidden_width = config.detect_hidden_width;
  c.input_width = kNumAttributes * config.detect_attribute_width;
  c.threshold = config.threshold;
  const IgModel model = ig_train(g, split.train, c, train_options(config, true, "ig"), nullptr,
                                 [&](const IgModel& m) {
                                   const IgOutput out = ig_forward(m.params, m.table, g);
                                   const std::vector<double> s(out.scores.values().begin(),
                                                               out.scores.values().end());
                                   return holdout_auc(s, g, split.holdout);
                                 });
  if (history) *history = model.history;
  const IgOutput out = ig_forward(model.params, model.table, g);
  return {out.scores.values().begin(), out.scores.values().end()};
}

std::vector<double> attribute_baseline_scores(const Graph& g, const PipelineConfig& config) {
  config.validate();
  const LabelSplit split =
      split_labels(g, config.probe_holdout, derive_seed(config.seed, "probe.split"));
  const Tensor x = probe_features(nullptr, g.all_attributes());
  const TreeEnsemble e = gbdt_fit(gather_rows(x, split.train), node_labels(g, split.train),
                                  config.gbdt, nullptr, {},
                                  derive_seed(config.seed, "attributes.gbdt"));
  return gbdt_predict(e, x);
}

}  // namespace sgrl
