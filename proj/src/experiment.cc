//
// Copyright 2026 The logad Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "logad/experiment.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "logad/alteration.h"
#include "logad/error.h"
#include "logad/io_util.h"
#include "logad/metrics.h"
#include "logad/random.h"

namespace logad {
namespace {

// Salts separating the random streams derived from the experiment seed.
constexpr std::uint64_t kTrainCorpusSalt = 0x11;
constexpr std::uint64_t kTestCorpusSalt = 0x22;
constexpr std::uint64_t kEmbedSalt = 0x33;
constexpr std::uint64_t kInitSalt = 0x44;
constexpr std::uint64_t kShuffleSalt = 0x55;
constexpr std::uint64_t kAlterSalt = 0x66;
constexpr std::uint64_t kDatasetBSalt = 0x77;

std::uint64_t Derive(std::uint64_t seed, std::uint64_t salt) {
  return Rng::Mix(seed ^ Rng::Mix(salt));
}

template <typename F>
auto Stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.code(), std::string("stage '") + name + "': " + e.what());
  }
}

}  // namespace

nlohmann::ordered_json MetricsJson(const Metrics& m) {
  nlohmann::ordered_json j;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["tp"] = m.tp;
  j["fp"] = m.fp;
  j["fn"] = m.fn;
  j["tn"] = m.tn;
  j["false_positive_rate"] = m.false_positive_rate();
  return j;
}

namespace {

nlohmann::ordered_json DecisionJson(const DecisionParams& d) {
  nlohmann::ordered_json j;
  j["mode"] = std::string(nn::ObjectiveName(d.mode));
  j["top_k"] = d.top_k;
  j["q"] = d.q;
  j["max_distance"] = d.max_distance;
  j["threshold"] = d.threshold;
  return j;
}

std::size_t CountAnomalies(const std::vector<Label>& labels) {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::kAnomaly));
}

// Test corpus after the requested alteration, with a mask of altered lines.
struct AlteredTest {
  LabeledCorpus corpus;
  std::vector<bool> altered;
};

AlteredTest AlterSemantic(const ExperimentSpec& spec, const std::vector<std::string>& train,
                          const LabeledCorpus& test) {
  const SpecFile& v = spec.values();
  const AlterationKind kind = ParseAlterationKind(v.GetString("alter.kind", ""));
  if (!IsSemantic(kind)) {
    throw Error(ErrorCode::kConfigError, "semantic experiment needs a Sem* alteration kind");
  }
  const double fraction = v.GetDouble("alter.fraction", 0.0);
  const std::size_t intensity = v.GetUint("alter.intensity", 1);
  const bool mark_anomaly = ParseLabel(v.GetString("alter.label", "")) == Label::kAnomaly;
  const std::uint64_t seed = Derive(spec.seed(), kAlterSalt);

  AlteredTest out{test, std::vector<bool>(test.lines.size(), false)};
  const std::vector<std::string> vocabulary = BuildVocabulary(train);
  std::vector<std::size_t> order(test.lines.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  const auto count = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(test.lines.size()) / 100.0));
  order.resize(std::min(count, order.size()));
  std::sort(order.begin(), order.end());
  for (std::size_t index : order) {
    const std::vector<std::string> tokens = SplitWhitespace(test.lines[index]);
    std::size_t l = intensity;
    if (kind == AlterationKind::kSemDelete) l = std::min(l, tokens.size() - 1);
    if (kind == AlterationKind::kSemSwap) l = std::min(l, tokens.size());
    if (l == 0) continue;
    AlterationConfig cfg{kind, l, 1, Rng::Mix(seed ^ Rng::Mix(index + 1))};
    out.corpus.lines[index] = JoinTokens(AlterMessage(tokens, cfg, vocabulary));
    out.altered[index] = true;
    if (mark_anomaly) out.corpus.labels[index] = Label::kAnomaly;
  }
  return out;
}

AlteredTest AlterSequential(const ExperimentSpec& spec, const LabeledCorpus& test) {
  const SpecFile& v = spec.values();
  const AlterationKind kind = ParseAlterationKind(v.GetString("alter.kind", ""));
  if (IsSemantic(kind)) {
    throw Error(ErrorCode::kConfigError, "sequential experiment needs a Seq* alteration kind");
  }
  const double fraction = v.GetDouble("alter.fraction", 0.0);
  const std::size_t segment = v.GetUint("alter.segment", 50);
  if (segment < 2) throw Error(ErrorCode::kConfigError, "alter.segment must be >= 2");
  const bool mark_anomaly = ParseLabel(v.GetString("alter.label", "")) == Label::kAnomaly;
  const std::uint64_t seed = Derive(spec.seed(), kAlterSalt);
  Rng rng(seed);

  AlteredTest out;
  const std::size_t n = test.lines.size();
  for (std::size_t start = 0; start < n; start += segment) {
    const std::size_t len = std::min(segment, n - start);
    const std::span<const std::string> lines(test.lines.data() + start, len);
    const std::span<const Label> labels(test.labels.data() + start, len);
    if (!rng.bernoulli(fraction / 100.0)) {
      out.corpus.lines.insert(out.corpus.lines.end(), lines.begin(), lines.end());
      out.corpus.labels.insert(out.corpus.labels.end(), labels.begin(), labels.end());
      out.altered.insert(out.altered.end(), len, false);
      continue;
    }
    AlterationConfig cfg{kind, v.GetUint("alter.intensity", 1), v.GetUint("alter.block_len", 1),
                         rng.next()};
    const SequenceEdit edit = PlanSequenceAlteration(len, cfg);
    for (std::size_t i = 0; i < edit.source.size(); ++i) {
      out.corpus.lines.push_back(lines[edit.source[i]]);
      Label label = labels[edit.source[i]];
      if (edit.altered[i] && mark_anomaly) label = Label::kAnomaly;
      out.corpus.labels.push_back(label);
      out.altered.push_back(edit.altered[i]);
    }
  }
  return out;
}

nlohmann::ordered_json AlteredJson(const std::vector<Verdict>& verdicts,
                                   const std::vector<bool>& altered) {
  std::size_t items = static_cast<std::size_t>(std::count(altered.begin(), altered.end(), true));
  std::size_t evaluated = 0;
  std::size_t flagged = 0;
  for (const Verdict& v : verdicts) {
    if (!altered[static_cast<std::size_t>(v.line_no - 1)]) continue;
    ++evaluated;
    if (v.label == Label::kAnomaly) ++flagged;
  }
  nlohmann::ordered_json j;
  j["items"] = items;
  j["evaluated"] = evaluated;
  j["flagged"] = flagged;
  j["flag_rate"] = evaluated == 0 ? 0.0 : static_cast<double>(flagged) / static_cast<double>(evaluated);
  return j;
}

std::string VerdictsPath(const ExperimentSpec& spec, nn::Objective objective) {
  const std::string prefix = spec.values().GetString("experiment.verdicts_prefix", "");
  if (prefix.empty()) return "";
  return prefix + "-" + std::string(nn::ObjectiveName(objective)) + ".tsv";
}

}  // namespace

const std::map<std::string, std::string>& ExperimentDefaults() {
  static const std::map<std::string, std::string> defaults = {
      {"experiment.type", "baseline"},
      {"experiment.objective", "both"},
      {"experiment.seed", "1"},
      {"experiment.verdicts_prefix", ""},
      {"corpus.source", "synthetic"},
      {"corpus.templates", "10"},
      {"corpus.train_events", "3000"},
      {"corpus.test_events", "3000"},
      {"corpus.noise", "0.05"},
      {"corpus.anomaly_rate", "0.02"},
      {"corpus.train", ""},
      {"corpus.test", ""},
      {"corpus.test_labels", ""},
      {"parser.depth", "4"},
      {"parser.similarity", "0.4"},
      {"parser.max_children", "100"},
      {"embedding.source", "fallback"},
      {"embedding.dim", "32"},
      {"embedding.path", ""},
      {"model.hidden", "128"},
      {"window.delta", "10"},
      {"window.stride", "1"},
      {"train.epochs", "60"},
      {"train.learning_rate", "0.001"},
      {"train.batch_size", "32"},
      {"train.optimizer", "adam"},
      {"train.clip_norm", "0"},
      {"detect.top_k", "3"},
      {"detect.q", "99"},
      {"detect.max_distance", "0.3"},
      {"alter.kind", "SemSwap"},
      {"alter.fraction", "10"},
      {"alter.intensity", "1"},
      {"alter.block_len", "1"},
      {"alter.segment", "50"},
      {"alter.label", "normal"},
      {"transfer.severity", "different"},
      {"transfer.p", "15"},
      {"transfer.intensity_min", ""},
      {"transfer.intensity_max", ""},
      {"transfer.few_shot_fraction", "0.1"},
      {"transfer.few_shot_epochs", "5"},
      {"transfer.few_shot_learning_rate", "0"},
      {"transfer.map_radius", "0.6"},
  };
  return defaults;
}

ExperimentSpec ExperimentSpec::FromFile(const SpecFile& file) {
  std::set<std::string> allowed;
  for (const auto& [key, value] : ExperimentDefaults()) allowed.insert(key);
  file.RejectUnknown(allowed);
  ExperimentSpec spec;
  for (const auto& [key, value] : ExperimentDefaults()) spec.values_.Set(key, value);
  for (const auto& [key, value] : file.values()) spec.values_.Set(key, value);
  spec.Check();
  return spec;
}

void ExperimentSpec::SetSeed(std::uint64_t seed) {
  values_.Set("experiment.seed", std::to_string(seed));
}

std::vector<nn::Objective> ExperimentSpec::objectives() const {
  const std::string mode = values_.GetString("experiment.objective", "both");
  if (mode == "both") return {nn::Objective::kClassification, nn::Objective::kRegression};
  return {nn::ParseObjective(mode)};
}

void ExperimentSpec::Check() const {
  const std::string t = type();
  if (t != "baseline" && t != "semantic" && t != "sequential" && t != "transfer") {
    throw Error(ErrorCode::kConfigError, "experiment.type must be baseline, semantic, sequential or transfer");
  }
  objectives();
  seed();
  const std::string source = values_.GetString("corpus.source", "");
  if (source == "file") {
    for (const char* key : {"corpus.train", "corpus.test", "corpus.test_labels"}) {
      const std::string path = values_.GetString(key, "");
      if (path.empty() || !std::filesystem::exists(path)) {
        throw Error(ErrorCode::kConfigError, std::string(key) + " must name an existing file");
      }
    }
  } else if (source != "synthetic") {
    throw Error(ErrorCode::kConfigError, "corpus.source must be synthetic or file");
  }
  const std::string embedding = values_.GetString("embedding.source", "");
  if (embedding == "file") {
    const std::string path = values_.GetString("embedding.path", "");
    if (path.empty() || !std::filesystem::exists(path)) {
      throw Error(ErrorCode::kConfigError, "embedding.path must name an existing file");
    }
  } else if (embedding != "fallback") {
    throw Error(ErrorCode::kConfigError, "embedding.source must be fallback or file");
  }
  ParseAlterationKind(values_.GetString("alter.kind", ""));
  ParseLabel(values_.GetString("alter.label", ""));
  ParseSeverity(values_.GetString("transfer.severity", ""));
  const std::string opt = values_.GetString("train.optimizer", "");
  if (opt != "adam" && opt != "sgd") throw Error(ErrorCode::kConfigError, "train.optimizer must be adam or sgd");
  // Typed reads reject malformed numbers up front.
  TrainCorpus();
  Transfer().Validate();
  const PipelineSettings s = Settings();
  nn::ModelConfig probe;
  probe.embed_dim = s.embedding.kind == EmbeddingSource::Kind::kFile ? 4 : s.embedding.dim;
  probe.hidden_size = s.hidden_size;
  probe.window = s.window.delta;
  probe.num_classes = 2;
  probe.Validate();
  if (s.embedding.kind == EmbeddingSource::Kind::kFallback && s.embedding.dim < 4) {
    throw Error(ErrorCode::kConfigError, "embedding.dim must be >= 4");
  }
  if (s.parser.depth < 3) throw Error(ErrorCode::kConfigError, "parser.depth must be >= 3");
  if (!(s.parser.similarity_threshold > 0.0 && s.parser.similarity_threshold <= 1.0)) {
    throw Error(ErrorCode::kConfigError, "parser.similarity must be in (0, 1]");
  }
  if (s.parser.max_children < 1) throw Error(ErrorCode::kConfigError, "parser.max_children must be >= 1");
  if (s.window.delta < 1 || s.window.stride < 1) {
    throw Error(ErrorCode::kConfigError, "window.delta and window.stride must be >= 1");
  }
  if (s.train.batch_size < 1) throw Error(ErrorCode::kConfigError, "train.batch_size must be >= 1");
  if (!(s.train.learning_rate > 0.0)) throw Error(ErrorCode::kConfigError, "train.learning_rate must be > 0");
  DecisionParams d = s.decision;
  d.mode = nn::Objective::kRegression;
  d.Validate(0);
  if (d.top_k < 1) throw Error(ErrorCode::kConfigError, "detect.top_k must be >= 1");
  const double fraction = values_.GetDouble("alter.fraction", 0.0);
  if (!(fraction >= 0.0 && fraction <= 100.0)) {
    throw Error(ErrorCode::kConfigError, "alter.fraction must be in [0, 100]");
  }
}

PipelineSettings ExperimentSpec::Settings() const {
  const SpecFile& v = values_;
  PipelineSettings s;
  s.parser.depth = static_cast<int>(v.GetInt("parser.depth", 4));
  s.parser.similarity_threshold = v.GetDouble("parser.similarity", 0.4);
  s.parser.max_children = static_cast<int>(v.GetInt("parser.max_children", 100));
  if (v.GetString("embedding.source", "fallback") == "file") {
    s.embedding.kind = EmbeddingSource::Kind::kFile;
  } else {
    s.embedding.dim = v.GetUint("embedding.dim", 32);
    s.embedding.seed = Derive(seed(), kEmbedSalt);
  }
  s.hidden_size = v.GetUint("model.hidden", 128);
  s.window.delta = v.GetUint("window.delta", 10);
  s.window.stride = v.GetUint("window.stride", 1);
  s.train.epochs = v.GetUint("train.epochs", 60);
  s.train.learning_rate = v.GetDouble("train.learning_rate", 1e-3);
  s.train.batch_size = v.GetUint("train.batch_size", 32);
  s.train.optimizer = v.GetString("train.optimizer", "adam") == "sgd" ? nn::OptimizerKind::kSgd
                                                                      : nn::OptimizerKind::kAdam;
  s.train.clip_norm = v.GetDouble("train.clip_norm", 0.0);
  s.train.seed = Derive(seed(), kShuffleSalt);
  s.decision.top_k = v.GetUint("detect.top_k", 3);
  s.decision.q = v.GetDouble("detect.q", 99.0);
  s.decision.max_distance = v.GetDouble("detect.max_distance", 0.3);
  s.init_seed = Derive(seed(), kInitSalt);
  return s;
}

TransferConfig ExperimentSpec::Transfer() const {
  TransferConfig t;
  t.settings = Settings();
  t.few_shot_fraction = values_.GetDouble("transfer.few_shot_fraction", 0.1);
  t.few_shot_epochs = values_.GetUint("transfer.few_shot_epochs", 5);
  t.few_shot_learning_rate = values_.GetDouble("transfer.few_shot_learning_rate", 0.0);
  t.map_radius = values_.GetDouble("transfer.map_radius", 0.6);
  t.objectives = objectives();
  return t;
}

SyntheticConfig ExperimentSpec::TrainCorpus() const {
  SyntheticConfig c;
  c.num_templates = values_.GetUint("corpus.templates", 10);
  c.num_events = values_.GetUint("corpus.train_events", 3000);
  c.noise = values_.GetDouble("corpus.noise", 0.05);
  c.anomaly_rate = 0.0;
  c.seed = Derive(seed(), kTrainCorpusSalt);
  return c;
}

SyntheticConfig ExperimentSpec::TestCorpus() const {
  SyntheticConfig c = TrainCorpus();
  c.num_events = values_.GetUint("corpus.test_events", 3000);
  c.anomaly_rate = values_.GetDouble("corpus.anomaly_rate", 0.02);
  c.seed = Derive(seed(), kTestCorpusSalt);
  return c;
}

std::vector<Label> ReadLabels(const std::filesystem::path& path) {
  std::vector<Label> labels;
  for (const std::string& line : ReadLines(path)) {
    if (line.empty()) continue;
    labels.push_back(ParseLabel(line));
  }
  return labels;
}

ExperimentCorpora LoadCorpora(const ExperimentSpec& spec) {
  ExperimentCorpora c;
  const SpecFile& v = spec.values();
  if (v.GetString("corpus.source", "synthetic") == "file") {
    c.train = ReadLines(v.GetString("corpus.train", ""));
    c.test.lines = ReadLines(v.GetString("corpus.test", ""));
    c.test.labels = ReadLabels(v.GetString("corpus.test_labels", ""));
    if (c.test.labels.size() != c.test.lines.size()) {
      throw Error(ErrorCode::kFormatError, "test corpus has " + std::to_string(c.test.lines.size()) +
                                               " lines but " + std::to_string(c.test.labels.size()) +
                                               " labels");
    }
  } else {
    c.train = GenerateSyntheticCorpus(spec.TrainCorpus()).lines;
    c.test = GenerateSyntheticCorpus(spec.TestCorpus());
  }
  return c;
}

void AppendTransferReport(const TransferReport& t, nlohmann::ordered_json& report) {
  nlohmann::ordered_json mapping;
  mapping["a_templates"] = t.a_templates;
  mapping["b_templates"] = t.b_templates;
  mapping["b_novel_templates"] = t.b_novel_templates;
  mapping["mean_distance"] = t.mapping_mean_distance;
  mapping["max_distance"] = t.mapping_max_distance;
  report["mapping"] = mapping;
  nlohmann::ordered_json results = nlohmann::ordered_json::array();
  for (const TransferCell& cell : t.cells) {
    nlohmann::ordered_json r;
    r["objective"] = std::string(nn::ObjectiveName(cell.objective));
    r["pretrain_loss_curve"] = cell.pretrain_loss_curve;
    r["finetune_loss_curve"] = cell.finetune_loss_curve;
    r["head_loss_zero_shot"] = cell.head_loss_before;
    r["head_loss_fine_tuned"] = cell.head_loss_after;
    r["threshold_zero_shot"] = cell.threshold_zero_shot;
    r["threshold_fine_tuned"] = cell.threshold_fine_tuned;
    r["zero_shot"] = MetricsJson(cell.zero_shot);
    r["fine_tuned"] = MetricsJson(cell.fine_tuned);
    results.push_back(r);
  }
  report["results"] = results;
}

ExperimentResult RunExperiment(const ExperimentSpec& spec) {
  ExperimentResult result;
  nlohmann::ordered_json& report = result.report;
  report["format"] = "logad-report-v1";
  report["type"] = spec.type();
  report["seed"] = spec.seed();
  nlohmann::ordered_json echo = nlohmann::ordered_json::object();
  for (const auto& [key, value] : spec.values().values()) echo[key] = value;
  report["spec"] = echo;

  const ExperimentCorpora corpora = Stage("load", [&] { return LoadCorpora(spec); });
  PipelineSettings settings = spec.Settings();
  if (settings.embedding.kind == EmbeddingSource::Kind::kFile) {
    settings.embedding.file_store =
        Stage("embed", [&] { return LoadStore(spec.values().GetString("embedding.path", "")); });
  }

  if (spec.type() == "transfer") {
    const SpecFile& v = spec.values();
    AlteredCorpusSpec b_spec;
    b_spec.fraction_percent = v.GetDouble("transfer.p", 15.0);
    b_spec.severity = ParseSeverity(v.GetString("transfer.severity", "different"));
    const std::string lo = v.GetString("transfer.intensity_min", "");
    const std::string hi = v.GetString("transfer.intensity_max", "");
    if (!lo.empty() || !hi.empty()) {
      const auto range = b_spec.Range();
      b_spec.intensity_range = {v.GetDouble("transfer.intensity_min", range.first),
                                v.GetDouble("transfer.intensity_max", range.second)};
    }
    b_spec.seed = Derive(spec.seed(), kDatasetBSalt);
    LabeledCorpus corpus_b;
    corpus_b.lines = Stage("alter", [&] { return SynthesizeDatasetB(corpora.test.lines, b_spec).lines; });
    corpus_b.labels = corpora.test.labels;
    TransferConfig config = spec.Transfer();
    config.settings = settings;
    const TransferReport t =
        Stage("transfer", [&] { return RunTransferExperiment(corpora.train, corpus_b, config); });
    nlohmann::ordered_json corpus;
    corpus["a_events"] = t.a_events;
    corpus["b_events"] = t.b_events;
    corpus["b_anomalies"] = CountAnomalies(corpus_b.labels);
    corpus["head_events"] = t.head_events;
    corpus["tail_events"] = t.tail_events;
    report["corpus"] = corpus;
    AppendTransferReport(t, report);
    for (nlohmann::ordered_json& r : report["results"]) {
      const nn::Objective objective = nn::ParseObjective(r["objective"].get<std::string>());
      const std::string path = VerdictsPath(spec, objective);
      r["verdicts_path"] = path.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(path);
      result.verdicts[std::string(nn::ObjectiveName(objective))] = t.fine_tuned_verdicts.at(objective);
    }
    return result;
  }

  AlteredTest test{corpora.test, std::vector<bool>(corpora.test.lines.size(), false)};
  if (spec.type() == "semantic") {
    test = Stage("alter", [&] { return AlterSemantic(spec, corpora.train, corpora.test); });
  } else if (spec.type() == "sequential") {
    test = Stage("alter", [&] { return AlterSequential(spec, corpora.test); });
  }
  nlohmann::ordered_json corpus;
  corpus["train_lines"] = corpora.train.size();
  corpus["test_lines"] = test.corpus.lines.size();
  corpus["test_anomalies"] = CountAnomalies(test.corpus.labels);
  report["corpus"] = corpus;

  nlohmann::ordered_json results = nlohmann::ordered_json::array();
  for (nn::Objective objective : spec.objectives()) {
    const TrainedDetector detector =
        Stage("train", [&] { return TrainDetector(corpora.train, objective, settings); });
    const DetectionRun run =
        Stage("detect", [&] { return DetectLines(detector, test.corpus.lines, settings.embedding); });
    const Metrics metrics = Stage("score", [&] {
      return ComputeMetrics(LabelVerdicts(run.verdicts, test.corpus.labels));
    });
    nlohmann::ordered_json r;
    r["objective"] = std::string(nn::ObjectiveName(objective));
    r["train_templates"] = detector.known.size();
    r["novel_test_templates"] = run.novel_templates;
    r["loss_curve"] = detector.loss_curve;
    r["decision"] = DecisionJson(detector.decision);
    r["evaluated_events"] = run.verdicts.size();
    r["metrics"] = MetricsJson(metrics);
    if (spec.type() != "baseline") {
      r["altered"] = AlteredJson(run.verdicts, test.altered);
      const DetectionRun clean = Stage(
          "detect", [&] { return DetectLines(detector, corpora.test.lines, settings.embedding); });
      const Metrics clean_metrics = Stage("score", [&] {
        return ComputeMetrics(LabelVerdicts(clean.verdicts, corpora.test.labels));
      });
      r["clean_metrics"] = MetricsJson(clean_metrics);
      r["fpr_increase_pp"] =
          100.0 * (metrics.false_positive_rate() - clean_metrics.false_positive_rate());
    }
    const std::string path = VerdictsPath(spec, objective);
    r["verdicts_path"] = path.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(path);
    results.push_back(r);
    result.verdicts[std::string(nn::ObjectiveName(objective))] = run.verdicts;
  }
  report["results"] = results;
  return result;
}

std::string RenderReport(const nlohmann::ordered_json& report) { return report.dump(2) + "\n"; }

}  // namespace logad
