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

// logad: log anomaly detection command-line tool.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "logad/alteration.h"
#include "logad/corpus.h"
#include "logad/detector.h"
#include "logad/embedding.h"
#include "logad/error.h"
#include "logad/experiment.h"
#include "logad/io_util.h"
#include "logad/metrics.h"
#include "logad/parser.h"
#include "logad/pipeline.h"
#include "logad/random.h"
#include "logad/transfer.h"

namespace {

using logad::Error;
using logad::ErrorCode;

std::string JoinLines(const std::vector<std::string>& lines) {
  std::string out;
  for (const std::string& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

void WriteOrPrint(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    logad::WriteFileAtomic(path, text);
  }
}

// Raw lines with 1-based line numbers; blank lines are skipped.
std::vector<logad::RawLogLine> ReadRawLines(const std::string& path, int header_fields) {
  std::vector<logad::RawLogLine> raw;
  const std::vector<std::string> lines = logad::ReadLines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string content = header_fields > 0 ? logad::StripHeader(lines[i], header_fields) : lines[i];
    if (logad::SplitWhitespace(content).empty()) continue;
    raw.push_back({static_cast<std::int64_t>(i + 1), std::nullopt, std::move(content)});
  }
  return raw;
}

std::vector<logad::ParsedEvent> ReadEvents(const std::string& path) {
  std::vector<logad::ParsedEvent> events;
  for (const std::string& line : logad::ReadLines(path)) {
    if (!line.empty()) events.push_back(logad::ParseEventRecord(line));
  }
  return events;
}

// Where template vectors come from: a logvec file, or the hashing fallback.
struct VectorSource {
  std::string path;
  std::size_t dim = 32;
  std::uint64_t seed = 0;

  logad::EmbeddingSource Load() const {
    logad::EmbeddingSource s;
    if (path.empty()) {
      s.dim = dim;
      s.seed = seed;
    } else {
      s.kind = logad::EmbeddingSource::Kind::kFile;
      s.file_store = logad::LoadStore(path);
    }
    return s;
  }
};

void AddVectorFlags(CLI::App* cmd, VectorSource& v) {
  cmd->add_option("--embeddings", v.path, "logvec-v1 file (default: hashing fallback)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--dim", v.dim, "fallback embedding size")->capture_default_str();
}

struct ParserFlags {
  int depth = 4;
  double similarity = 0.4;
  int max_children = 100;

  logad::ParserConfig Config() const {
    logad::ParserConfig c;
    c.depth = depth;
    c.similarity_threshold = similarity;
    c.max_children = max_children;
    return c;
  }
};

void AddParserFlags(CLI::App* cmd, ParserFlags& p) {
  cmd->add_option("--depth", p.depth, "parse tree depth")->capture_default_str();
  cmd->add_option("--similarity", p.similarity, "similarity threshold")->capture_default_str();
  cmd->add_option("--max-children", p.max_children, "children per tree node")
      ->capture_default_str();
}

std::uint64_t Derive(std::uint64_t seed, std::uint64_t salt) {
  return logad::Rng::Mix(seed ^ logad::Rng::Mix(salt));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"logad: log parsing, sequence anomaly detection and transfer"};
  app.require_subcommand(1);
  std::function<void()> action;
  std::uint64_t seed = 1;

  // parse
  std::string parse_in, parse_out, parse_templates, parse_state, parse_load;
  int parse_header = 0;
  ParserFlags parse_flags;
  auto* parse = app.add_subcommand("parse", "Mine templates and write events and templates");
  parse->add_option("--in", parse_in, "log file")->required()->check(CLI::ExistingFile);
  parse->add_option("--out", parse_out, "events file")->required();
  parse->add_option("--templates", parse_templates, "templates file (default: <out>.templates)");
  parse->add_option("--state", parse_state, "write the parser state here");
  parse->add_option("--load-state", parse_load, "continue from a saved parser state")
      ->check(CLI::ExistingFile);
  parse->add_option("--header-fields", parse_header, "leading fields to strip")
      ->capture_default_str();
  AddParserFlags(parse, parse_flags);
  parse->callback([&] {
    action = [&] {
      logad::ParserState parser = parse_load.empty() ? logad::ParserState(parse_flags.Config())
                                                     : logad::ParserState::Load(parse_load);
      const auto events = parser.ParseStream(ReadRawLines(parse_in, parse_header));
      std::vector<std::string> records;
      records.reserve(events.size());
      for (const auto& e : events) records.push_back(logad::FormatEventRecord(e));
      logad::WriteFileAtomic(parse_out, JoinLines(records));
      logad::WriteFileAtomic(parse_templates.empty() ? parse_out + ".templates" : parse_templates,
                             parser.TemplatesTsv());
      if (!parse_state.empty()) parser.Save(parse_state);
    };
  });

  // ingest
  std::string ingest_in, ingest_labels, ingest_out, ingest_out_labels;
  int ingest_header = 6;
  auto* ingest = app.add_subcommand("ingest", "Convert a Loghub-style log into lines and labels");
  ingest->add_option("--in", ingest_in, "raw log file")->required()->check(CLI::ExistingFile);
  ingest->add_option("--labels", ingest_labels, "file listing anomalous instance ids")
      ->check(CLI::ExistingFile);
  ingest->add_option("--header-fields", ingest_header, "leading fields to strip")
      ->capture_default_str();
  ingest->add_option("--out", ingest_out, "message lines")->required();
  ingest->add_option("--out-labels", ingest_out_labels, "per-line labels")->required();
  ingest->callback([&] {
    action = [&] {
      const auto raw = logad::ReadLines(ingest_in);
      std::set<std::string> ids;
      if (!ingest_labels.empty()) ids = logad::ReadAnomalyIds(logad::ReadLines(ingest_labels));
      const logad::LabeledCorpus corpus = logad::IngestLoghub(raw, ids, ingest_header);
      std::vector<std::string> labels;
      for (logad::Label l : corpus.labels) labels.emplace_back(logad::LabelName(l));
      logad::WriteFileAtomic(ingest_out, JoinLines(corpus.lines));
      logad::WriteFileAtomic(ingest_out_labels, JoinLines(labels));
    };
  });

  // synth
  logad::SyntheticConfig synth_cfg;
  std::string synth_out, synth_labels;
  auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic log corpus");
  synth->add_option("--templates", synth_cfg.num_templates, "statements in the grammar")
      ->capture_default_str();
  synth->add_option("--events", synth_cfg.num_events, "lines to generate")->capture_default_str();
  synth->add_option("--noise", synth_cfg.noise, "repeat/skip probability")->capture_default_str();
  synth->add_option("--anomaly-rate", synth_cfg.anomaly_rate, "injection probability")
      ->capture_default_str();
  synth->add_option("--seed", seed, "generator seed")->capture_default_str();
  synth->add_option("--out", synth_out, "message lines")->required();
  synth->add_option("--out-labels", synth_labels, "per-line labels")->required();
  synth->callback([&] {
    action = [&] {
      synth_cfg.seed = seed;
      const logad::LabeledCorpus corpus = logad::GenerateSyntheticCorpus(synth_cfg);
      std::vector<std::string> labels;
      for (logad::Label l : corpus.labels) labels.emplace_back(logad::LabelName(l));
      logad::WriteFileAtomic(synth_out, JoinLines(corpus.lines));
      logad::WriteFileAtomic(synth_labels, JoinLines(labels));
    };
  });

  // embed-fallback
  std::string embed_state, embed_out;
  std::size_t embed_dim = 32;
  auto* embed = app.add_subcommand("embed-fallback", "Write hashing-fallback template vectors");
  embed->add_option("--state", embed_state, "parser state")->required()->check(CLI::ExistingFile);
  embed->add_option("--dim", embed_dim, "vector size")->capture_default_str();
  embed->add_option("--out", embed_out, "logvec-v1 file")->required();
  embed->add_option("--seed", seed, "hash seed")->capture_default_str();
  embed->callback([&] {
    action = [&] {
      const auto parser = logad::ParserState::Load(embed_state);
      logad::SaveStore(logad::EmbedAllFallback(parser, embed_dim, seed), embed_out);
    };
  });

  // train
  std::string train_state, train_events, train_out, train_objective = "classification";
  std::string train_optimizer = "adam";
  VectorSource train_vectors;
  logad::TrainConfig train_cfg;
  logad::WindowConfig train_window;
  std::size_t train_hidden = 128;
  logad::DecisionParams train_decision;
  auto* train = app.add_subcommand("train", "Train a Bi-LSTM detector on parsed events");
  train->add_option("--state", train_state, "parser state")->required()->check(CLI::ExistingFile);
  train->add_option("--events", train_events, "events file")->required()->check(CLI::ExistingFile);
  train->add_option("--objective", train_objective, "classification or regression")
      ->capture_default_str();
  train->add_option("--hidden", train_hidden, "LSTM hidden size")->capture_default_str();
  train->add_option("--delta", train_window.delta, "window length")->capture_default_str();
  train->add_option("--stride", train_window.stride, "window stride")->capture_default_str();
  train->add_option("--epochs", train_cfg.epochs, "training epochs")->capture_default_str();
  train->add_option("--lr", train_cfg.learning_rate, "learning rate")->capture_default_str();
  train->add_option("--batch", train_cfg.batch_size, "batch size")->capture_default_str();
  train->add_option("--optimizer", train_optimizer, "adam or sgd")->capture_default_str();
  train->add_option("--clip-norm", train_cfg.clip_norm, "gradient norm cap, 0 = off")
      ->capture_default_str();
  train->add_option("--top-k", train_decision.top_k, "classification top-k")->capture_default_str();
  train->add_option("--max-distance", train_decision.max_distance, "template match radius")
      ->capture_default_str();
  train->add_option("--seed", seed, "seed for init, shuffling and fallback vectors")
      ->capture_default_str();
  train->add_option("--out", train_out, "detector checkpoint")->required();
  AddVectorFlags(train, train_vectors);
  train->callback([&] {
    action = [&] {
      const auto parser = logad::ParserState::Load(train_state);
      const auto events = ReadEvents(train_events);
      train_vectors.seed = seed;
      const logad::EmbeddingSource source = train_vectors.Load();
      const auto ids = logad::DistinctIds(events);
      const logad::EmbeddingStore store = logad::BuildStore(parser, ids, source);
      const auto windows = logad::MakeWindows(logad::ToStream(events, store), train_window);
      logad::nn::ModelConfig config;
      config.embed_dim = store.dim();
      config.hidden_size = train_hidden;
      config.window = train_window.delta;
      config.objective = logad::nn::ParseObjective(train_objective);
      if (train_optimizer == "sgd") {
        train_cfg.optimizer = logad::nn::OptimizerKind::kSgd;
      } else if (train_optimizer != "adam") {
        throw Error(ErrorCode::kConfigError, "optimizer must be adam or sgd");
      }
      train_cfg.seed = Derive(seed, 0x55);
      auto model = logad::InitModel(config, ids, Derive(seed, 0x44));
      auto trained = logad::Train(std::move(model), windows, train_cfg);
      for (std::size_t e = 0; e < trained.loss_curve.size(); ++e) {
        std::fprintf(stderr, "epoch %zu loss %.6f\n", e + 1, trained.loss_curve[e]);
      }
      logad::SavedDetector saved;
      saved.model = std::move(trained.model);
      saved.decision = train_decision;
      saved.decision.mode = config.objective;
      saved.window = train_window;
      saved.embedding_model = store.model_name();
      saved.embedding_seed = seed;
      saved.parser_hash = parser.SnapshotHash();
      logad::SaveDetector(saved, train_out);
    };
  });

  // calibrate
  std::string cal_model, cal_state, cal_events, cal_out;
  double cal_q = 99.0;
  VectorSource cal_vectors;
  auto* calibrate = app.add_subcommand("calibrate", "Set the regression threshold at a percentile");
  calibrate->add_option("--model", cal_model, "detector checkpoint")->required()
      ->check(CLI::ExistingFile);
  calibrate->add_option("--state", cal_state, "parser state")->required()->check(CLI::ExistingFile);
  calibrate->add_option("--events", cal_events, "normal events")->required()
      ->check(CLI::ExistingFile);
  calibrate->add_option("--q", cal_q, "percentile")->capture_default_str();
  calibrate->add_option("--seed", seed, "fallback vector seed")->capture_default_str();
  calibrate->add_option("--out", cal_out, "calibrated checkpoint")->required();
  AddVectorFlags(calibrate, cal_vectors);
  calibrate->callback([&] {
    action = [&] {
      logad::SavedDetector saved = logad::LoadDetector(cal_model);
      if (saved.model.config.objective != logad::nn::Objective::kRegression) {
        throw Error(ErrorCode::kConfigError, "only regression detectors take a threshold");
      }
      const auto parser = logad::ParserState::Load(cal_state);
      const auto events = ReadEvents(cal_events);
      cal_vectors.seed = seed;
      const auto store = logad::BuildStore(parser, logad::DistinctIds(events), cal_vectors.Load());
      const auto windows = logad::MakeWindows(logad::ToStream(events, store), saved.window);
      saved.decision.q = cal_q;
      saved.decision.threshold = logad::CalibrateRegressionThreshold(saved.model, windows, cal_q);
      std::fprintf(stderr, "threshold %.17g\n", saved.decision.threshold);
      logad::SaveDetector(saved, cal_out);
    };
  });

  // detect
  std::string det_model, det_state, det_in, det_out, det_save_state;
  int det_header = 0;
  VectorSource det_vectors;
  std::optional<std::size_t> det_top_k;
  std::optional<double> det_max_distance;
  auto* detect = app.add_subcommand("detect", "Write one verdict per windowed event");
  detect->add_option("--model", det_model, "detector checkpoint")->required()
      ->check(CLI::ExistingFile);
  detect->add_option("--state", det_state, "parser state after training")->required()
      ->check(CLI::ExistingFile);
  detect->add_option("--in", det_in, "log file")->required()->check(CLI::ExistingFile);
  detect->add_option("--header-fields", det_header, "leading fields to strip")
      ->capture_default_str();
  detect->add_option("--top-k", det_top_k, "override top-k");
  detect->add_option("--max-distance", det_max_distance, "override template match radius");
  detect->add_option("--save-state", det_save_state, "write the updated parser state here");
  detect->add_option("--seed", seed, "fallback vector seed")->capture_default_str();
  detect->add_option("--out", det_out, "verdicts file (default: stdout)");
  AddVectorFlags(detect, det_vectors);
  detect->callback([&] {
    action = [&] {
      logad::SavedDetector saved = logad::LoadDetector(det_model);
      if (det_top_k) saved.decision.top_k = *det_top_k;
      if (det_max_distance) saved.decision.max_distance = *det_max_distance;
      const auto trained_parser = logad::ParserState::Load(det_state);
      det_vectors.seed = seed;
      const logad::EmbeddingSource source = det_vectors.Load();
      const logad::EmbeddingStore known =
          logad::BuildStore(trained_parser, saved.model.known_ids, source);
      logad::ParserState parser = trained_parser;
      parser.Freeze();
      const auto events = parser.ParseStream(ReadRawLines(det_in, det_header));
      const auto store = logad::BuildStore(parser, logad::DistinctIds(events), source, &known);
      const auto verdicts =
          logad::DetectStream(saved.model, logad::ToStream(events, store), saved.decision, known);
      std::vector<std::string> records;
      for (const auto& v : verdicts) records.push_back(logad::FormatVerdict(v));
      WriteOrPrint(det_out, JoinLines(records));
      if (!det_save_state.empty()) parser.Save(det_save_state);
    };
  });

  // alter
  std::string alter_in, alter_out, alter_prov, alter_kind = "SemSwap", alter_vocab;
  std::size_t alter_intensity = 1, alter_block = 1;
  double alter_fraction = 10.0;
  bool alter_dataset_b = false;
  double alter_p = 15.0;
  std::string alter_severity = "different";
  std::optional<double> alter_range_min, alter_range_max;
  auto* alter = app.add_subcommand("alter", "Corrupt log messages or their order");
  alter->add_option("--in", alter_in, "message lines")->required()->check(CLI::ExistingFile);
  alter->add_option("--out", alter_out, "altered lines")->required();
  alter->add_option("--provenance", alter_prov, "provenance records");
  alter->add_option("--kind", alter_kind, "SemDelete, SemSwap, SemImpute, SeqDelete, SeqSwap, SeqImpute")
      ->capture_default_str();
  alter->add_option("--intensity", alter_intensity, "l")->capture_default_str();
  alter->add_option("--block-len", alter_block, "SeqSwap block length")->capture_default_str();
  alter->add_option("--fraction", alter_fraction, "percent of lines altered (semantic kinds)")
      ->capture_default_str();
  alter->add_option("--vocabulary-from", alter_vocab, "corpus for substitute tokens (default: --in)")
      ->check(CLI::ExistingFile);
  alter->add_flag("--dataset-b", alter_dataset_b, "synthesize an updated dataset instead");
  alter->add_option("--p", alter_p, "dataset-b: percent of lines altered")->capture_default_str();
  alter->add_option("--severity", alter_severity, "dataset-b: similar or different")
      ->capture_default_str();
  alter->add_option("--intensity-min", alter_range_min, "dataset-b: lowest percent of a message");
  alter->add_option("--intensity-max", alter_range_max, "dataset-b: highest percent of a message");
  alter->add_option("--seed", seed, "alteration seed")->capture_default_str();
  alter->callback([&] {
    action = [&] {
      const std::vector<std::string> lines = logad::ReadLines(alter_in);
      std::vector<std::string> out;
      std::vector<std::string> provenance;
      if (alter_dataset_b) {
        logad::AlteredCorpusSpec spec;
        spec.fraction_percent = alter_p;
        spec.severity = logad::ParseSeverity(alter_severity);
        if (alter_range_min || alter_range_max) {
          const auto range = spec.Range();
          spec.intensity_range = {alter_range_min.value_or(range.first),
                                  alter_range_max.value_or(range.second)};
        }
        spec.seed = seed;
        auto b = logad::SynthesizeDatasetB(lines, spec);
        out = std::move(b.lines);
        for (const auto& r : b.provenance) provenance.push_back(logad::FormatProvenance(r));
      } else {
        const logad::AlterationKind kind = logad::ParseAlterationKind(alter_kind);
        if (logad::IsSemantic(kind)) {
          const auto vocabulary =
              logad::BuildVocabulary(alter_vocab.empty() ? lines : logad::ReadLines(alter_vocab));
          std::vector<std::size_t> order(lines.size());
          for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
          logad::Rng rng(seed);
          rng.shuffle(std::span<std::size_t>(order));
          const auto count = static_cast<std::size_t>(
              std::llround(alter_fraction * static_cast<double>(lines.size()) / 100.0));
          order.resize(std::min(count, order.size()));
          std::sort(order.begin(), order.end());
          out = lines;
          for (std::size_t index : order) {
            const auto tokens = logad::SplitWhitespace(lines[index]);
            logad::AlterationConfig cfg{kind, alter_intensity, 1,
                                        logad::Rng::Mix(seed ^ logad::Rng::Mix(index + 1))};
            out[index] = logad::JoinTokens(logad::AlterMessage(tokens, cfg, vocabulary));
            logad::ProvenanceRecord r;
            r.index = index;
            r.kind = kind;
            r.intensity = alter_intensity;
            r.intensity_percent = tokens.empty() ? 0.0
                                                 : 100.0 * static_cast<double>(alter_intensity) /
                                                       static_cast<double>(tokens.size());
            r.original = lines[index];
            provenance.push_back(logad::FormatProvenance(r));
          }
        } else {
          logad::AlterationConfig cfg{kind, alter_intensity, alter_block, seed};
          const auto edit = logad::PlanSequenceAlteration(lines.size(), cfg);
          out = logad::ApplySequenceEdit<std::string>(lines, edit);
          for (std::size_t i = 0; i < edit.source.size(); ++i) {
            if (!edit.altered[i]) continue;
            logad::ProvenanceRecord r;
            r.index = i;
            r.kind = kind;
            r.intensity = alter_intensity;
            r.original = lines[edit.source[i]];
            provenance.push_back(logad::FormatProvenance(r));
          }
        }
      }
      logad::WriteFileAtomic(alter_out, JoinLines(out));
      if (!alter_prov.empty()) logad::WriteFileAtomic(alter_prov, JoinLines(provenance));
    };
  });

  // transfer
  std::string tr_a, tr_b, tr_labels, tr_spec, tr_out, tr_verdicts;
  auto* transfer = app.add_subcommand("transfer", "Pretrain on A, fine-tune on B's head, score B's tail");
  transfer->add_option("--a", tr_a, "dataset A message lines")->required()->check(CLI::ExistingFile);
  transfer->add_option("--b", tr_b, "dataset B message lines")->required()->check(CLI::ExistingFile);
  transfer->add_option("--b-labels", tr_labels, "dataset B labels")->required()
      ->check(CLI::ExistingFile);
  transfer->add_option("--spec", tr_spec, "settings file (experiment keys)")
      ->check(CLI::ExistingFile);
  transfer->add_option("--seed", seed, "experiment seed")->capture_default_str();
  transfer->add_option("--out", tr_out, "report file (default: stdout)");
  transfer->add_option("--verdicts", tr_verdicts,
                       "write verdicts to <prefix>-<zero-shot|fine-tuned>-<objective>.tsv");
  transfer->callback([&] {
    action = [&] {
      logad::ExperimentSpec spec = logad::ExperimentSpec::FromFile(
          tr_spec.empty() ? logad::SpecFile() : logad::SpecFile::Load(tr_spec));
      spec.SetSeed(seed);
      logad::TransferConfig config = spec.Transfer();
      if (config.settings.embedding.kind == logad::EmbeddingSource::Kind::kFile) {
        config.settings.embedding.file_store =
            logad::LoadStore(spec.values().GetString("embedding.path", ""));
      }
      logad::LabeledCorpus b{logad::ReadLines(tr_b), logad::ReadLabels(tr_labels)};
      const auto report = logad::RunTransferExperiment(logad::ReadLines(tr_a), b, config);
      nlohmann::ordered_json j;
      j["format"] = "logad-report-v1";
      j["type"] = "transfer";
      j["seed"] = seed;
      logad::AppendTransferReport(report, j);
      if (!tr_verdicts.empty()) {
        const auto write = [&](const auto& by_objective, const std::string& stage) {
          for (const auto& [objective, verdicts] : by_objective) {
            std::vector<std::string> records;
            for (const auto& v : verdicts) records.push_back(logad::FormatVerdict(v));
            logad::WriteFileAtomic(tr_verdicts + "-" + stage + "-" +
                                       std::string(logad::nn::ObjectiveName(objective)) + ".tsv",
                                   JoinLines(records));
          }
        };
        write(report.zero_shot_verdicts, "zero-shot");
        write(report.fine_tuned_verdicts, "fine-tuned");
      }
      WriteOrPrint(tr_out, logad::RenderReport(j));
    };
  });

  // eval
  std::string eval_verdicts, eval_labels, eval_out;
  auto* eval = app.add_subcommand("eval", "Score verdicts against per-line labels");
  eval->add_option("--verdicts", eval_verdicts, "verdicts file")->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--labels", eval_labels, "labels file")->required()->check(CLI::ExistingFile);
  eval->add_option("--out", eval_out, "metrics file (default: stdout)");
  eval->callback([&] {
    action = [&] {
      std::vector<logad::Verdict> verdicts;
      for (const std::string& line : logad::ReadLines(eval_verdicts)) {
        if (!line.empty()) verdicts.push_back(logad::ParseVerdict(line));
      }
      const auto labels = logad::ReadLabels(eval_labels);
      const auto metrics = logad::ComputeMetrics(logad::LabelVerdicts(verdicts, labels));
      WriteOrPrint(eval_out, logad::MetricsJson(metrics).dump(2) + "\n");
    };
  });

  // experiment
  std::string exp_spec, exp_out;
  std::optional<std::uint64_t> exp_seed;
  auto* experiment = app.add_subcommand("experiment", "Run an experiment spec end to end");
  experiment->add_option("--spec", exp_spec, "spec file")->required()->check(CLI::ExistingFile);
  experiment->add_option("--seed", exp_seed, "override experiment.seed");
  experiment->add_option("--out", exp_out, "report file (default: stdout)");
  experiment->callback([&] {
    action = [&] {
      logad::ExperimentSpec spec = logad::ExperimentSpec::FromFile(logad::SpecFile::Load(exp_spec));
      if (exp_seed) spec.SetSeed(*exp_seed);
      const logad::ExperimentResult result = logad::RunExperiment(spec);
      for (const auto& r : result.report["results"]) {
        if (r["verdicts_path"].is_null()) continue;
        std::vector<std::string> records;
        for (const auto& v : result.verdicts.at(r["objective"].get<std::string>())) {
          records.push_back(logad::FormatVerdict(v));
        }
        logad::WriteFileAtomic(r["verdicts_path"].get<std::string>(), JoinLines(records));
      }
      WriteOrPrint(exp_out, logad::RenderReport(result.report));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }
  try {
    action();
  } catch (const logad::Error& e) {
    std::cerr << "error [" << logad::ErrorCodeName(e.code()) << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
