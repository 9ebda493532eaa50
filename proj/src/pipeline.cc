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

#include "logad/pipeline.h"

#include <set>

#include "json.hpp"
#include "logad/error.h"

namespace logad {

std::vector<RawLogLine> ToRawLines(std::span<const std::string> lines) {
  std::vector<RawLogLine> raw;
  raw.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    raw.push_back({static_cast<std::int64_t>(i + 1), std::nullopt, lines[i]});
  }
  return raw;
}

std::vector<TemplateId> DistinctIds(std::span<const ParsedEvent> events) {
  std::vector<TemplateId> ids;
  std::set<TemplateId> seen;
  for (const ParsedEvent& e : events) {
    if (seen.insert(e.template_id).second) ids.push_back(e.template_id);
  }
  return ids;
}

EmbeddingStore BuildStore(const ParserState& parser, std::span<const TemplateId> ids,
                          const EmbeddingSource& source, const EmbeddingStore* reuse) {
  const bool from_file = source.kind == EmbeddingSource::Kind::kFile;
  if (from_file && !source.file_store) {
    throw Error(ErrorCode::kConfigError, "embedding source is a file but none was loaded");
  }
  EmbeddingStore store(source.Dim(), from_file ? source.file_store->model_name() : "fallback-hash-v1",
                       from_file ? source.file_store->parser_hash() : parser.SnapshotHash());
  for (TemplateId id : ids) {
    if (reuse != nullptr && reuse->Contains(id)) {
      const StoreEntry& e = reuse->at(id);
      store.Insert(id, e.template_text, e.vector);
    } else if (from_file) {
      if (!source.file_store->Contains(id)) {
        throw Error(ErrorCode::kConfigError,
                    "embedding file has no vector for template " + std::to_string(id));
      }
      const StoreEntry& e = source.file_store->at(id);
      store.Insert(id, e.template_text, e.vector);
    } else {
      const LogTemplate& t = parser.at(id);
      store.Insert(id, t.Render(), EmbedFallback(t, source.dim, source.seed));
    }
  }
  return store;
}

std::vector<StreamEvent> ToStream(std::span<const ParsedEvent> events, const EmbeddingStore& store) {
  std::vector<StreamEvent> stream;
  stream.reserve(events.size());
  for (const ParsedEvent& e : events) {
    stream.push_back({e.line_no, e.template_id, store.at(e.template_id).vector});
  }
  return stream;
}

TrainedDetector TrainDetector(std::span<const std::string> train_lines, nn::Objective objective,
                              const PipelineSettings& settings) {
  TrainedDetector out{ParserState(settings.parser), {}, {}, settings.decision, {}, {}};
  const std::vector<RawLogLine> raw = ToRawLines(train_lines);
  const std::vector<ParsedEvent> events = out.parser.ParseStream(raw);
  const std::vector<TemplateId> ids = DistinctIds(events);
  out.known = BuildStore(out.parser, ids, settings.embedding);
  const std::vector<StreamEvent> stream = ToStream(events, out.known);
  out.windows = MakeWindows(stream, settings.window);

  nn::ModelConfig config;
  config.embed_dim = out.known.dim();
  config.hidden_size = settings.hidden_size;
  config.window = settings.window.delta;
  config.objective = objective;
  DetectorModel model = InitModel(config, ids, settings.init_seed);
  TrainResult trained = Train(std::move(model), out.windows, settings.train);
  out.model = std::move(trained.model);
  out.loss_curve = std::move(trained.loss_curve);
  out.decision.mode = objective;
  if (objective == nn::Objective::kRegression) {
    out.decision.threshold = CalibrateRegressionThreshold(out.model, out.windows, out.decision.q);
  }
  out.decision.Validate(out.model.config.num_classes);
  return out;
}

DetectionRun DetectLines(const TrainedDetector& detector, std::span<const std::string> lines,
                         const EmbeddingSource& source, const EmbeddingStore* known) {
  const EmbeddingStore& known_store = known != nullptr ? *known : detector.known;
  ParserState parser = detector.parser;
  parser.Freeze();
  DetectionRun run;
  const std::vector<RawLogLine> raw = ToRawLines(lines);
  run.events = parser.ParseStream(raw);
  const std::vector<TemplateId> ids = DistinctIds(run.events);
  for (TemplateId id : ids) {
    if (!known_store.Contains(id)) ++run.novel_templates;
  }
  const EmbeddingStore all = BuildStore(parser, ids, source, &known_store);
  const std::vector<StreamEvent> stream = ToStream(run.events, all);
  run.verdicts = DetectStream(detector.model, stream, detector.decision, known_store);
  return run;
}

std::vector<LabeledVerdict> LabelVerdicts(std::span<const Verdict> verdicts,
                                          std::span<const Label> truth) {
  std::vector<LabeledVerdict> out;
  out.reserve(verdicts.size());
  for (const Verdict& v : verdicts) {
    if (v.line_no < 1 || static_cast<std::size_t>(v.line_no) > truth.size()) {
      throw Error(ErrorCode::kInvalidArgument, "verdict line " + std::to_string(v.line_no) +
                                                   " has no ground truth");
    }
    out.push_back({v.line_no, v.label, truth[static_cast<std::size_t>(v.line_no - 1)]});
  }
  return out;
}

void SaveDetector(const SavedDetector& detector, const std::filesystem::path& path) {
  nlohmann::ordered_json meta;
  meta["class_ids"] = detector.model.class_ids;
  meta["known_ids"] = detector.model.known_ids;
  meta["decision"] = {{"mode", std::string(nn::ObjectiveName(detector.decision.mode))},
                      {"top_k", detector.decision.top_k},
                      {"max_distance", detector.decision.max_distance},
                      {"q", detector.decision.q},
                      {"threshold", detector.decision.threshold}};
  meta["window"] = {{"delta", detector.window.delta}, {"stride", detector.window.stride}};
  meta["embedding"] = {{"model", detector.embedding_model}, {"seed", detector.embedding_seed}};
  meta["parser_hash"] = detector.parser_hash;
  nn::SaveCheckpoint({detector.model.config, detector.model.params, meta.dump()}, path);
}

SavedDetector LoadDetector(const std::filesystem::path& path) {
  nn::Checkpoint ck = nn::LoadCheckpoint(path);
  SavedDetector out;
  try {
    const nlohmann::json meta = nlohmann::json::parse(ck.meta_json);
    out.model.config = ck.config;
    out.model.params = std::move(ck.params);
    out.model.class_ids = meta.at("class_ids").get<std::vector<TemplateId>>();
    out.model.known_ids = meta.at("known_ids").get<std::vector<TemplateId>>();
    const nlohmann::json& d = meta.at("decision");
    out.decision.mode = nn::ParseObjective(d.at("mode").get<std::string>());
    out.decision.top_k = d.at("top_k").get<std::size_t>();
    out.decision.max_distance = d.at("max_distance").get<double>();
    out.decision.q = d.at("q").get<double>();
    out.decision.threshold = d.at("threshold").get<double>();
    out.window.delta = meta.at("window").at("delta").get<std::size_t>();
    out.window.stride = meta.at("window").at("stride").get<std::size_t>();
    out.embedding_model = meta.at("embedding").at("model").get<std::string>();
    out.embedding_seed = meta.at("embedding").at("seed").get<std::uint64_t>();
    out.parser_hash = meta.at("parser_hash").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("detector metadata: ") + e.what());
  }
  if (out.model.config.objective == nn::Objective::kClassification &&
      out.model.class_ids.size() != out.model.config.num_classes) {
    throw Error(ErrorCode::kFormatError, "detector metadata: class count differs from model");
  }
  return out;
}

}  // namespace logad
