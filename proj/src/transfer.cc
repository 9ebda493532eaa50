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

#include "logad/transfer.h"

#include <algorithm>
#include <limits>

#include "logad/error.h"

namespace logad {

double TemplateMapping::MeanDistance() const {
  if (entries.empty()) return 0.0;
  double total = 0.0;
  for (const auto& [id, m] : entries) total += m.distance;
  return total / static_cast<double>(entries.size());
}

double TemplateMapping::MaxDistance() const {
  double best = 0.0;
  for (const auto& [id, m] : entries) best = std::max(best, m.distance);
  return best;
}

TemplateMapping MapTemplates(const EmbeddingStore& store_a, const EmbeddingStore& store_b) {
  if (store_a.empty() || store_b.empty()) {
    throw Error(ErrorCode::kEmptyStore, "template mapping needs two non-empty stores");
  }
  if (store_a.dim() != store_b.dim()) {
    throw Error(ErrorCode::kDimMismatch, "stores have dimensions " + std::to_string(store_a.dim()) +
                                             " and " + std::to_string(store_b.dim()));
  }
  TemplateMapping mapping;
  for (const auto& [id, entry] : store_b.entries()) {
    mapping.entries[id] =
        *NearestTemplate(entry.vector, store_a, std::numeric_limits<double>::infinity());
  }
  return mapping;
}

FewShotResult FewShotFinetune(const DetectorModel& model, std::span<const EventWindow> head,
                              const TrainConfig& config) {
  FewShotResult result;
  result.model = model;
  result.loss_before = MeanLoss(model, head);
  result.loss_after = result.loss_before;
  if (config.epochs == 0) return result;
  Train(model, head, config, [&](std::size_t, const DetectorModel& current) {
    const double loss = MeanLoss(current, head);
    result.loss_curve.push_back(loss);
    if (loss < result.loss_after) {
      result.loss_after = loss;
      result.model = current;
    }
  });
  return result;
}

void TransferConfig::Validate() const {
  if (!(few_shot_fraction > 0.0 && few_shot_fraction < 1.0)) {
    throw Error(ErrorCode::kConfigError, "few_shot_fraction must be in (0, 1)");
  }
  if (!(map_radius >= 0.0 && map_radius <= 2.0)) {
    throw Error(ErrorCode::kConfigError, "map_radius must be in [0, 2]");
  }
  if (objectives.empty()) throw Error(ErrorCode::kConfigError, "no objective selected");
}

namespace {

// Inputs keep B's vectors; targets become the mapped A template.
std::vector<EventWindow> HeadWindows(std::span<const StreamEvent> head, const WindowConfig& window,
                                     const TemplateMapping& mapping, const EmbeddingStore& store_a,
                                     double max_distance) {
  std::vector<EventWindow> windows;
  for (EventWindow& w : MakeWindows(head, window)) {
    const MatchResult& m = mapping.entries.at(w.target_class);
    if (m.distance > max_distance) continue;
    w.target_class = m.template_id;
    w.target_embedding = store_a.at(m.template_id).vector;
    windows.push_back(std::move(w));
  }
  return windows;
}

}  // namespace

TransferReport RunTransferExperiment(std::span<const std::string> corpus_a,
                                     const LabeledCorpus& corpus_b, const TransferConfig& config) {
  config.Validate();
  if (corpus_b.lines.size() != corpus_b.labels.size()) {
    throw Error(ErrorCode::kInvalidArgument, "dataset B has " + std::to_string(corpus_b.lines.size()) +
                                                 " lines but " + std::to_string(corpus_b.labels.size()) +
                                                 " labels");
  }
  const PipelineSettings& settings = config.settings;
  TransferReport report;
  report.a_events = corpus_a.size();
  report.b_events = corpus_b.lines.size();
  for (nn::Objective objective : config.objectives) {
    const TrainedDetector detector = TrainDetector(corpus_a, objective, settings);

    ParserState parser_b = detector.parser;
    const std::vector<ParsedEvent> events_b = parser_b.ParseStream(ToRawLines(corpus_b.lines));
    const std::vector<TemplateId> ids_b = DistinctIds(events_b);
    const EmbeddingStore store_b = BuildStore(parser_b, ids_b, settings.embedding, &detector.known);
    const TemplateMapping mapping = MapTemplates(detector.known, store_b);
    report.a_templates = detector.known.size();
    report.b_templates = store_b.size();
    report.b_novel_templates = 0;
    for (TemplateId id : ids_b) {
      if (!detector.known.Contains(id)) ++report.b_novel_templates;
    }
    report.mapping_mean_distance = mapping.MeanDistance();
    report.mapping_max_distance = mapping.MaxDistance();

    const std::size_t head_n = static_cast<std::size_t>(
        config.few_shot_fraction * static_cast<double>(events_b.size()));
    const std::vector<StreamEvent> stream_b = ToStream(events_b, store_b);
    const std::span<const StreamEvent> head(stream_b.data(), head_n);
    const std::span<const StreamEvent> tail(stream_b.data() + head_n, stream_b.size() - head_n);
    report.head_events = head.size();
    report.tail_events = tail.size();
    const std::vector<EventWindow> head_windows =
        HeadWindows(head, settings.window, mapping, detector.known, settings.decision.max_distance);

    TransferCell cell;
    cell.objective = objective;
    cell.pretrain_loss_curve = detector.loss_curve;
    cell.threshold_zero_shot = detector.decision.threshold;

    // B events whose template maps within map_radius are scored against the
    // mapped A template; the rest go through ordinary nearest-template
    // matching, so unrelated new statements are still flagged.
    std::vector<StreamEvent> tail_events(tail.begin(), tail.end());
    for (StreamEvent& e : tail_events) {
      const MatchResult& m = mapping.entries.at(e.template_id);
      if (m.distance <= config.map_radius) e.template_id = m.template_id;
    }
    const EmbeddingStore& known = detector.known;
    const auto score = [&](const std::vector<Verdict>& verdicts) {
      return ComputeMetrics(LabelVerdicts(verdicts, corpus_b.labels));
    };
    std::vector<Verdict> zero_shot = DetectStream(detector.model, tail_events, detector.decision, known);
    cell.zero_shot = score(zero_shot);
    report.zero_shot_verdicts[objective] = std::move(zero_shot);

    TrainConfig few_shot = settings.train;
    few_shot.epochs = config.few_shot_epochs;
    few_shot.learning_rate = config.few_shot_learning_rate > 0.0 ? config.few_shot_learning_rate
                                                                 : settings.train.learning_rate / 10.0;
    const FewShotResult tuned = FewShotFinetune(detector.model, head_windows, few_shot);
    cell.head_loss_before = tuned.loss_before;
    cell.head_loss_after = tuned.loss_after;
    cell.finetune_loss_curve = tuned.loss_curve;

    DecisionParams decision = detector.decision;
    if (objective == nn::Objective::kRegression) {
      decision.threshold = CalibrateRegressionThreshold(tuned.model, detector.windows, decision.q);
    }
    std::vector<Verdict> verdicts = DetectStream(tuned.model, tail_events, decision, known);
    cell.threshold_fine_tuned = decision.threshold;
    cell.fine_tuned = score(verdicts);
    report.fine_tuned_verdicts[objective] = std::move(verdicts);
    report.cells.push_back(std::move(cell));
  }
  return report;
}

}  // namespace logad
