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

#include "logad/detector.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "logad/error.h"
#include "logad/io_util.h"
#include "logad/random.h"

namespace logad {
namespace {

constexpr std::size_t kLossChunk = 256;

}  // namespace

std::vector<EventWindow> MakeWindows(std::span<const StreamEvent> events,
                                     const WindowConfig& config) {
  if (config.delta < 1 || config.stride < 1) {
    throw Error(ErrorCode::kConfigError, "window delta and stride must be >= 1");
  }
  if (events.size() < config.delta + 1) {
    throw Error(ErrorCode::kTooFewEvents, std::to_string(events.size()) +
                                              " events cannot fill a window of " +
                                              std::to_string(config.delta) + " plus a target");
  }
  const std::size_t dim = events.front().embedding.size();
  std::vector<EventWindow> windows;
  windows.reserve((events.size() - config.delta + config.stride - 1) / config.stride);
  for (std::size_t start = 0; start + config.delta < events.size(); start += config.stride) {
    EventWindow w;
    w.inputs.reserve(config.delta * dim);
    for (std::size_t i = start; i < start + config.delta; ++i) {
      if (events[i].embedding.size() != dim) {
        throw Error(ErrorCode::kDimMismatch, "events carry embeddings of different sizes");
      }
      w.inputs.insert(w.inputs.end(), events[i].embedding.begin(), events[i].embedding.end());
    }
    const StreamEvent& target = events[start + config.delta];
    if (target.embedding.size() != dim) {
      throw Error(ErrorCode::kDimMismatch, "events carry embeddings of different sizes");
    }
    w.target_embedding = target.embedding;
    w.target_class = target.template_id;
    w.target_index = start + config.delta;
    windows.push_back(std::move(w));
  }
  return windows;
}

void DecisionParams::Validate(std::size_t num_classes) const {
  if (mode == nn::Objective::kClassification && (top_k < 1 || top_k > num_classes)) {
    throw Error(ErrorCode::kConfigError, "top_k must be in [1, n]");
  }
  if (!(q > 0.0 && q <= 100.0)) throw Error(ErrorCode::kConfigError, "q must be in (0, 100]");
  if (threshold < 0.0) throw Error(ErrorCode::kConfigError, "threshold must be >= 0");
  if (!(max_distance >= 0.0)) throw Error(ErrorCode::kConfigError, "max_distance must be >= 0");
}

std::string_view LabelName(Label label) {
  return label == Label::kNormal ? "normal" : "anomaly";
}

Label ParseLabel(std::string_view name) {
  if (name == "normal") return Label::kNormal;
  if (name == "anomaly") return Label::kAnomaly;
  throw Error(ErrorCode::kFormatError, "unknown label '" + std::string(name) + "'");
}

std::string_view ReasonName(Reason reason) {
  switch (reason) {
    case Reason::kNone: return "-";
    case Reason::kTopKMiss: return "top-k-miss";
    case Reason::kOverThreshold: return "over-threshold";
    case Reason::kNoTemplateMatch: return "no-template-match";
  }
  return "-";
}

std::string FormatVerdict(const Verdict& v) {
  return std::to_string(v.line_no) + "\t" + std::string(LabelName(v.label)) + "\t" +
         FormatDouble17(v.score) + "\t" + std::string(ReasonName(v.reason));
}

Verdict ParseVerdict(std::string_view record) {
  const std::vector<std::string> f = SplitTabs(record);
  if (f.size() != 4) throw Error(ErrorCode::kFormatError, "verdict record needs 4 fields");
  Verdict v;
  try {
    v.line_no = std::stoll(f[0]);
    v.score = std::stod(f[2]);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kFormatError, "verdict record: bad number");
  }
  v.label = ParseLabel(f[1]);
  if (f[3] == "-") v.reason = Reason::kNone;
  else if (f[3] == "top-k-miss") v.reason = Reason::kTopKMiss;
  else if (f[3] == "over-threshold") v.reason = Reason::kOverThreshold;
  else if (f[3] == "no-template-match") v.reason = Reason::kNoTemplateMatch;
  else throw Error(ErrorCode::kFormatError, "unknown reason '" + f[3] + "'");
  return v;
}

std::optional<std::size_t> DetectorModel::ClassIndex(TemplateId id) const {
  auto it = std::lower_bound(class_ids.begin(), class_ids.end(), id);
  if (it == class_ids.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - class_ids.begin());
}

DetectorModel InitModel(nn::ModelConfig config, std::vector<TemplateId> known_ids,
                        std::uint64_t seed) {
  std::sort(known_ids.begin(), known_ids.end());
  known_ids.erase(std::unique(known_ids.begin(), known_ids.end()), known_ids.end());
  DetectorModel model;
  if (config.objective == nn::Objective::kClassification) {
    model.class_ids = known_ids;
    config.num_classes = known_ids.size();
  }
  model.known_ids = std::move(known_ids);
  config.Validate();
  model.config = config;
  model.params = nn::BiLstmParams::Init(config, seed);
  return model;
}

std::vector<nn::Example> ToExamples(const DetectorModel& model,
                                    std::span<const EventWindow> windows) {
  std::vector<nn::Example> examples;
  examples.reserve(windows.size());
  const bool classify = model.config.objective == nn::Objective::kClassification;
  for (const EventWindow& w : windows) {
    nn::Example ex{w.inputs, 0, w.target_embedding};
    if (classify) {
      const std::optional<std::size_t> cls = model.ClassIndex(w.target_class);
      if (!cls) {
        throw Error(ErrorCode::kInvalidArgument,
                    "window target " + std::to_string(w.target_class) + " is not a model class");
      }
      ex.target_class = *cls;
    }
    examples.push_back(ex);
  }
  return examples;
}

TrainResult Train(DetectorModel model, std::span<const EventWindow> windows,
                  const TrainConfig& config, const EpochCallback& on_epoch) {
  if (windows.empty()) throw Error(ErrorCode::kEmptyTrainingSet, "no training windows");
  if (config.batch_size < 1) throw Error(ErrorCode::kConfigError, "batch size must be >= 1");
  const std::vector<nn::Example> examples = ToExamples(model, windows);
  nn::OptimizerState opt = nn::MakeOptimizer(config.optimizer, model.config);
  Rng rng(config.seed);
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<nn::Example> batch;
  nn::BiLstmParams grads;
  TrainResult result;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(examples[order[i]]);
      const double loss = nn::LossAndGradient(model.params, model.config, batch, &grads);
      if (!std::isfinite(loss)) {
        throw Error(ErrorCode::kDivergenceDetected, "non-finite loss in epoch " + std::to_string(epoch));
      }
      if (config.clip_norm > 0.0) {
        const double norm = nn::GradientNorm(grads);
        if (norm > config.clip_norm) nn::ScaleGradients(grads, config.clip_norm / norm);
      }
      nn::OptimizerStep(model.params, grads, opt, config.learning_rate);
      total += loss * static_cast<double>(end - start);
    }
    result.loss_curve.push_back(total / static_cast<double>(order.size()));
    if (on_epoch) on_epoch(epoch, model);
  }
  result.model = std::move(model);
  return result;
}

std::vector<std::vector<double>> Predict(const DetectorModel& model,
                                         std::span<const EventWindow> windows) {
  // One window per forward pass: batched products round differently, and a
  // window's score must not depend on which other windows it was scored with.
  std::vector<std::vector<double>> out;
  out.reserve(windows.size());
  for (const EventWindow& w : windows) {
    const nn::Example example{w.inputs, 0, w.target_embedding};
    out.push_back(std::move(nn::PredictBatch(model.params, model.config,
                                             std::span<const nn::Example>(&example, 1))
                                .front()));
  }
  return out;
}

double MeanLoss(const DetectorModel& model, std::span<const EventWindow> windows) {
  if (windows.empty()) throw Error(ErrorCode::kEmptyInput, "no windows");
  const std::vector<nn::Example> examples = ToExamples(model, windows);
  double total = 0.0;
  for (std::size_t start = 0; start < examples.size(); start += kLossChunk) {
    const std::size_t n = std::min(kLossChunk, examples.size() - start);
    total += static_cast<double>(n) *
             nn::LossAndGradient(model.params, model.config,
                                 std::span<const nn::Example>(examples).subspan(start, n), nullptr);
  }
  return total / static_cast<double>(examples.size());
}

double NearestRankPercentile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::kEmptyTrainingSet, "percentile of no values");
  if (!(q > 0.0 && q <= 100.0)) throw Error(ErrorCode::kConfigError, "q must be in (0, 100]");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  // Guard against q * N / 100 landing a hair above an integer.
  auto rank = static_cast<std::size_t>(std::ceil(q * n / 100.0 - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

double CalibrateRegressionThreshold(const DetectorModel& model,
                                    std::span<const EventWindow> windows, double q) {
  if (windows.empty()) throw Error(ErrorCode::kEmptyTrainingSet, "no calibration windows");
  const auto preds = Predict(model, windows);
  std::vector<double> errors(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    errors[i] = nn::MeanSquaredError(preds[i], windows[i].target_embedding);
  }
  return NearestRankPercentile(std::move(errors), q);
}

Resolution ResolveTarget(TemplateId target, std::span<const double> embedding,
                         const EmbeddingStore& known, double max_distance) {
  if (known.Contains(target)) return ResolvedTarget{target, 0.0};
  if (known.empty()) return DirectAnomaly{2.0};
  const std::optional<MatchResult> m =
      NearestTemplate(embedding, known, std::numeric_limits<double>::infinity());
  if (m->distance > max_distance) return DirectAnomaly{m->distance};
  return ResolvedTarget{m->template_id, m->distance};
}

std::size_t TargetRank(std::span<const double> probabilities,
                       std::span<const TemplateId> class_ids, TemplateId target) {
  if (probabilities.size() != class_ids.size()) {
    throw Error(ErrorCode::kShapeMismatch, "probabilities and class ids differ in length");
  }
  auto it = std::find(class_ids.begin(), class_ids.end(), target);
  if (it == class_ids.end()) throw Error(ErrorCode::kInvalidArgument, "target is not a class");
  const std::size_t t = static_cast<std::size_t>(it - class_ids.begin());
  const double pt = probabilities[t];
  std::size_t rank = 1;
  for (std::size_t c = 0; c < probabilities.size(); ++c) {
    if (c == t) continue;
    if (probabilities[c] > pt || (probabilities[c] == pt && class_ids[c] < target)) ++rank;
  }
  return rank;
}

namespace {

Verdict ClassificationVerdict(const DetectorModel& model, std::span<const double> probs,
                              TemplateId target, std::size_t top_k, std::int64_t line_no) {
  const std::size_t rank = TargetRank(probs, model.class_ids, target);
  const bool normal = rank <= top_k;
  return {line_no, normal ? Label::kNormal : Label::kAnomaly, static_cast<double>(rank),
          normal ? Reason::kNone : Reason::kTopKMiss};
}

Verdict RegressionVerdict(std::span<const double> prediction, std::span<const double> target,
                          double threshold, std::int64_t line_no) {
  const double err = nn::MeanSquaredError(prediction, target);
  const bool anomaly = err > threshold;
  return {line_no, anomaly ? Label::kAnomaly : Label::kNormal, err,
          anomaly ? Reason::kOverThreshold : Reason::kNone};
}

}  // namespace

Verdict DetectClassification(const DetectorModel& model, const EventWindow& window,
                             TemplateId resolved_target, std::size_t top_k,
                             std::int64_t line_no) {
  const auto preds = Predict(model, std::span<const EventWindow>(&window, 1));
  return ClassificationVerdict(model, preds.front(), resolved_target, top_k, line_no);
}

Verdict DetectRegression(const DetectorModel& model, const EventWindow& window,
                         std::span<const double> target_embedding, double threshold,
                         std::int64_t line_no) {
  const auto preds = Predict(model, std::span<const EventWindow>(&window, 1));
  return RegressionVerdict(preds.front(), target_embedding, threshold, line_no);
}

std::vector<Verdict> DetectStream(const DetectorModel& model,
                                  std::span<const StreamEvent> events,
                                  const DecisionParams& decision,
                                  const EmbeddingStore& known) {
  const std::size_t delta = model.config.window;
  if (events.size() <= delta) return {};
  if (decision.mode != model.config.objective) {
    throw Error(ErrorCode::kConfigError, "decision mode differs from model objective");
  }
  decision.Validate(model.config.num_classes);
  const std::size_t dim = model.config.embed_dim;

  // Unmatched events are flagged and dropped from the context of later ones.
  std::vector<std::optional<Verdict>> slots(events.size());
  std::vector<std::size_t> context;  // indices of retained events
  std::vector<EventWindow> pending;
  std::vector<std::size_t> pending_event;
  std::vector<ResolvedTarget> pending_target;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const StreamEvent& e = events[i];
    if (e.embedding.size() != dim) {
      throw Error(ErrorCode::kDimMismatch, "event embedding size differs from the model");
    }
    const Resolution r = ResolveTarget(e.template_id, e.embedding, known, decision.max_distance);
    if (const auto* direct = std::get_if<DirectAnomaly>(&r)) {
      if (i >= delta) slots[i] = Verdict{e.line_no, Label::kAnomaly, direct->distance, Reason::kNoTemplateMatch};
      continue;
    }
    if (i >= delta && context.size() >= delta) {
      EventWindow w;
      w.inputs.reserve(delta * dim);
      for (std::size_t c = context.size() - delta; c < context.size(); ++c) {
        const EmbeddingVector& v = events[context[c]].embedding;
        w.inputs.insert(w.inputs.end(), v.begin(), v.end());
      }
      w.target_embedding = e.embedding;
      w.target_class = e.template_id;
      w.target_index = i;
      pending.push_back(std::move(w));
      pending_event.push_back(i);
      pending_target.push_back(std::get<ResolvedTarget>(r));
    }
    context.push_back(i);
  }
  const auto preds = Predict(model, pending);
  for (std::size_t j = 0; j < pending.size(); ++j) {
    const std::size_t i = pending_event[j];
    if (decision.mode == nn::Objective::kClassification) {
      slots[i] = ClassificationVerdict(model, preds[j], pending_target[j].template_id,
                                       decision.top_k, events[i].line_no);
    } else {
      slots[i] = RegressionVerdict(preds[j], known.at(pending_target[j].template_id).vector,
                                   decision.threshold, events[i].line_no);
    }
  }
  std::vector<Verdict> verdicts;
  for (auto& v : slots) {
    if (v) verdicts.push_back(*v);
  }
  return verdicts;
}

}  // namespace logad
