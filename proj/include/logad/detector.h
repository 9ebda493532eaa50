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

#ifndef LOGAD_DETECTOR_H_
#define LOGAD_DETECTOR_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "logad/embedding.h"
#include "logad/nn.h"
#include "logad/parser.h"

namespace logad {

struct WindowConfig {
  std::size_t delta = 10;
  std::size_t stride = 1;
};

// One parsed log event with the vector of its template.
struct StreamEvent {
  std::int64_t line_no = 0;
  TemplateId template_id = 0;
  EmbeddingVector embedding;
};

struct EventWindow {
  std::vector<double> inputs;  // delta x d, row-major
  EmbeddingVector target_embedding;
  TemplateId target_class = 0;
  std::size_t target_index = 0;  // position of the target in the event list
};

// One window per start index (stepping by stride); the target is the event
// right after the window. Throws kTooFewEvents when fewer than delta+1 events.
std::vector<EventWindow> MakeWindows(std::span<const StreamEvent> events,
                                     const WindowConfig& config);

struct DecisionParams {
  nn::Objective mode = nn::Objective::kClassification;
  std::size_t top_k = 3;
  double max_distance = 0.3;
  double q = 99.0;
  double threshold = 0.0;  // regression, set by calibration

  void Validate(std::size_t num_classes) const;
};

enum class Label { kNormal, kAnomaly };
enum class Reason { kNone, kTopKMiss, kOverThreshold, kNoTemplateMatch };

std::string_view LabelName(Label label);
Label ParseLabel(std::string_view name);
std::string_view ReasonName(Reason reason);

struct Verdict {
  std::int64_t line_no = 0;
  Label label = Label::kNormal;
  double score = 0.0;  // target rank, squared error, or match distance
  Reason reason = Reason::kNone;
};

// "line_no<TAB>label<TAB>score<TAB>reason"; reason is "-" for normal verdicts.
std::string FormatVerdict(const Verdict& verdict);
Verdict ParseVerdict(std::string_view record);

struct DetectorModel {
  nn::ModelConfig config;
  nn::BiLstmParams params;
  std::vector<TemplateId> class_ids;  // class index -> template id, ascending
  std::vector<TemplateId> known_ids;  // templates present at training time

  std::optional<std::size_t> ClassIndex(TemplateId id) const;
};

// Fresh model. For classification, class_ids become the output classes.
DetectorModel InitModel(nn::ModelConfig config, std::vector<TemplateId> known_ids,
                        std::uint64_t seed);

struct TrainConfig {
  std::size_t epochs = 60;
  double learning_rate = 1e-3;
  std::size_t batch_size = 32;
  std::uint64_t seed = 1;
  nn::OptimizerKind optimizer = nn::OptimizerKind::kAdam;
  double clip_norm = 0.0;  // 0 disables clipping
};

struct TrainResult {
  DetectorModel model;
  std::vector<double> loss_curve;  // mean loss per epoch
};

// Mini-batch training with per-epoch seeded shuffling. Throws
// kEmptyTrainingSet, kDivergenceDetected.
// `on_epoch`, when set, sees the model after every epoch.
using EpochCallback = std::function<void(std::size_t epoch, const DetectorModel& model)>;
TrainResult Train(DetectorModel model, std::span<const EventWindow> windows,
                  const TrainConfig& config, const EpochCallback& on_epoch = nullptr);

// Example views over windows, with classification targets mapped to class
// indices. The windows must outlive the result.
std::vector<nn::Example> ToExamples(const DetectorModel& model,
                                    std::span<const EventWindow> windows);

// Mean configured loss over all windows.
double MeanLoss(const DetectorModel& model, std::span<const EventWindow> windows);

// Model outputs for every window, batched.
std::vector<std::vector<double>> Predict(const DetectorModel& model,
                                         std::span<const EventWindow> windows);

// Nearest-rank percentile: ascending order, 1-based index ceil(q * N / 100).
double NearestRankPercentile(std::vector<double> values, double q);

// q-th percentile of per-window squared errors (mean over the embedding).
double CalibrateRegressionThreshold(const DetectorModel& model,
                                    std::span<const EventWindow> windows, double q);

struct ResolvedTarget {
  TemplateId template_id = 0;
  double distance = 0.0;
};
struct DirectAnomaly {
  double distance = 0.0;  // distance to the closest known template
};
using Resolution = std::variant<ResolvedTarget, DirectAnomaly>;

// Known ids map to themselves; others go to their nearest known template, or
// DirectAnomaly when farther than max_distance.
Resolution ResolveTarget(TemplateId target, std::span<const double> embedding,
                         const EmbeddingStore& known, double max_distance);

// 1-based rank of `target` among classes by descending probability; equal
// probabilities are ordered by ascending template id.
std::size_t TargetRank(std::span<const double> probabilities,
                       std::span<const TemplateId> class_ids, TemplateId target);

Verdict DetectClassification(const DetectorModel& model, const EventWindow& window,
                             TemplateId resolved_target, std::size_t top_k,
                             std::int64_t line_no);

// Anomaly iff squared error > threshold.
Verdict DetectRegression(const DetectorModel& model, const EventWindow& window,
                         std::span<const double> target_embedding, double threshold,
                         std::int64_t line_no);

// `known` holds the training-time templates. One verdict per event after the first delta. Events that match no known
// template are flagged directly and left out of later windows; an event whose
// retained context is shorter than delta gets no verdict.
std::vector<Verdict> DetectStream(const DetectorModel& model,
                                  std::span<const StreamEvent> events,
                                  const DecisionParams& decision,
                                  const EmbeddingStore& known);

}  // namespace logad

#endif  // LOGAD_DETECTOR_H_
