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

#ifndef LOGAD_TRANSFER_H_
#define LOGAD_TRANSFER_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "logad/corpus.h"
#include "logad/detector.h"
#include "logad/embedding.h"
#include "logad/metrics.h"
#include "logad/pipeline.h"

namespace logad {

// Every template of store B paired with its nearest template of store A by
// cosine distance (lowest id on ties).
struct TemplateMapping {
  std::map<TemplateId, MatchResult> entries;

  double MeanDistance() const;
  double MaxDistance() const;
};

// Throws kEmptyStore, kDimMismatch.
TemplateMapping MapTemplates(const EmbeddingStore& store_a, const EmbeddingStore& store_b);

struct FewShotResult {
  DetectorModel model;
  double loss_before = 0.0;
  double loss_after = 0.0;
  std::vector<double> loss_curve;  // head loss after each epoch
};

// Fine-tunes on the head windows for config.epochs epochs and returns the
// parameters with the lowest head loss seen, the starting point included, so
// loss_after <= loss_before. Zero epochs return the model unchanged.
FewShotResult FewShotFinetune(const DetectorModel& model, std::span<const EventWindow> head,
                              const TrainConfig& config);

struct TransferConfig {
  PipelineSettings settings;  // settings.train.epochs is the pretraining length
  double few_shot_fraction = 0.1;
  std::size_t few_shot_epochs = 5;
  // 0 uses a tenth of settings.train.learning_rate: a fresh optimizer at the
  // pretraining rate knocks a converged model off its optimum.
  double few_shot_learning_rate = 0.0;
  // Tail templates mapped farther than this from A are scored as unmatched.
  double map_radius = 0.6;
  std::vector<nn::Objective> objectives = {nn::Objective::kClassification,
                                           nn::Objective::kRegression};

  void Validate() const;
};

struct TransferCell {
  nn::Objective objective = nn::Objective::kClassification;
  Metrics zero_shot;
  Metrics fine_tuned;
  double head_loss_before = 0.0;
  double head_loss_after = 0.0;
  double threshold_zero_shot = 0.0;  // regression only
  double threshold_fine_tuned = 0.0;
  std::vector<double> pretrain_loss_curve;
  std::vector<double> finetune_loss_curve;
};

struct TransferReport {
  std::size_t a_events = 0;
  std::size_t b_events = 0;
  std::size_t head_events = 0;
  std::size_t tail_events = 0;
  std::size_t a_templates = 0;
  std::size_t b_templates = 0;
  std::size_t b_novel_templates = 0;  // B templates absent from A
  double mapping_mean_distance = 0.0;
  double mapping_max_distance = 0.0;
  std::vector<TransferCell> cells;
  std::map<nn::Objective, std::vector<Verdict>> zero_shot_verdicts;
  std::map<nn::Objective, std::vector<Verdict>> fine_tuned_verdicts;
};

// Pretrains on A, maps B's templates onto A, fine-tunes on the chronological
// head of B, and scores zero-shot and fine-tuned detection on the tail. Window
// inputs carry B's vectors; every B target is scored as its mapped A template
// (class or vector). After fine-tuning the regression threshold is
// recalibrated on A's windows.
TransferReport RunTransferExperiment(std::span<const std::string> corpus_a,
                                     const LabeledCorpus& corpus_b, const TransferConfig& config);

}  // namespace logad

#endif  // LOGAD_TRANSFER_H_
