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

#ifndef LOGAD_PIPELINE_H_
#define LOGAD_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "logad/corpus.h"
#include "logad/detector.h"
#include "logad/embedding.h"
#include "logad/metrics.h"
#include "logad/parser.h"

namespace logad {

struct EmbeddingSource {
  enum class Kind { kFallback, kFile };
  Kind kind = Kind::kFallback;
  std::size_t dim = 32;          // fallback only
  std::uint64_t seed = 0;        // fallback only
  std::optional<EmbeddingStore> file_store;

  std::size_t Dim() const { return kind == Kind::kFile ? file_store->dim() : dim; }
};

// Everything needed to go from log lines to verdicts.
struct PipelineSettings {
  ParserConfig parser;
  EmbeddingSource embedding;
  std::size_t hidden_size = 128;
  WindowConfig window;
  TrainConfig train;
  DecisionParams decision;
  std::uint64_t init_seed = 1;
};

// Line numbers start at 1 and follow corpus order.
std::vector<RawLogLine> ToRawLines(std::span<const std::string> lines);

// Distinct template ids in order of first appearance.
std::vector<TemplateId> DistinctIds(std::span<const ParsedEvent> events);

// Vectors for `ids`. Entries already in `reuse` are copied from it; the rest
// come from the source (fallback: the parser's current template tokens).
EmbeddingStore BuildStore(const ParserState& parser, std::span<const TemplateId> ids,
                          const EmbeddingSource& source, const EmbeddingStore* reuse = nullptr);

std::vector<StreamEvent> ToStream(std::span<const ParsedEvent> events, const EmbeddingStore& store);

struct TrainedDetector {
  ParserState parser;     // state after the training corpus
  EmbeddingStore known;   // training-time templates
  DetectorModel model;
  DecisionParams decision;
  std::vector<double> loss_curve;
  std::vector<EventWindow> windows;  // training windows
};

// Parse, embed, window, train, and (regression) calibrate on normal lines.
TrainedDetector TrainDetector(std::span<const std::string> train_lines, nn::Objective objective,
                              const PipelineSettings& settings);

struct DetectionRun {
  std::vector<ParsedEvent> events;
  std::vector<Verdict> verdicts;
  std::size_t novel_templates = 0;
};

// Parses `lines` with a copy of the trained parser and detects. `known`
// overrides the detector's training-time store when given.
DetectionRun DetectLines(const TrainedDetector& detector, std::span<const std::string> lines,
                         const EmbeddingSource& source, const EmbeddingStore* known = nullptr);

// Joins verdicts with per-line truth (line_no is 1-based into `truth`).
std::vector<LabeledVerdict> LabelVerdicts(std::span<const Verdict> verdicts,
                                          std::span<const Label> truth);

// A trained model plus what detection needs to use it, stored as a
// checkpoint whose metadata carries the rest.
struct SavedDetector {
  DetectorModel model;
  DecisionParams decision;
  WindowConfig window;
  std::string embedding_model;      // "fallback-hash-v1" or the file's model name
  std::uint64_t embedding_seed = 0;  // fallback only
  std::string parser_hash;
};

void SaveDetector(const SavedDetector& detector, const std::filesystem::path& path);
SavedDetector LoadDetector(const std::filesystem::path& path);

}  // namespace logad

#endif  // LOGAD_PIPELINE_H_
