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

#ifndef LOGAD_ALTERATION_H_
#define LOGAD_ALTERATION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "logad/parser.h"

namespace logad {

enum class AlterationKind { kSemDelete, kSemSwap, kSemImpute, kSeqDelete, kSeqSwap, kSeqImpute };

std::string_view AlterationKindName(AlterationKind kind);
AlterationKind ParseAlterationKind(std::string_view name);
bool IsSemantic(AlterationKind kind);

struct AlterationConfig {
  AlterationKind kind = AlterationKind::kSemSwap;
  std::size_t intensity = 1;  // l; for SeqSwap, the number of block moves
  std::size_t block_len = 1;  // SeqSwap only
  std::uint64_t seed = 0;
};

// Token-level corruption of one message. SemDelete removes l tokens, SemSwap
// replaces l positions with different vocabulary tokens, SemImpute inserts l
// vocabulary tokens at one random position. Throws kIntensityTooLarge,
// kInvalidArgument.
std::vector<std::string> AlterMessage(std::span<const std::string> tokens,
                                      const AlterationConfig& config,
                                      std::span<const std::string> vocabulary);

// Output position i takes input element source[i]; altered[i] marks events
// whose position or neighbourhood was changed.
struct SequenceEdit {
  std::vector<std::size_t> source;
  std::vector<bool> altered;
};

// Sequence-level corruption plan for a sequence of `length` events.
// SeqDelete drops l events; SeqSwap moves the block_len events after a random
// index i to a random index j < i (l times); SeqImpute repeats the event at a
// random index l extra times. Throws kIntensityTooLarge, kBlockOutOfRange.
SequenceEdit PlanSequenceAlteration(std::size_t length, const AlterationConfig& config);

std::vector<TemplateId> AlterSequence(std::span<const TemplateId> sequence,
                                      const AlterationConfig& config);

template <typename T>
std::vector<T> ApplySequenceEdit(std::span<const T> items, const SequenceEdit& edit) {
  std::vector<T> out;
  out.reserve(edit.source.size());
  for (std::size_t s : edit.source) out.push_back(items[s]);
  return out;
}

// Distinct digit-free tokens of the corpus, sorted.
std::vector<std::string> BuildVocabulary(std::span<const std::string> lines);

enum class Severity { kSimilar, kDifferent };

std::string_view SeverityName(Severity severity);
Severity ParseSeverity(std::string_view name);

struct AlteredCorpusSpec {
  double fraction_percent = 15.0;  // p
  Severity severity = Severity::kDifferent;
  // Percent of a message's length; defaults to 5-20 (similar) or 5-100 (different).
  std::optional<std::pair<double, double>> intensity_range;
  std::uint64_t seed = 0;

  std::pair<double, double> Range() const;
};

struct ProvenanceRecord {
  std::size_t index = 0;
  AlterationKind kind = AlterationKind::kSemSwap;
  std::size_t intensity = 0;
  double intensity_percent = 0.0;
  std::string original;
};

// "index<TAB>kind<TAB>params-json<TAB>original".
std::string FormatProvenance(const ProvenanceRecord& record);

struct SynthesizedCorpus {
  std::vector<std::string> lines;
  std::vector<ProvenanceRecord> provenance;  // ascending index
};

// Samples round(p * N / 100) lines uniformly and alters each with a random
// semantic kind; l = max(1, round(pct * n / 100)) with pct drawn from the
// intensity range (pct == 0 gives l = 0). Deletions keep at least one token.
SynthesizedCorpus SynthesizeDatasetB(std::span<const std::string> corpus_a,
                                     const AlteredCorpusSpec& spec);

}  // namespace logad

#endif  // LOGAD_ALTERATION_H_
