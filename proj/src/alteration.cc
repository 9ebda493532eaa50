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

#include "logad/alteration.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>

#include "json.hpp"
#include "logad/error.h"
#include "logad/io_util.h"
#include "logad/random.h"

namespace logad {
namespace {

// k distinct indices from [0, n), ascending.
std::vector<std::size_t> SampleIndices(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(idx[i], idx[i + rng.index(n - i)]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

const std::string& DrawToken(std::span<const std::string> vocabulary, Rng& rng) {
  return vocabulary[rng.index(vocabulary.size())];
}

std::vector<std::size_t> Identity(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

std::string_view AlterationKindName(AlterationKind kind) {
  switch (kind) {
    case AlterationKind::kSemDelete: return "SemDelete";
    case AlterationKind::kSemSwap: return "SemSwap";
    case AlterationKind::kSemImpute: return "SemImpute";
    case AlterationKind::kSeqDelete: return "SeqDelete";
    case AlterationKind::kSeqSwap: return "SeqSwap";
    case AlterationKind::kSeqImpute: return "SeqImpute";
  }
  return "?";
}

AlterationKind ParseAlterationKind(std::string_view name) {
  for (AlterationKind k : {AlterationKind::kSemDelete, AlterationKind::kSemSwap,
                           AlterationKind::kSemImpute, AlterationKind::kSeqDelete,
                           AlterationKind::kSeqSwap, AlterationKind::kSeqImpute}) {
    if (AlterationKindName(k) == name) return k;
  }
  throw Error(ErrorCode::kConfigError, "unknown alteration kind '" + std::string(name) + "'");
}

bool IsSemantic(AlterationKind kind) {
  return kind == AlterationKind::kSemDelete || kind == AlterationKind::kSemSwap ||
         kind == AlterationKind::kSemImpute;
}

std::vector<std::string> AlterMessage(std::span<const std::string> tokens,
                                      const AlterationConfig& config,
                                      std::span<const std::string> vocabulary) {
  if (!IsSemantic(config.kind)) {
    throw Error(ErrorCode::kInvalidArgument, "AlterMessage needs a semantic kind");
  }
  if (tokens.empty()) throw Error(ErrorCode::kInvalidArgument, "empty message");
  const std::size_t n = tokens.size();
  const std::size_t l = config.intensity;
  std::vector<std::string> out(tokens.begin(), tokens.end());
  if (l == 0) return out;
  Rng rng(config.seed);
  switch (config.kind) {
    case AlterationKind::kSemDelete: {
      if (l > n) throw Error(ErrorCode::kIntensityTooLarge, "cannot delete more tokens than exist");
      const std::vector<std::size_t> drop = SampleIndices(n, l, rng);
      std::vector<std::string> kept;
      kept.reserve(n - l);
      std::size_t d = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (d < drop.size() && drop[d] == i) {
          ++d;
          continue;
        }
        kept.push_back(out[i]);
      }
      return kept;
    }
    case AlterationKind::kSemSwap: {
      if (l > n) throw Error(ErrorCode::kIntensityTooLarge, "cannot swap more tokens than exist");
      for (std::size_t pos : SampleIndices(n, l, rng)) {
        const bool has_alternative = std::any_of(vocabulary.begin(), vocabulary.end(),
                                                 [&](const std::string& v) { return v != out[pos]; });
        if (!has_alternative) {
          throw Error(ErrorCode::kInvalidArgument, "vocabulary has no replacement token");
        }
        std::string replacement;
        do {
          replacement = DrawToken(vocabulary, rng);
        } while (replacement == out[pos]);
        out[pos] = std::move(replacement);
      }
      return out;
    }
    case AlterationKind::kSemImpute: {
      if (vocabulary.empty()) throw Error(ErrorCode::kInvalidArgument, "empty vocabulary");
      const std::size_t at = rng.index(n + 1);
      std::vector<std::string> inserted;
      for (std::size_t i = 0; i < l; ++i) inserted.push_back(DrawToken(vocabulary, rng));
      out.insert(out.begin() + static_cast<std::ptrdiff_t>(at), inserted.begin(), inserted.end());
      return out;
    }
    default:
      break;
  }
  return out;
}

SequenceEdit PlanSequenceAlteration(std::size_t length, const AlterationConfig& config) {
  if (IsSemantic(config.kind)) {
    throw Error(ErrorCode::kInvalidArgument, "PlanSequenceAlteration needs a sequence kind");
  }
  if (length < 2) throw Error(ErrorCode::kInvalidArgument, "sequence needs at least 2 events");
  const std::size_t l = config.intensity;
  SequenceEdit edit{Identity(length), std::vector<bool>(length, false)};
  if (l == 0) return edit;
  Rng rng(config.seed);
  switch (config.kind) {
    case AlterationKind::kSeqDelete: {
      if (l > length) throw Error(ErrorCode::kIntensityTooLarge, "cannot delete more events than exist");
      const std::vector<std::size_t> drop = SampleIndices(length, l, rng);
      SequenceEdit out;
      std::size_t d = 0;
      bool after_gap = false;
      for (std::size_t i = 0; i < length; ++i) {
        if (d < drop.size() && drop[d] == i) {
          ++d;
          after_gap = true;
          continue;
        }
        out.source.push_back(i);
        out.altered.push_back(after_gap);
        after_gap = false;
      }
      return out;
    }
    case AlterationKind::kSeqSwap: {
      const std::size_t k = config.block_len;
      if (k == 0) return edit;
      // Block i+1..i+k must fit and leave room for j < i.
      if (length < k + 2) {
        throw Error(ErrorCode::kBlockOutOfRange, "block of " + std::to_string(k) +
                                                     " does not fit a sequence of " +
                                                     std::to_string(length));
      }
      for (std::size_t rep = 0; rep < l; ++rep) {
        const std::size_t i = 1 + rng.index(length - 1 - k);
        const std::size_t j = rng.index(i);
        const auto first = static_cast<std::ptrdiff_t>(i + 1);
        const auto last = static_cast<std::ptrdiff_t>(i + 1 + k);
        const auto dest = static_cast<std::ptrdiff_t>(j);
        std::vector<bool> marks = edit.altered;
        for (std::size_t b = i + 1; b <= i + k; ++b) marks[b] = true;
        std::rotate(edit.source.begin() + dest, edit.source.begin() + first,
                    edit.source.begin() + last);
        std::vector<bool> rotated(marks.begin(), marks.end());
        std::rotate(rotated.begin() + dest, rotated.begin() + first, rotated.begin() + last);
        edit.altered = std::move(rotated);
      }
      return edit;
    }
    case AlterationKind::kSeqImpute: {
      const std::size_t i = rng.index(length);
      SequenceEdit out;
      for (std::size_t p = 0; p < length; ++p) {
        out.source.push_back(p);
        out.altered.push_back(false);
        if (p == i) {
          for (std::size_t r = 0; r < l; ++r) {
            out.source.push_back(p);
            out.altered.push_back(true);
          }
        }
      }
      return out;
    }
    default:
      break;
  }
  return edit;
}

std::vector<TemplateId> AlterSequence(std::span<const TemplateId> sequence,
                                      const AlterationConfig& config) {
  return ApplySequenceEdit(sequence, PlanSequenceAlteration(sequence.size(), config));
}

std::vector<std::string> BuildVocabulary(std::span<const std::string> lines) {
  std::set<std::string> vocab;
  for (const std::string& line : lines) {
    for (std::string& token : SplitWhitespace(line)) {
      const bool digit_free = std::none_of(token.begin(), token.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
      });
      if (digit_free) vocab.insert(std::move(token));
    }
  }
  return {vocab.begin(), vocab.end()};
}

std::string_view SeverityName(Severity severity) {
  return severity == Severity::kSimilar ? "similar" : "different";
}

Severity ParseSeverity(std::string_view name) {
  if (name == "similar") return Severity::kSimilar;
  if (name == "different") return Severity::kDifferent;
  throw Error(ErrorCode::kConfigError, "unknown severity '" + std::string(name) + "'");
}

std::pair<double, double> AlteredCorpusSpec::Range() const {
  if (intensity_range) return *intensity_range;
  return severity == Severity::kSimilar ? std::pair{5.0, 20.0} : std::pair{5.0, 100.0};
}

std::string FormatProvenance(const ProvenanceRecord& r) {
  std::string params = "{\"l\":" + std::to_string(r.intensity) +
                       ",\"pct\":" + FormatDouble17(r.intensity_percent) + "}";
  std::string original = r.original;
  std::replace(original.begin(), original.end(), '\t', ' ');
  return std::to_string(r.index) + "\t" + std::string(AlterationKindName(r.kind)) + "\t" +
         params + "\t" + original;
}

SynthesizedCorpus SynthesizeDatasetB(std::span<const std::string> corpus_a,
                                     const AlteredCorpusSpec& spec) {
  if (corpus_a.empty()) throw Error(ErrorCode::kEmptyInput, "corpus A is empty");
  if (!(spec.fraction_percent >= 0.0 && spec.fraction_percent <= 100.0)) {
    throw Error(ErrorCode::kConfigError, "fraction p must be in [0, 100]");
  }
  const auto [lo, hi] = spec.Range();
  if (lo < 0.0 || hi > 100.0 || lo > hi) {
    throw Error(ErrorCode::kConfigError, "intensity range must lie within [0, 100]");
  }
  const std::vector<std::string> vocabulary = BuildVocabulary(corpus_a);
  SynthesizedCorpus out;
  out.lines.assign(corpus_a.begin(), corpus_a.end());
  Rng rng(spec.seed);
  const auto count = static_cast<std::size_t>(
      std::llround(spec.fraction_percent * static_cast<double>(corpus_a.size()) / 100.0));
  constexpr AlterationKind kKinds[] = {AlterationKind::kSemDelete, AlterationKind::kSemSwap,
                                       AlterationKind::kSemImpute};
  for (std::size_t index : SampleIndices(corpus_a.size(), count, rng)) {
    Rng line_rng(Rng::Mix(spec.seed ^ Rng::Mix(index + 1)));
    const std::vector<std::string> tokens = SplitWhitespace(corpus_a[index]);
    if (tokens.empty()) continue;
    const AlterationKind kind = kKinds[line_rng.index(3)];
    const double pct = (lo == hi) ? lo : line_rng.uniform(lo, hi);
    const double n = static_cast<double>(tokens.size());
    std::size_t l = pct == 0.0 ? 0
                               : static_cast<std::size_t>(std::max<long long>(
                                     1, std::llround(pct * n / 100.0)));
    if (kind == AlterationKind::kSemDelete) l = std::min(l, tokens.size() - 1);
    if (kind == AlterationKind::kSemSwap) l = std::min(l, tokens.size());
    const AlterationConfig cfg{kind, l, 1, line_rng.next()};
    out.lines[index] = JoinTokens(AlterMessage(tokens, cfg, vocabulary));
    out.provenance.push_back({index, kind, l, pct, corpus_a[index]});
  }
  return out;
}

}  // namespace logad
