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

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include "logad/error.h"
#include "logad/io_util.h"
#include "logad/random.h"

namespace logad {
namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

const std::vector<std::string> kMessage{"instance", "spawned", "on", "host", "alpha"};
const std::vector<std::string> kVocab{"alpha", "beta", "gamma", "host", "delta", "spawned"};

bool IsSubsequence(const std::vector<std::string>& sub, const std::vector<std::string>& full) {
  std::size_t j = 0;
  for (const std::string& t : full) {
    if (j < sub.size() && sub[j] == t) ++j;
  }
  return j == sub.size();
}

constexpr AlterationKind kSemantic[] = {AlterationKind::kSemDelete, AlterationKind::kSemSwap,
                                        AlterationKind::kSemImpute};
constexpr AlterationKind kSequence[] = {AlterationKind::kSeqDelete, AlterationKind::kSeqSwap,
                                        AlterationKind::kSeqImpute};

TEST(AlterMessage, ZeroIntensityIsIdentity) {
  for (AlterationKind kind : kSemantic) {
    EXPECT_EQ(AlterMessage(kMessage, {kind, 0, 1, 5}, kVocab), kMessage);
  }
}

TEST(AlterMessage, DeleteOneKeepsSubsequence) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto out = AlterMessage(kMessage, {AlterationKind::kSemDelete, 1, 1, seed}, kVocab);
    EXPECT_EQ(out.size(), 4u);
    EXPECT_TRUE(IsSubsequence(out, kMessage));
  }
}

TEST(AlterMessage, SwapChangesExactlyLPositions) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto out = AlterMessage(kMessage, {AlterationKind::kSemSwap, 2, 1, seed}, kVocab);
    ASSERT_EQ(out.size(), kMessage.size());
    std::size_t diff = 0;
    for (std::size_t i = 0; i < out.size(); ++i) diff += out[i] != kMessage[i];
    EXPECT_EQ(diff, 2u);
  }
}

TEST(AlterMessage, LengthLaws) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t l = rng.index(kMessage.size() + 1);
    const std::uint64_t seed = rng.next();
    EXPECT_EQ(AlterMessage(kMessage, {AlterationKind::kSemDelete, l, 1, seed}, kVocab).size(),
              kMessage.size() - l);
    EXPECT_EQ(AlterMessage(kMessage, {AlterationKind::kSemSwap, l, 1, seed}, kVocab).size(),
              kMessage.size());
    const auto imputed = AlterMessage(kMessage, {AlterationKind::kSemImpute, l, 1, seed}, kVocab);
    EXPECT_EQ(imputed.size(), kMessage.size() + l);
    EXPECT_TRUE(IsSubsequence(kMessage, imputed));
  }
}

TEST(AlterMessage, DeleteTokensComeFromOriginal) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (const std::string& t : AlterMessage(kMessage, {AlterationKind::kSemDelete, 3, 1, seed}, kVocab)) {
      EXPECT_NE(std::find(kMessage.begin(), kMessage.end(), t), kMessage.end());
    }
  }
}

TEST(AlterMessage, Errors) {
  EXPECT_EQ(CodeOf([] { AlterMessage(kMessage, {AlterationKind::kSemDelete, 6, 1, 1}, kVocab); }),
            ErrorCode::kIntensityTooLarge);
  EXPECT_EQ(CodeOf([] { AlterMessage(kMessage, {AlterationKind::kSemSwap, 6, 1, 1}, kVocab); }),
            ErrorCode::kIntensityTooLarge);
  EXPECT_EQ(CodeOf([] { AlterMessage(kMessage, {AlterationKind::kSeqSwap, 1, 1, 1}, kVocab); }),
            ErrorCode::kInvalidArgument);
}

TEST(AlterMessage, Seeded) {
  for (AlterationKind kind : kSemantic) {
    EXPECT_EQ(AlterMessage(kMessage, {kind, 2, 1, 9}, kVocab),
              AlterMessage(kMessage, {kind, 2, 1, 9}, kVocab));
  }
}

std::vector<TemplateId> Sequence(std::size_t m) {
  std::vector<TemplateId> s(m);
  for (std::size_t i = 0; i < m; ++i) s[i] = static_cast<TemplateId>(i * 7 % 11);
  return s;
}

TEST(AlterSequence, ZeroIntensityIsIdentity) {
  for (AlterationKind kind : kSequence) {
    EXPECT_EQ(AlterSequence(Sequence(12), {kind, 0, 1, 3}), Sequence(12));
  }
}

TEST(AlterSequence, ImputeRepeatsOneEvent) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    std::vector<TemplateId> seq(10);
    for (std::size_t i = 0; i < seq.size(); ++i) seq[i] = static_cast<TemplateId>(i);
    const auto out = AlterSequence(seq, {AlterationKind::kSeqImpute, 3, 1, seed});
    ASSERT_EQ(out.size(), 13u);
    std::size_t longest = 1;
    std::size_t run = 1;
    for (std::size_t i = 1; i < out.size(); ++i) {
      run = out[i] == out[i - 1] ? run + 1 : 1;
      longest = std::max(longest, run);
    }
    EXPECT_GE(longest, 4u);
  }
}

TEST(AlterSequence, SwapPreservesMultiset) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 5 + rng.index(30);
    const std::size_t k = 1 + rng.index(3);
    const auto seq = Sequence(m);
    auto out = AlterSequence(seq, {AlterationKind::kSeqSwap, 1 + rng.index(3), k, rng.next()});
    auto sorted_in = seq;
    std::sort(sorted_in.begin(), sorted_in.end());
    std::sort(out.begin(), out.end());
    EXPECT_EQ(out, sorted_in);
  }
}

TEST(AlterSequence, SwapMovesBlockEarlier) {
  std::vector<TemplateId> seq(8);
  for (std::size_t i = 0; i < seq.size(); ++i) seq[i] = static_cast<TemplateId>(i);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const SequenceEdit edit = PlanSequenceAlteration(8, {AlterationKind::kSeqSwap, 1, 2, seed});
    const auto out = ApplySequenceEdit(std::span<const TemplateId>(seq), edit);
    EXPECT_NE(out, seq);
    std::size_t marked = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (edit.altered[i]) {
        ++marked;
        EXPECT_LT(i, static_cast<std::size_t>(out[i]));
      }
    }
    EXPECT_EQ(marked, 2u);
  }
}

TEST(AlterSequence, DeleteAllButOne) {
  const auto seq = Sequence(9);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto out = AlterSequence(seq, {AlterationKind::kSeqDelete, 8, 1, seed});
    ASSERT_EQ(out.size(), 1u);
    EXPECT_NE(std::find(seq.begin(), seq.end(), out[0]), seq.end());
  }
}

TEST(AlterSequence, LengthLaws) {
  const auto seq = Sequence(20);
  for (std::size_t l = 0; l < 6; ++l) {
    EXPECT_EQ(AlterSequence(seq, {AlterationKind::kSeqDelete, l, 1, l}).size(), 20 - l);
    EXPECT_EQ(AlterSequence(seq, {AlterationKind::kSeqSwap, l, 2, l}).size(), 20u);
    EXPECT_EQ(AlterSequence(seq, {AlterationKind::kSeqImpute, l, 1, l}).size(), 20 + l);
  }
}

TEST(AlterSequence, Errors) {
  EXPECT_EQ(CodeOf([] { AlterSequence(Sequence(5), {AlterationKind::kSeqDelete, 6, 1, 1}); }),
            ErrorCode::kIntensityTooLarge);
  EXPECT_EQ(CodeOf([] { AlterSequence(Sequence(5), {AlterationKind::kSeqSwap, 1, 4, 1}); }),
            ErrorCode::kBlockOutOfRange);
}

TEST(Names, RoundTrip) {
  for (AlterationKind kind : kSemantic) EXPECT_EQ(ParseAlterationKind(AlterationKindName(kind)), kind);
  for (AlterationKind kind : kSequence) EXPECT_EQ(ParseAlterationKind(AlterationKindName(kind)), kind);
  EXPECT_EQ(ParseSeverity("similar"), Severity::kSimilar);
  EXPECT_EQ(CodeOf([] { ParseSeverity("harsh"); }), ErrorCode::kConfigError);
}

std::vector<std::string> CorpusA(std::size_t n) {
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < n; ++i) {
    lines.push_back("node " + std::to_string(i % 17) + " reported state ok after retry");
  }
  return lines;
}

TEST(DatasetB, ZeroFractionIsIdentity) {
  const auto a = CorpusA(200);
  AlteredCorpusSpec spec;
  spec.fraction_percent = 0;
  const auto b = SynthesizeDatasetB(a, spec);
  EXPECT_EQ(b.lines, a);
  EXPECT_TRUE(b.provenance.empty());
}

TEST(DatasetB, ZeroIntensityIsIdentity) {
  const auto a = CorpusA(200);
  AlteredCorpusSpec spec;
  spec.fraction_percent = 100;
  spec.intensity_range = std::pair{0.0, 0.0};
  EXPECT_EQ(SynthesizeDatasetB(a, spec).lines, a);
}

TEST(DatasetB, FractionCountAndSeed) {
  const auto a = CorpusA(1000);
  AlteredCorpusSpec spec;
  spec.fraction_percent = 15;
  spec.seed = 42;
  const auto b = SynthesizeDatasetB(a, spec);
  EXPECT_EQ(b.provenance.size(), 150u);
  const auto again = SynthesizeDatasetB(a, spec);
  EXPECT_EQ(again.lines, b.lines);
  std::size_t changed = 0;
  for (std::size_t i = 0; i < a.size(); ++i) changed += a[i] != b.lines[i];
  EXPECT_LE(changed, 150u);
  for (std::size_t i = 1; i < b.provenance.size(); ++i) {
    EXPECT_LT(b.provenance[i - 1].index, b.provenance[i].index);
  }
  for (const auto& p : b.provenance) {
    EXPECT_EQ(p.original, a[p.index]);
    EXPECT_GE(p.intensity_percent, 5.0);
    EXPECT_LE(p.intensity_percent, 100.0);
  }
}

TEST(DatasetB, SimilarRangeIsMild) {
  const auto a = CorpusA(500);
  AlteredCorpusSpec spec;
  spec.severity = Severity::kSimilar;
  spec.fraction_percent = 50;
  for (const auto& p : SynthesizeDatasetB(a, spec).provenance) {
    EXPECT_GE(p.intensity_percent, 5.0);
    EXPECT_LE(p.intensity_percent, 20.0);
    EXPECT_LE(p.intensity, 2u);  // 8 tokens at <= 20%
  }
}

TEST(DatasetB, ProvenanceRecordFormat) {
  const ProvenanceRecord r{3, AlterationKind::kSemSwap, 2, 25.0, "a\tb"};
  const auto fields = SplitTabs(FormatProvenance(r));
  ASSERT_EQ(fields.size(), 4u);
  EXPECT_EQ(fields[0], "3");
  EXPECT_EQ(fields[1], "SemSwap");
  EXPECT_EQ(fields[3], "a b");
}

TEST(Vocabulary, DigitFreeSorted) {
  const std::vector<std::string> lines{"b a 12", "c x1 a"};
  EXPECT_EQ(BuildVocabulary(lines), (std::vector<std::string>{"a", "b", "c"}));
}

}  // namespace
}  // namespace logad
