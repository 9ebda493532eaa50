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

#include <gtest/gtest.h>

#include <filesystem>

#include "logad/alteration.h"
#include "logad/corpus.h"
#include "logad/error.h"
#include "logad/io_util.h"
#include "logad/random.h"

namespace logad {
namespace {

PipelineSettings SmallSettings() {
  PipelineSettings s;
  s.embedding.dim = 16;
  s.embedding.seed = 3;
  s.hidden_size = 12;
  s.window = {5, 1};
  s.train.epochs = 3;
  s.train.learning_rate = 0.01;
  s.train.seed = 4;
  s.init_seed = 5;
  return s;
}

LabeledCorpus Corpus(std::size_t events, double anomaly_rate, std::uint64_t seed) {
  SyntheticConfig c;
  c.num_templates = 6;
  c.num_events = events;
  c.anomaly_rate = anomaly_rate;
  c.seed = seed;
  return GenerateSyntheticCorpus(c);
}

TEST(ToRawLines, NumbersFromOne) {
  const std::vector<std::string> lines{"a", "b"};
  const auto raw = ToRawLines(lines);
  EXPECT_EQ(raw[0].line_no, 1);
  EXPECT_EQ(raw[1].line_no, 2);
  EXPECT_EQ(raw[1].content, "b");
}

TEST(DistinctIds, FirstAppearanceOrder) {
  std::vector<ParsedEvent> events(5);
  const TemplateId ids[] = {4, 1, 4, 0, 1};
  for (int i = 0; i < 5; ++i) events[i].template_id = ids[i];
  EXPECT_EQ(DistinctIds(events), (std::vector<TemplateId>{4, 1, 0}));
}

TEST(BuildStore, ReusesKnownVectors) {
  ParserState parser;
  parser.ParseStream(ToRawLines(std::vector<std::string>{"a b c", "d e"}));
  EmbeddingSource source;
  source.dim = 8;
  const std::vector<TemplateId> ids{0, 1};
  EmbeddingStore reuse(8, "fallback-hash-v1");
  reuse.Insert(0, "custom", std::vector<double>(8, 0.5));
  const EmbeddingStore store = BuildStore(parser, ids, source, &reuse);
  EXPECT_EQ(store.at(0).template_text, "custom");
  EXPECT_EQ(store.at(1).vector, EmbedFallback(parser.at(1), 8, source.seed));
}

TEST(BuildStore, FileSourceNeedsEveryId) {
  ParserState parser;
  parser.ParseStream(ToRawLines(std::vector<std::string>{"a b c", "d e"}));
  EmbeddingSource source;
  source.kind = EmbeddingSource::Kind::kFile;
  EmbeddingStore file(4, "bert-base-uncased", "h");
  file.Insert(0, "a b c", {1, 0, 0, 0});
  source.file_store = file;
  const std::vector<TemplateId> both{0, 1};
  EXPECT_THROW(BuildStore(parser, both, source), Error);
  const std::vector<TemplateId> first{0};
  EXPECT_EQ(BuildStore(parser, first, source).model_name(), "bert-base-uncased");
}

TEST(TrainDetector, Deterministic) {
  const LabeledCorpus train = Corpus(600, 0.0, 1);
  for (nn::Objective objective : {nn::Objective::kClassification, nn::Objective::kRegression}) {
    const TrainedDetector a = TrainDetector(train.lines, objective, SmallSettings());
    const TrainedDetector b = TrainDetector(train.lines, objective, SmallSettings());
    EXPECT_EQ(a.model.params, b.model.params);
    EXPECT_EQ(a.loss_curve, b.loss_curve);
    EXPECT_EQ(a.decision.threshold, b.decision.threshold);
    if (objective == nn::Objective::kRegression) EXPECT_GT(a.decision.threshold, 0.0);
  }
}

TEST(DetectLines, LeavesTrainedTemplatesIntact) {
  const LabeledCorpus train = Corpus(600, 0.0, 1);
  const TrainedDetector detector =
      TrainDetector(train.lines, nn::Objective::kClassification, SmallSettings());
  const LabeledCorpus test = Corpus(400, 0.02, 2);
  std::vector<std::string> lines = test.lines;
  const std::vector<std::string> vocab = BuildVocabulary(train.lines);
  for (std::size_t i = 0; i < lines.size(); i += 5) {
    lines[i] = JoinTokens(
        AlterMessage(SplitWhitespace(lines[i]), {AlterationKind::kSemSwap, 1, 1, i}, vocab));
  }
  const DetectionRun altered = DetectLines(detector, lines, SmallSettings().embedding);
  const DetectionRun clean = DetectLines(detector, test.lines, SmallSettings().embedding);
  // Unaltered lines get the same trained template whether or not corrupted
  // lines were parsed before them. Ids of new templates depend on order.
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i % 5 == 0) continue;
    const TemplateId id = clean.events[i].template_id;
    if (detector.known.Contains(id)) {
      EXPECT_EQ(altered.events[i].template_id, id) << i;
    } else {
      EXPECT_FALSE(detector.known.Contains(altered.events[i].template_id)) << i;
    }
  }
  EXPECT_LE(clean.novel_templates, 1u);  // at most the far anomaly statement
}

TEST(LabelVerdicts, JoinsByLineNumber) {
  const std::vector<Verdict> v{{2, Label::kAnomaly, 1, Reason::kTopKMiss},
                               {3, Label::kNormal, 0, Reason::kNone}};
  const std::vector<Label> truth{Label::kNormal, Label::kAnomaly, Label::kAnomaly};
  const auto labeled = LabelVerdicts(v, truth);
  ASSERT_EQ(labeled.size(), 2u);
  EXPECT_EQ(labeled[0].truth, Label::kAnomaly);
  EXPECT_EQ(labeled[1].predicted, Label::kNormal);
  const std::vector<Label> short_truth{Label::kNormal};
  EXPECT_THROW(LabelVerdicts(v, short_truth), Error);
}

TEST(SavedDetector, RoundTrip) {
  const LabeledCorpus train = Corpus(300, 0.0, 1);
  const TrainedDetector trained =
      TrainDetector(train.lines, nn::Objective::kRegression, SmallSettings());
  SavedDetector saved{trained.model, trained.decision, SmallSettings().window, "fallback-hash-v1",
                      3, trained.parser.SnapshotHash()};
  const auto path = std::filesystem::temp_directory_path() / "logad-saved-detector.ck";
  SaveDetector(saved, path);
  const SavedDetector back = LoadDetector(path);
  std::filesystem::remove(path);
  EXPECT_EQ(back.model.params, saved.model.params);
  EXPECT_EQ(back.model.known_ids, saved.model.known_ids);
  EXPECT_EQ(back.decision.threshold, saved.decision.threshold);
  EXPECT_EQ(back.decision.mode, nn::Objective::kRegression);
  EXPECT_EQ(back.window.delta, 5u);
  EXPECT_EQ(back.embedding_seed, 3u);
  EXPECT_EQ(back.parser_hash, saved.parser_hash);
}

}  // namespace
}  // namespace logad
