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


#include "logad/corpus.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "logad/error.h"
#include "logad/io_util.h"
#include "logad/parser.h"

namespace logad {
namespace {

TEST(Synthetic, PatternsHaveDistinctFirstTokens) {
  std::set<std::string> first;
  for (std::size_t i = 0; i < SyntheticTemplateCount(); ++i) {
    first.insert(SplitWhitespace(SyntheticPattern(i))[0]);
  }
  EXPECT_EQ(first.size(), SyntheticTemplateCount());
}

TEST(Synthetic, FarPatternSharesNoLiteral) {
  std::set<std::string> far;
  for (const auto& t : SplitWhitespace(FarAnomalyPattern())) far.insert(t);
  for (std::size_t n : {5u, 10u, 20u}) {
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& t : SplitWhitespace(GrammarPattern(i, n))) {
        if (t.front() != '{') EXPECT_EQ(far.count(t), 0u) << t;
      }
    }
  }
}

TEST(Synthetic, RenderedLinesParseToPatternTemplate) {
  Rng rng(1);
  for (std::size_t i = 0; i < SyntheticTemplateCount(); ++i) {
    ParserState state;
    const ParsedEvent e = state.ParseLine({1, std::nullopt, RenderPattern(SyntheticPattern(i), rng)});
    const std::string rendered = state.at(e.template_id).Render();
    // {word} fields are literal until a second instance generalizes them.
    if (std::string(SyntheticPattern(i)).find("{word}") == std::string::npos) {
      EXPECT_EQ(rendered, PatternTemplate(SyntheticPattern(i)));
    }
  }
}

TEST(Synthetic, GrammarStatementsShareNeighbourVocabulary) {
  const auto a = SplitWhitespace(GrammarPattern(0, 10));
  const auto b = SplitWhitespace(GrammarPattern(1, 10));
  const auto far = SplitWhitespace(GrammarPattern(5, 10));
  auto shared = [](const std::vector<std::string>& x, const std::vector<std::string>& y) {
    std::size_t n = 0;
    for (std::size_t i = 1; i < x.size() - 2; ++i) {
      for (std::size_t j = 1; j < y.size() - 2; ++j) n += x[i] == y[j];
    }
    return n;
  };
  EXPECT_EQ(shared(a, b), 3u);
  EXPECT_EQ(shared(a, far), 0u);
  EXPECT_THROW(GrammarPattern(10, 10), Error);
}

TEST(Synthetic, CleanCorpusIsAllNormal) {
  SyntheticConfig config;
  config.num_events = 2000;
  const LabeledCorpus c = GenerateSyntheticCorpus(config);
  ASSERT_EQ(c.lines.size(), 2000u);
  for (Label l : c.labels) EXPECT_EQ(l, Label::kNormal);
}

TEST(Synthetic, NoiselessCorpusFollowsCycle) {
  SyntheticConfig config;
  config.num_events = 100;
  config.noise = 0.0;
  config.num_templates = 7;
  const LabeledCorpus c = GenerateSyntheticCorpus(config);
  ParserState state;
  std::vector<RawLogLine> raw;
  for (std::size_t i = 0; i < c.lines.size(); ++i) {
    raw.push_back({static_cast<std::int64_t>(i + 1), std::nullopt, c.lines[i]});
  }
  const auto events = state.ParseStream(raw);
  EXPECT_EQ(state.templates().size(), 7u);
  for (std::size_t i = 7; i < events.size(); ++i) {
    EXPECT_EQ(events[i].template_id, events[i - 7].template_id);
  }
}

TEST(Synthetic, AnomalyRateAndDeterminism) {
  SyntheticConfig config;
  config.num_events = 5000;
  config.anomaly_rate = 0.02;
  config.seed = 9;
  const LabeledCorpus a = GenerateSyntheticCorpus(config);
  const LabeledCorpus b = GenerateSyntheticCorpus(config);
  EXPECT_EQ(a.lines, b.lines);
  EXPECT_EQ(a.labels, b.labels);
  std::size_t anomalies = 0;
  std::size_t far = 0;
  const std::string far_head = SplitWhitespace(FarAnomalyPattern())[0];
  for (std::size_t i = 0; i < a.lines.size(); ++i) {
    if (a.labels[i] == Label::kAnomaly) ++anomalies;
    if (SplitWhitespace(a.lines[i])[0] == far_head) {
      ++far;
      EXPECT_EQ(a.labels[i], Label::kAnomaly);
    }
  }
  EXPECT_GT(far, 0u);
  EXPECT_GT(anomalies, 50u);
  EXPECT_LT(anomalies, 250u);
  for (std::size_t i = 0; i < config.warmup; ++i) EXPECT_EQ(a.labels[i], Label::kNormal);
}

TEST(Synthetic, RejectsTemplateCount) {
  SyntheticConfig config;
  config.num_templates = 2;
  EXPECT_THROW(GenerateSyntheticCorpus(config), Error);
  config.num_templates = 21;
  EXPECT_THROW(GenerateSyntheticCorpus(config), Error);
}

TEST(TemplateCorpus, BalancedAndShuffled) {
  const TemplateCorpus c = GenerateTemplateCorpus(4, 25, 3);
  ASSERT_EQ(c.lines.size(), 100u);
  std::vector<std::size_t> counts(4, 0);
  for (std::size_t s : c.statement) ++counts[s];
  for (std::size_t n : counts) EXPECT_EQ(n, 25u);
  bool sorted = std::is_sorted(c.statement.begin(), c.statement.end());
  EXPECT_FALSE(sorted);
}

TEST(Timestamp, Parses) {
  const auto t = ParseTimestamp("1970-01-02", "00:00:01.5");
  ASSERT_TRUE(t);
  EXPECT_DOUBLE_EQ(*t, 86401.5);
  EXPECT_FALSE(ParseTimestamp("2017-02-30", "00:00:00"));
  EXPECT_FALSE(ParseTimestamp("junk", "00:00:00"));
}

TEST(Ingest, StripsSortsAndLabels) {
  const std::string bad = "11111111-2222-3333-4444-555555555555";
  const std::vector<std::string> raw{
      "nova.log 2017-05-16 00:00:05.000 2931 INFO nova [req] instance " + bad + " failed",
      "nova.log 2017-05-16 00:00:01.000 2931 INFO nova [req] instance ok spawned",
      "nova.log 2017-05-16 00:00:03.000 2931 INFO   ",
  };
  const LabeledCorpus c = IngestLoghub(raw, {bad}, 5);
  ASSERT_EQ(c.lines.size(), 2u);
  EXPECT_EQ(c.lines[0], "nova [req] instance ok spawned");
  EXPECT_EQ(c.labels[0], Label::kNormal);
  EXPECT_EQ(c.labels[1], Label::kAnomaly);
}

TEST(Ingest, AnomalyIds) {
  const std::vector<std::string> lines{
      "instance 11111111-2222-3333-4444-555555555555 and",
      "AAAAAAAA-BBBB-CCCC-DDDD-EEEEEEEEEEEE x 1234",
  };
  EXPECT_EQ(ReadAnomalyIds(lines).size(), 2u);
}

}  // namespace
}  // namespace logad
