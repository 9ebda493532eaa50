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


#include "logad/experiment.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <functional>

#include "logad/error.h"
#include "logad/io_util.h"
#include "logad/spec_file.h"

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

constexpr const char* kSmall =
    "corpus.templates=6\n"
    "corpus.train_events=800\n"
    "corpus.test_events=600\n"
    "embedding.dim=16\n"
    "model.hidden=12\n"
    "window.delta=5\n"
    "train.epochs=2\n"
    "train.learning_rate=0.01\n";

ExperimentSpec Small(const std::string& extra) {
  return ExperimentSpec::FromFile(SpecFile::Parse(std::string(kSmall) + extra));
}

TEST(SpecFile, ParsesCommentsAndWhitespace) {
  const SpecFile f = SpecFile::Parse("# comment\n\n  parser.depth = 5 \nx.y=a=b\n");
  EXPECT_EQ(f.GetInt("parser.depth", 0), 5);
  EXPECT_EQ(f.GetString("x.y", ""), "a=b");
  EXPECT_EQ(f.GetString("missing", "dflt"), "dflt");
}

TEST(SpecFile, DuplicateKeyIsRejected) {
  EXPECT_EQ(CodeOf([] { SpecFile::Parse("a=1\na=2\n"); }), ErrorCode::kConfigError);
}

TEST(SpecFile, MalformedValuesAreRejected) {
  const SpecFile f = SpecFile::Parse("n=12x\nb=maybe\nu=-3\n");
  EXPECT_EQ(CodeOf([&] { f.GetInt("n", 0); }), ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf([&] { f.GetBool("b", false); }), ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf([&] { f.GetUint("u", 0); }), ErrorCode::kConfigError);
}

TEST(SpecFile, LineWithoutEqualsIsRejected) {
  EXPECT_EQ(CodeOf([] { SpecFile::Parse("just words\n"); }), ErrorCode::kConfigError);
}

TEST(ExperimentSpec, DefaultsAreComplete) {
  const ExperimentSpec spec = ExperimentSpec::Defaults();
  EXPECT_EQ(spec.type(), "baseline");
  EXPECT_EQ(spec.objectives().size(), 2u);
  EXPECT_EQ(spec.values().values().size(), ExperimentDefaults().size());
  const PipelineSettings s = spec.Settings();
  EXPECT_EQ(s.decision.top_k, 3u);
  EXPECT_EQ(s.decision.q, 99.0);
  EXPECT_EQ(s.window.delta, 10u);
}

TEST(ExperimentSpec, UnknownKeyIsRejected) {
  EXPECT_EQ(CodeOf([] { Small("model.hiden=3\n"); }), ErrorCode::kConfigError);
}

TEST(ExperimentSpec, InvalidValuesAreRejected) {
  EXPECT_EQ(CodeOf([] { Small("experiment.type=magic\n"); }), ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf([] { Small("train.optimizer=rmsprop\n"); }), ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf([] { Small("detect.q=0\n"); }), ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf([] { Small("corpus.source=file\n"); }), ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf([] { Small("transfer.few_shot_fraction=1.5\n"); }), ErrorCode::kConfigError);
}

TEST(ExperimentSpec, SeedOverride) {
  ExperimentSpec spec = Small("");
  spec.SetSeed(42);
  EXPECT_EQ(spec.seed(), 42u);
  EXPECT_NE(spec.TrainCorpus().seed, spec.TestCorpus().seed);
}

TEST(RunExperiment, BaselineIsByteDeterministic) {
  const ExperimentSpec spec = Small("experiment.seed=7\n");
  const std::string a = RenderReport(RunExperiment(spec).report);
  const std::string b = RenderReport(RunExperiment(spec).report);
  EXPECT_EQ(a, b);
  ExperimentSpec other = spec;
  other.SetSeed(8);
  EXPECT_NE(RenderReport(RunExperiment(other).report), a);
}

TEST(RunExperiment, BaselineReportShape) {
  const ExperimentResult r = RunExperiment(Small(""));
  const auto& report = r.report;
  EXPECT_EQ(report["format"], "logad-report-v1");
  ASSERT_EQ(report["results"].size(), 2u);
  for (const auto& res : report["results"]) {
    const auto& m = res["metrics"];
    EXPECT_TRUE(F1Consistent(m["precision"], m["recall"], m["f1"]));
    EXPECT_EQ(res["loss_curve"].size(), 2u);
  }
  EXPECT_EQ(r.verdicts.size(), 2u);
}

TEST(RunExperiment, SemanticReportsCleanComparison) {
  const ExperimentResult r =
      RunExperiment(Small("experiment.type=semantic\nexperiment.objective=classification\n"));
  const auto& res = r.report["results"][0];
  EXPECT_EQ(res["altered"]["items"], 60);
  EXPECT_TRUE(res.contains("clean_metrics"));
  const double clean_fpr = res["clean_metrics"]["false_positive_rate"];
  const double fpr = res["metrics"]["false_positive_rate"];
  EXPECT_NEAR(res["fpr_increase_pp"].get<double>(), 100.0 * (fpr - clean_fpr), 1e-12);
}

TEST(RunExperiment, SequentialRuns) {
  const ExperimentResult r = RunExperiment(
      Small("experiment.type=sequential\nalter.kind=SeqSwap\nalter.fraction=50\n"
            "experiment.objective=regression\n"));
  EXPECT_GT(r.report["results"][0]["altered"]["items"].get<int>(), 0);
}

TEST(RunExperiment, TransferEmitsAllCells) {
  const ExperimentResult r = RunExperiment(
      Small("experiment.type=transfer\ntransfer.severity=similar\ntransfer.few_shot_epochs=1\n"));
  const auto& results = r.report["results"];
  ASSERT_EQ(results.size(), 2u);
  for (const auto& res : results) {
    for (const char* cell : {"zero_shot", "fine_tuned"}) {
      for (const char* metric : {"precision", "recall", "f1"}) {
        EXPECT_TRUE(res[cell].contains(metric)) << cell << " " << metric;
      }
    }
    EXPECT_LE(res["head_loss_fine_tuned"].get<double>(),
              res["head_loss_zero_shot"].get<double>() + 1e-9);
  }
}

TEST(RunExperiment, FileCorpus) {
  const auto dir = std::filesystem::temp_directory_path() / "logad-exp-file";
  std::filesystem::create_directories(dir);
  SyntheticConfig c;
  c.num_templates = 5;
  c.num_events = 300;
  const LabeledCorpus train = GenerateSyntheticCorpus(c);
  c.anomaly_rate = 0.05;
  c.seed = 2;
  const LabeledCorpus test = GenerateSyntheticCorpus(c);
  std::string train_text, test_text, labels;
  for (const auto& l : train.lines) train_text += l + "\n";
  for (const auto& l : test.lines) test_text += l + "\n";
  for (Label l : test.labels) labels += std::string(LabelName(l)) + "\n";
  WriteFileAtomic(dir / "train.txt", train_text);
  WriteFileAtomic(dir / "test.txt", test_text);
  WriteFileAtomic(dir / "test.labels", labels);
  const ExperimentResult r = RunExperiment(ExperimentSpec::FromFile(SpecFile::Parse(
      "corpus.source=file\ncorpus.train=" + (dir / "train.txt").string() +
      "\ncorpus.test=" + (dir / "test.txt").string() +
      "\ncorpus.test_labels=" + (dir / "test.labels").string() +
      "\nembedding.dim=8\nmodel.hidden=8\nwindow.delta=4\ntrain.epochs=1\n")));
  std::filesystem::remove_all(dir);
  EXPECT_EQ(r.report["corpus"]["test_lines"], 300);
}

TEST(ReadLabels, RejectsUnknownLabel) {
  const auto path = std::filesystem::temp_directory_path() / "logad-bad.labels";
  WriteFileAtomic(path, "normal\nweird\n");
  EXPECT_THROW(ReadLabels(path), Error);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace logad
