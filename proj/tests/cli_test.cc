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


#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "logad/io_util.h"

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

// Runs the CLI with the given arguments, capturing stdout and stderr.
RunResult RunCli(const std::string& args) {
  const std::string command = std::string(LOGAD_CLI_PATH) + " " + args + " 2>&1";
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = fread(buffer, 1, sizeof(buffer), pipe)) > 0) result.output.append(buffer, n);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  return result;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("logad-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, UnknownFlagIsUsageError) {
  const RunResult r = RunCli("parse --bogus");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("Usage"), std::string::npos) << r.output;
}

TEST_F(CliTest, MissingSubcommandIsUsageError) {
  EXPECT_EQ(RunCli("").exit_code, 1);
}

TEST_F(CliTest, HelpExitsCleanly) {
  const RunResult r = RunCli("--help");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("experiment"), std::string::npos);
}

TEST_F(CliTest, CorruptStateIsRuntimeError) {
  logad::WriteFileAtomic(Path("log.txt"), "a b c\n");
  logad::WriteFileAtomic(Path("bad.state"), "not a state\n");
  const RunResult r = RunCli("parse --in " + Path("log.txt") + " --out " + Path("ev") +
                             " --load-state " + Path("bad.state"));
  EXPECT_EQ(r.exit_code, 2) << r.output;
  EXPECT_NE(r.output.find("error"), std::string::npos);
}

TEST_F(CliTest, MalformedSpecIsRuntimeError) {
  logad::WriteFileAtomic(Path("x.cfg"), "model.hiden=3\n");
  const RunResult r = RunCli("experiment --spec " + Path("x.cfg"));
  EXPECT_EQ(r.exit_code, 2) << r.output;
}

TEST_F(CliTest, SynthParseWritesOutputs) {
  ASSERT_EQ(RunCli("synth --templates 5 --events 200 --seed 3 --out " + Path("s.txt") +
                   " --out-labels " + Path("s.labels"))
                .exit_code,
            0);
  EXPECT_EQ(logad::ReadLines(Path("s.txt")).size(), 200u);
  EXPECT_EQ(logad::ReadLines(Path("s.labels")).size(), 200u);
  const RunResult r = RunCli("parse --in " + Path("s.txt") + " --out " + Path("ev") + " --state " +
                             Path("p.state"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_TRUE(fs::exists(Path("ev")));
  EXPECT_TRUE(fs::exists(Path("ev.templates")));
  EXPECT_TRUE(fs::exists(Path("p.state")));
  EXPECT_FALSE(logad::ReadLines(Path("ev.templates")).empty());
}

TEST_F(CliTest, PipelineEndToEnd) {
  const auto ok = [](const RunResult& r) { return r.exit_code == 0; };
  ASSERT_TRUE(ok(RunCli("synth --templates 5 --events 600 --anomaly-rate 0 --seed 1 --out " +
                        Path("train.txt") + " --out-labels " + Path("train.labels"))));
  ASSERT_TRUE(ok(RunCli("synth --templates 5 --events 300 --anomaly-rate 0.05 --seed 2 --out " +
                        Path("test.txt") + " --out-labels " + Path("test.labels"))));
  ASSERT_TRUE(ok(RunCli("parse --in " + Path("train.txt") + " --out " + Path("train.ev") +
                        " --state " + Path("p.state"))));
  RunResult r = RunCli("train --state " + Path("p.state") + " --events " + Path("train.ev") +
                       " --objective regression --hidden 8 --delta 4 --epochs 2 --dim 8 --out " +
                       Path("m.ckpt"));
  ASSERT_TRUE(ok(r)) << r.output;
  r = RunCli("calibrate --model " + Path("m.ckpt") + " --state " + Path("p.state") + " --events " +
             Path("train.ev") + " --q 99 --dim 8 --out " + Path("m2.ckpt"));
  ASSERT_TRUE(ok(r)) << r.output;
  r = RunCli("detect --model " + Path("m2.ckpt") + " --state " + Path("p.state") + " --in " +
             Path("test.txt") + " --dim 8 --out " + Path("v.txt"));
  ASSERT_TRUE(ok(r)) << r.output;
  r = RunCli("eval --verdicts " + Path("v.txt") + " --labels " + Path("test.labels"));
  ASSERT_TRUE(ok(r)) << r.output;
  EXPECT_NE(r.output.find("\"f1\""), std::string::npos);
}

TEST_F(CliTest, ExperimentIsDeterministic) {
  logad::WriteFileAtomic(Path("e.cfg"),
                         "corpus.templates=5\ncorpus.train_events=400\ncorpus.test_events=300\n"
                         "embedding.dim=8\nmodel.hidden=8\nwindow.delta=4\ntrain.epochs=1\n");
  const std::string args = "experiment --spec " + Path("e.cfg") + " --seed 7 --out ";
  ASSERT_EQ(RunCli(args + Path("a.json")).exit_code, 0);
  ASSERT_EQ(RunCli(args + Path("b.json")).exit_code, 0);
  EXPECT_EQ(logad::ReadFile(Path("a.json")), logad::ReadFile(Path("b.json")));
}

}  // namespace
