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

#ifndef LOGAD_EXPERIMENT_H_
#define LOGAD_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "logad/corpus.h"
#include "logad/detector.h"
#include "logad/metrics.h"
#include "logad/pipeline.h"
#include "logad/spec_file.h"
#include "logad/transfer.h"

namespace logad {

// Every key an experiment spec may set, with its default value.
const std::map<std::string, std::string>& ExperimentDefaults();

// A spec file resolved against the defaults. Unknown keys and malformed
// values are rejected here, before any work starts.
class ExperimentSpec {
 public:
  static ExperimentSpec FromFile(const SpecFile& file);
  static ExperimentSpec Defaults() { return FromFile(SpecFile()); }

  void SetSeed(std::uint64_t seed);
  std::uint64_t seed() const { return values_.GetUint("experiment.seed", 0); }
  std::string type() const { return values_.GetString("experiment.type", ""); }
  std::vector<nn::Objective> objectives() const;

  PipelineSettings Settings() const;
  TransferConfig Transfer() const;
  SyntheticConfig TrainCorpus() const;
  SyntheticConfig TestCorpus() const;

  const SpecFile& values() const { return values_; }

 private:
  void Check() const;

  SpecFile values_;
};

struct ExperimentResult {
  nlohmann::ordered_json report;
  // Per objective name, the verdicts of the evaluated run.
  std::map<std::string, std::vector<Verdict>> verdicts;
};

// Runs the experiment the spec describes. Stage failures are rethrown with the
// stage name prefixed to the message.
ExperimentResult RunExperiment(const ExperimentSpec& spec);

nlohmann::ordered_json MetricsJson(const Metrics& metrics);

// Adds "mapping" and per-objective "results" entries for a transfer run.
void AppendTransferReport(const TransferReport& transfer, nlohmann::ordered_json& report);

// Report text: pretty-printed JSON followed by a newline.
std::string RenderReport(const nlohmann::ordered_json& report);

// Loads train/test corpora named in the spec (synthetic or files).
struct ExperimentCorpora {
  std::vector<std::string> train;
  LabeledCorpus test;
};
ExperimentCorpora LoadCorpora(const ExperimentSpec& spec);

// Labels file: one "normal" or "anomaly" per line.
std::vector<Label> ReadLabels(const std::filesystem::path& path);

}  // namespace logad

#endif  // LOGAD_EXPERIMENT_H_
