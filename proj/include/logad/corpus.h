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

#ifndef LOGAD_CORPUS_H_
#define LOGAD_CORPUS_H_

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "logad/detector.h"
#include "logad/random.h"

namespace logad {

// Log lines (header already stripped) with one ground-truth label per line.
struct LabeledCorpus {
  std::vector<std::string> lines;
  std::vector<Label> labels;
};

// Number of built-in synthetic log statements.
std::size_t SyntheticTemplateCount();

// Pattern of built-in statement i. Placeholders: {int} {hex} {ip} {word}.
std::string_view SyntheticPattern(std::size_t i);

// Pattern of the out-of-grammar statement used for injected anomalies. It
// shares no literal token with the built-in statements.
std::string_view FarAnomalyPattern();

// Fills placeholders with random values.
std::string RenderPattern(std::string_view pattern, Rng& rng);

// Canonical template of a pattern after default masking ({word} -> <*> too).
std::string PatternTemplate(std::string_view pattern);

// Statement i of an n-statement grammar: a unique action word, the subjects
// i..i+3 (mod n), and two variable fields. Statements a few steps apart in
// the cycle share subjects; n is at most 20.
std::string GrammarPattern(std::size_t i, std::size_t n);

struct SyntheticConfig {
  std::size_t num_templates = 10;
  std::size_t num_events = 3000;
  double noise = 0.05;          // probability of a repeat or a skip transition
  double anomaly_rate = 0.0;    // probability that a position hosts an injection
  std::size_t warmup = 16;      // positions kept free of injections
  std::uint64_t seed = 1;
};

// Cyclic grammar over GrammarPattern(i, num_templates): t -> t+1, with
// probability `noise` replaced by t -> t (repeat) or t -> t+2 (skip). Half of
// the injections insert a far out-of-grammar line, half replace an event by
// an out-of-order statement. An event is labeled anomalous when it is far or
// is not a grammar successor of the previous in-grammar event.
LabeledCorpus GenerateSyntheticCorpus(const SyntheticConfig& config);

// num_templates x instances lines with random variables, shuffled; index[i]
// is the statement that produced line i.
struct TemplateCorpus {
  std::vector<std::string> lines;
  std::vector<std::size_t> statement;
};
TemplateCorpus GenerateTemplateCorpus(std::size_t num_templates, std::size_t instances,
                                      std::uint64_t seed);

// Loghub-style ingestion: strips `header_fields` fields, takes a timestamp
// from fields 2-3 ("YYYY-MM-DD HH:MM:SS[.fff]") when present and stably sorts
// by it, and labels a line anomalous when it mentions any id in
// `anomalous_ids`.
LabeledCorpus IngestLoghub(std::span<const std::string> raw_lines,
                           const std::set<std::string>& anomalous_ids, int header_fields);

// Extracts UUID-like tokens (8-4-4-4-12 hex) from a Loghub labels file.
std::set<std::string> ReadAnomalyIds(std::span<const std::string> label_lines);

// Parses "YYYY-MM-DD HH:MM:SS[.fff]" into seconds since 1970 (UTC, no zone).
std::optional<double> ParseTimestamp(std::string_view date, std::string_view time);

}  // namespace logad

#endif  // LOGAD_CORPUS_H_
