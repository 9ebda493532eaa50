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

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <cctype>
#include <regex>

#include "logad/error.h"
#include "logad/io_util.h"

namespace logad {
namespace {

constexpr std::array<std::string_view, 20> kPatterns = {
    "scheduler selected host {word} for instance {hex}",
    "compute claimed {int} MB memory for instance {hex}",
    "network allocated address {ip} to port {hex}",
    "volume attached device {int} to server {hex} successfully",
    "hypervisor spawned guest domain {hex} in {int} seconds",
    "image cache hit for base file {hex}",
    "api accepted request from {ip} with status {int}",
    "metadata served user data to {ip} in {int} ms",
    "conductor recorded lifecycle event resumed for {hex}",
    "libvirt reported cpu usage {int} percent on node {word}",
    "keystone issued token {hex} for project {word}",
    "glance uploaded snapshot {hex} of size {int} bytes",
    "neutron bound security group {hex} to interface {int}",
    "rabbitmq delivered message {hex} on queue {word} after {int} ms",
    "placement updated inventory of provider {hex} generation {int}",
    "cinder created backup {hex} for tenant {word}",
    "heat completed stack update {hex} with {int} resources",
    "swift replicated object {hex} across {int} zones",
    "horizon rendered dashboard panel {word} within {int} ms",
    "ceilometer published sample batch {int} to pipeline {word}",
};

constexpr std::string_view kFarPattern =
    "kernel oops segfault trapped within thread {int} stack corrupted";

constexpr std::array<std::string_view, 12> kWords = {
    "alpha", "bravo", "charlie", "delta", "echo", "foxtrot",
    "golf", "hotel", "india", "juliet", "kilo", "lima",
};

// Grammar statements: a unique action followed by a sliding window of
// kTopicSpan subjects, so statements close in the cycle share vocabulary.
constexpr std::size_t kTopicSpan = 4;

constexpr std::array<std::string_view, 20> kActions = {
    "scheduling", "spawning",  "attaching", "resizing",   "migrating",
    "booting",    "pausing",   "resuming",  "rebuilding", "deleting",
    "snapshotting", "rescuing", "shelving", "evacuating", "suspending",
    "unshelving", "locking",   "unlocking", "rebooting",  "stopping",
};

constexpr std::array<std::string_view, 20> kSubjects = {
    "instance", "volume",  "port",    "image",     "flavor", "host",   "network",
    "subnet",   "router",  "keypair", "quota",     "project", "tenant", "aggregate",
    "zone",     "server",  "disk",    "cell",      "bridge", "tap",
};

std::string RandomHex(Rng& rng) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(rng.next()));
  return std::string(buf, 8 + rng.index(9));
}

}  // namespace

std::size_t SyntheticTemplateCount() { return kPatterns.size(); }

std::string_view SyntheticPattern(std::size_t i) {
  if (i >= kPatterns.size()) throw Error(ErrorCode::kInvalidArgument, "no such statement");
  return kPatterns[i];
}

std::string_view FarAnomalyPattern() { return kFarPattern; }

std::string GrammarPattern(std::size_t i, std::size_t n) {
  if (n < 1 || n > kActions.size() || i >= n) {
    throw Error(ErrorCode::kInvalidArgument, "no such grammar statement");
  }
  std::string out(kActions[i]);
  for (std::size_t j = 0; j < kTopicSpan; ++j) {
    out += ' ';
    out += kSubjects[(i + j) % n];
  }
  return out + " {hex} {int}";
}

std::string RenderPattern(std::string_view pattern, Rng& rng) {
  std::vector<std::string> tokens = SplitWhitespace(pattern);
  for (std::string& t : tokens) {
    if (t == "{int}") {
      t = std::to_string(rng.index(100000));
    } else if (t == "{hex}") {
      t = RandomHex(rng);
      // An all-digit draw would still be masked, but keep the hex shape.
      if (std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        t[0] = 'a';
      }
    } else if (t == "{ip}") {
      t = std::to_string(10 + rng.index(240)) + "." + std::to_string(rng.index(256)) + "." +
          std::to_string(rng.index(256)) + "." + std::to_string(1 + rng.index(254));
    } else if (t == "{word}") {
      t = std::string(kWords[rng.index(kWords.size())]);
    }
  }
  return JoinTokens(tokens);
}

std::string PatternTemplate(std::string_view pattern) {
  std::vector<std::string> tokens = SplitWhitespace(pattern);
  for (std::string& t : tokens) {
    if (t.size() > 2 && t.front() == '{' && t.back() == '}') t = std::string(kWildcard);
  }
  return JoinTokens(tokens);
}

LabeledCorpus GenerateSyntheticCorpus(const SyntheticConfig& config) {
  const std::size_t n = config.num_templates;
  if (n < 3 || n > kActions.size()) {
    throw Error(ErrorCode::kConfigError, "synthetic corpus needs 3.." +
                                             std::to_string(kActions.size()) + " templates");
  }
  std::vector<std::string> patterns;
  for (std::size_t i = 0; i < n; ++i) patterns.push_back(GrammarPattern(i, n));
  Rng rng(config.seed);
  constexpr int kFar = -1;
  std::vector<int> sequence;
  sequence.reserve(config.num_events + config.num_events / 10);
  std::size_t current = rng.index(n);
  std::size_t cooldown = 0;
  while (sequence.size() < config.num_events) {
    const std::size_t pos = sequence.size();
    if (pos > 0) {
      if (config.noise > 0.0 && rng.bernoulli(config.noise)) {
        current = rng.bernoulli(0.5) ? current : (current + 2) % n;
      } else {
        current = (current + 1) % n;
      }
    }
    if (pos >= config.warmup && cooldown == 0 && config.anomaly_rate > 0.0 &&
        rng.bernoulli(config.anomaly_rate)) {
      cooldown = 4;
      if (rng.bernoulli(0.5)) {
        sequence.push_back(kFar);
        sequence.push_back(static_cast<int>(current));
      } else {
        // Out-of-order statement, at least kTopicSpan steps from the expected
        // one in both directions when the cycle is long enough.
        const std::size_t span = n > 2 * kTopicSpan ? n - 2 * kTopicSpan + 1 : 1;
        const std::size_t shift = std::min(kTopicSpan, n - 1) + rng.index(span);
        sequence.push_back(static_cast<int>((current + shift) % n));
      }
      continue;
    }
    if (cooldown > 0) --cooldown;
    sequence.push_back(static_cast<int>(current));
  }
  sequence.resize(config.num_events);

  LabeledCorpus corpus;
  corpus.lines.reserve(sequence.size());
  corpus.labels.reserve(sequence.size());
  int previous = kFar;
  for (int t : sequence) {
    if (t == kFar) {
      corpus.lines.push_back(RenderPattern(kFarPattern, rng));
      corpus.labels.push_back(Label::kAnomaly);
      continue;
    }
    bool valid = true;
    if (previous != kFar) {
      const auto p = static_cast<std::size_t>(previous);
      const auto c = static_cast<std::size_t>(t);
      valid = c == p || c == (p + 1) % n || c == (p + 2) % n;
    }
    corpus.lines.push_back(RenderPattern(patterns[static_cast<std::size_t>(t)], rng));
    corpus.labels.push_back(valid ? Label::kNormal : Label::kAnomaly);
    previous = t;
  }
  return corpus;
}

TemplateCorpus GenerateTemplateCorpus(std::size_t num_templates, std::size_t instances,
                                      std::uint64_t seed) {
  if (num_templates > kPatterns.size()) {
    throw Error(ErrorCode::kConfigError, "at most " + std::to_string(kPatterns.size()) + " templates");
  }
  Rng rng(seed);
  std::vector<std::size_t> order(num_templates * instances);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i / instances;
  rng.shuffle(std::span<std::size_t>(order));
  TemplateCorpus corpus;
  corpus.statement = order;
  corpus.lines.reserve(order.size());
  for (std::size_t s : order) corpus.lines.push_back(RenderPattern(kPatterns[s], rng));
  return corpus;
}

std::optional<double> ParseTimestamp(std::string_view date, std::string_view time) {
  int y = 0;
  unsigned mo = 0;
  unsigned d = 0;
  int hh = 0;
  int mm = 0;
  double ss = 0.0;
  const std::string ds(date);
  const std::string ts(time);
  if (std::sscanf(ds.c_str(), "%d-%u-%u", &y, &mo, &d) != 3) return std::nullopt;
  if (std::sscanf(ts.c_str(), "%d:%d:%lf", &hh, &mm, &ss) != 3) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{mo},
                                        std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  const auto days = std::chrono::sys_days(ymd).time_since_epoch().count();
  return static_cast<double>(days) * 86400.0 + hh * 3600.0 + mm * 60.0 + ss;
}

LabeledCorpus IngestLoghub(std::span<const std::string> raw_lines,
                           const std::set<std::string>& anomalous_ids, int header_fields) {
  struct Row {
    std::optional<double> ts;
    std::string content;
    Label label;
  };
  std::vector<Row> rows;
  rows.reserve(raw_lines.size());
  bool all_timed = true;
  for (const std::string& raw : raw_lines) {
    std::string content = StripHeader(raw, header_fields);
    if (SplitWhitespace(content).empty()) continue;
    const std::vector<std::string> fields = SplitWhitespace(raw);
    std::optional<double> ts;
    if (fields.size() >= 3) ts = ParseTimestamp(fields[1], fields[2]);
    all_timed = all_timed && ts.has_value();
    Label label = Label::kNormal;
    for (const std::string& token : SplitWhitespace(raw)) {
      for (const std::string& id : anomalous_ids) {
        if (token.find(id) != std::string::npos) {
          label = Label::kAnomaly;
          break;
        }
      }
      if (label == Label::kAnomaly) break;
    }
    rows.push_back({ts, std::move(content), label});
  }
  if (all_timed) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return *a.ts < *b.ts; });
  }
  LabeledCorpus corpus;
  for (Row& r : rows) {
    corpus.lines.push_back(std::move(r.content));
    corpus.labels.push_back(r.label);
  }
  return corpus;
}

std::set<std::string> ReadAnomalyIds(std::span<const std::string> label_lines) {
  static const std::regex kUuid(
      "[0-9a-fA-F]{8}-[0-9a-fA-F]{4}-[0-9a-fA-F]{4}-[0-9a-fA-F]{4}-[0-9a-fA-F]{12}");
  std::set<std::string> ids;
  for (const std::string& line : label_lines) {
    for (auto it = std::sregex_iterator(line.begin(), line.end(), kUuid);
         it != std::sregex_iterator(); ++it) {
      ids.insert(it->str());
    }
  }
  return ids;
}

}  // namespace logad
