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

#ifndef LOGAD_PARSER_H_
#define LOGAD_PARSER_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace logad {

using TemplateId = std::int32_t;

inline constexpr std::string_view kWildcard = "<*>";

struct MaskRule {
  std::string name;
  std::string pattern;  // ECMAScript regex; matches are replaced by kWildcard

  bool operator==(const MaskRule&) const = default;
};

// IPv4 addresses, hex strings of at least 8 characters, decimal integers.
std::vector<MaskRule> DefaultMasks();

struct RawLogLine {
  std::int64_t line_no = 0;
  std::optional<double> timestamp;
  std::string content;
};

struct LogTemplate {
  TemplateId id = 0;
  std::vector<std::string> tokens;
  std::int64_t support_count = 0;

  // Tokens joined by single spaces, wildcards rendered as "<*>".
  std::string Render() const;
  std::size_t WildcardCount() const;

  bool operator==(const LogTemplate&) const = default;
};

struct ParsedEvent {
  std::int64_t line_no = 0;
  TemplateId template_id = 0;
  std::vector<std::string> variables;
  std::optional<double> timestamp;
};

struct ParserConfig {
  int depth = 4;                       // >= 3; prefix-token layers = depth - 3
  double similarity_threshold = 0.4;   // (0, 1]
  int max_children = 100;
  std::vector<MaskRule> masks = DefaultMasks();

  bool operator==(const ParserConfig&) const = default;
};

// Removes the first `fields` whitespace-delimited fields (timestamp, pid,
// severity, ...). Returns the remainder verbatim.
std::string StripHeader(std::string_view line, int fields);

// Applies token-level masks and normalizes whitespace. Throws
// Error(kEmptyAfterMask) when nothing remains.
std::string Preprocess(std::string_view line, std::span<const MaskRule> masks);

// Compiled form of a mask list. Caches per-token results.
class Masker {
 public:
  explicit Masker(std::span<const MaskRule> rules);

  std::string MaskToken(const std::string& token);

 private:
  std::vector<std::regex> regexes_;
  std::unordered_map<std::string, std::string> cache_;
};

// Drain-style fixed-depth parse tree over a growing template set.
// Single writer while parsing; copies are independent snapshots.
class ParserState {
 public:
  explicit ParserState(ParserConfig config = {});

  ParserState(const ParserState& other);
  ParserState& operator=(const ParserState& other);
  ParserState(ParserState&&) noexcept = default;
  ParserState& operator=(ParserState&&) noexcept = default;

  // Assigns the line to the most similar template of equal length (ties go to
  // the lowest id) if similarity >= threshold, otherwise creates a template.
  // Throws Error(kEmptyAfterMask) for blank content.
  ParsedEvent ParseLine(const RawLogLine& line);

  // Marks every current template as frozen: later lines may still be assigned
  // to it, but its tokens and support no longer change. Templates created
  // afterwards generalize as usual. Used at detection time so that corrupted
  // lines cannot erode the templates a model was trained on. Not persisted.
  void Freeze() { frozen_below_ = next_id_; }
  bool IsFrozen(TemplateId id) const { return id < frozen_below_; }

  // Parses in order. Lines that fail preprocessing are skipped and reported
  // on std::clog. Variables are re-extracted against the final templates.
  std::vector<ParsedEvent> ParseStream(std::span<const RawLogLine> lines);

  // Raw tokens of `content` at the wildcard positions of template `id`.
  std::vector<std::string> ExtractVariables(TemplateId id,
                                            std::string_view content) const;

  const std::map<TemplateId, LogTemplate>& templates() const { return templates_; }
  const LogTemplate& at(TemplateId id) const;
  const ParserConfig& config() const { return config_; }

  // Hash over the templates file rendering; identifies a template-id space.
  std::string SnapshotHash() const;

  // Templates file: "template_id<TAB>canonical template" per line.
  std::string TemplatesTsv() const;

  void Save(const std::filesystem::path& path) const;
  static ParserState Load(const std::filesystem::path& path);

  // Structural equality: config, templates and tree shape.
  bool operator==(const ParserState& other) const;

  struct Node {
    std::map<std::string, std::size_t> children;  // token -> node index
    std::vector<TemplateId> cluster_ids;          // leaves only

    bool operator==(const Node&) const = default;
  };

 private:
  struct Tokenized {
    std::vector<std::string> raw;
    std::vector<std::string> masked;
  };

  Tokenized Tokenize(std::string_view content);
  std::optional<TemplateId> TreeSearch(const std::vector<std::string>& tokens) const;
  void AddToTree(TemplateId id, const std::vector<std::string>& tokens);
  std::size_t NewNode();

  ParserConfig config_;
  std::map<TemplateId, LogTemplate> templates_;
  std::vector<Node> nodes_;  // nodes_[0] is the root
  TemplateId next_id_ = 0;
  TemplateId frozen_below_ = 0;
  std::unique_ptr<Masker> masker_;
};

// Token-wise similarity: fraction of equal tokens at equal positions.
double TokenSimilarity(const std::vector<std::string>& template_tokens,
                       const std::vector<std::string>& line_tokens);

// Events file record: "line_no<TAB>template_id<TAB>json-array-of-variables".
std::string FormatEventRecord(const ParsedEvent& event);
ParsedEvent ParseEventRecord(std::string_view record);

}  // namespace logad

#endif  // LOGAD_PARSER_H_
