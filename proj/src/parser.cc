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

#include "logad/parser.h"

#include <algorithm>
#include <cctype>
#include <iostream>

#include "json.hpp"
#include "logad/error.h"
#include "logad/io_util.h"

namespace logad {
namespace {

constexpr std::size_t kMaskCacheLimit = 1 << 17;

bool HasDigit(std::string_view token) {
  return std::any_of(token.begin(), token.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

}  // namespace

std::vector<MaskRule> DefaultMasks() {
  return {
      {"ipv4", R"(\b\d{1,3}(\.\d{1,3}){3}(:\d+)?\b)"},
      {"hex", R"(\b(0x)?[0-9a-fA-F]{8,}\b)"},
      {"int", R"(\b-?\d+\b)"},
  };
}

std::string LogTemplate::Render() const { return JoinTokens(tokens); }

std::size_t LogTemplate::WildcardCount() const {
  return static_cast<std::size_t>(
      std::count(tokens.begin(), tokens.end(), std::string(kWildcard)));
}

std::string StripHeader(std::string_view line, int fields) {
  std::size_t i = 0;
  for (int f = 0; f < fields; ++f) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
  }
  while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
  return std::string(line.substr(i));
}

Masker::Masker(std::span<const MaskRule> rules) {
  regexes_.reserve(rules.size());
  for (const MaskRule& rule : rules) {
    try {
      regexes_.emplace_back(rule.pattern, std::regex::ECMAScript | std::regex::optimize);
    } catch (const std::regex_error& e) {
      throw Error(ErrorCode::kConfigError, "bad mask '" + rule.name + "': " + e.what());
    }
  }
}

std::string Masker::MaskToken(const std::string& token) {
  if (auto it = cache_.find(token); it != cache_.end()) return it->second;
  std::string masked = token;
  for (const std::regex& re : regexes_) {
    masked = std::regex_replace(masked, re, std::string(kWildcard));
  }
  if (cache_.size() >= kMaskCacheLimit) cache_.clear();
  cache_.emplace(token, masked);
  return masked;
}

std::string Preprocess(std::string_view line, std::span<const MaskRule> masks) {
  Masker masker(masks);
  std::vector<std::string> tokens = SplitWhitespace(line);
  if (tokens.empty()) throw Error(ErrorCode::kEmptyAfterMask, "blank line");
  for (std::string& token : tokens) token = masker.MaskToken(token);
  return JoinTokens(tokens);
}

double TokenSimilarity(const std::vector<std::string>& template_tokens,
                       const std::vector<std::string>& line_tokens) {
  if (template_tokens.size() != line_tokens.size() || template_tokens.empty()) {
    return 0.0;
  }
  std::size_t equal = 0;
  for (std::size_t i = 0; i < template_tokens.size(); ++i) {
    if (template_tokens[i] == line_tokens[i]) ++equal;
  }
  return static_cast<double>(equal) / static_cast<double>(template_tokens.size());
}

ParserState::ParserState(ParserConfig config)
    : config_(std::move(config)), masker_(std::make_unique<Masker>(config_.masks)) {
  if (config_.depth < 3) {
    throw Error(ErrorCode::kConfigError, "parser depth must be >= 3");
  }
  if (!(config_.similarity_threshold > 0.0 && config_.similarity_threshold <= 1.0)) {
    throw Error(ErrorCode::kConfigError, "similarity_threshold must be in (0, 1]");
  }
  if (config_.max_children < 2) {
    throw Error(ErrorCode::kConfigError, "max_children must be >= 2");
  }
  nodes_.emplace_back();
}

ParserState::ParserState(const ParserState& other)
    : config_(other.config_),
      templates_(other.templates_),
      nodes_(other.nodes_),
      next_id_(other.next_id_),
      frozen_below_(other.frozen_below_),
      masker_(std::make_unique<Masker>(other.config_.masks)) {}

ParserState& ParserState::operator=(const ParserState& other) {
  if (this != &other) {
    ParserState copy(other);
    *this = std::move(copy);
  }
  return *this;
}

bool ParserState::operator==(const ParserState& other) const {
  return config_ == other.config_ && templates_ == other.templates_ &&
         nodes_ == other.nodes_ && next_id_ == other.next_id_ &&
         frozen_below_ == other.frozen_below_;
}

const LogTemplate& ParserState::at(TemplateId id) const {
  auto it = templates_.find(id);
  if (it == templates_.end()) {
    throw Error(ErrorCode::kInvalidArgument, "unknown template id " + std::to_string(id));
  }
  return it->second;
}

std::size_t ParserState::NewNode() {
  nodes_.emplace_back();
  return nodes_.size() - 1;
}

ParserState::Tokenized ParserState::Tokenize(std::string_view content) {
  Tokenized out;
  out.raw = SplitWhitespace(content);
  if (out.raw.empty()) throw Error(ErrorCode::kEmptyAfterMask, "blank line");
  out.masked.reserve(out.raw.size());
  for (const std::string& token : out.raw) out.masked.push_back(masker_->MaskToken(token));
  return out;
}

std::optional<TemplateId> ParserState::TreeSearch(
    const std::vector<std::string>& tokens) const {
  const Node& root = nodes_[0];
  auto len_it = root.children.find(std::to_string(tokens.size()));
  if (len_it == root.children.end()) return std::nullopt;
  std::size_t cur = len_it->second;
  const std::size_t prefix =
      std::min(static_cast<std::size_t>(config_.depth - 3), tokens.size());
  for (std::size_t i = 0; i < prefix; ++i) {
    const auto& children = nodes_[cur].children;
    auto it = children.find(tokens[i]);
    if (it == children.end()) it = children.find(std::string(kWildcard));
    if (it == children.end()) return std::nullopt;
    cur = it->second;
  }

  std::optional<TemplateId> best;
  double best_sim = -1.0;
  // cluster_ids are appended in creation order, so strict > keeps the lowest id
  // on ties.
  std::vector<TemplateId> candidates = nodes_[cur].cluster_ids;
  std::sort(candidates.begin(), candidates.end());
  for (TemplateId id : candidates) {
    const double sim = TokenSimilarity(templates_.at(id).tokens, tokens);
    if (sim > best_sim) {
      best_sim = sim;
      best = id;
    }
  }
  if (best && best_sim >= config_.similarity_threshold) return best;
  return std::nullopt;
}

void ParserState::AddToTree(TemplateId id, const std::vector<std::string>& tokens) {
  const std::string len_key = std::to_string(tokens.size());
  std::size_t cur;
  if (auto it = nodes_[0].children.find(len_key); it != nodes_[0].children.end()) {
    cur = it->second;
  } else {
    cur = NewNode();
    nodes_[0].children.emplace(len_key, cur);
  }
  const std::string wildcard(kWildcard);
  const std::size_t max_children = static_cast<std::size_t>(config_.max_children);
  const std::size_t prefix =
      std::min(static_cast<std::size_t>(config_.depth - 3), tokens.size());
  for (std::size_t i = 0; i < prefix; ++i) {
    const std::string& token = tokens[i];
    auto& children = nodes_[cur].children;
    if (auto it = children.find(token); it != children.end()) {
      cur = it->second;
      continue;
    }
    const bool has_wild = children.count(wildcard) > 0;
    std::string key;
    if (HasDigit(token)) {
      key = wildcard;
    } else if (has_wild) {
      key = children.size() < max_children ? token : wildcard;
    } else if (children.size() + 1 < max_children) {
      key = token;
    } else {
      key = wildcard;
    }
    if (auto it = children.find(key); it != children.end()) {
      cur = it->second;
    } else {
      const std::size_t child = NewNode();
      nodes_[cur].children.emplace(key, child);
      cur = child;
    }
  }
  nodes_[cur].cluster_ids.push_back(id);
}

ParsedEvent ParserState::ParseLine(const RawLogLine& line) {
  Tokenized tok = Tokenize(line.content);
  TemplateId id;
  if (std::optional<TemplateId> match = TreeSearch(tok.masked)) {
    id = *match;
    LogTemplate& tmpl = templates_.at(id);
    if (!IsFrozen(id)) {
      for (std::size_t i = 0; i < tmpl.tokens.size(); ++i) {
        if (tmpl.tokens[i] != tok.masked[i]) tmpl.tokens[i] = std::string(kWildcard);
      }
      ++tmpl.support_count;
    }
  } else {
    id = next_id_++;
    LogTemplate tmpl{id, tok.masked, 1};
    AddToTree(id, tmpl.tokens);
    templates_.emplace(id, std::move(tmpl));
  }

  ParsedEvent event;
  event.line_no = line.line_no;
  event.template_id = id;
  event.timestamp = line.timestamp;
  const LogTemplate& tmpl = templates_.at(id);
  for (std::size_t i = 0; i < tmpl.tokens.size(); ++i) {
    if (tmpl.tokens[i] == kWildcard) event.variables.push_back(tok.raw[i]);
  }
  return event;
}

std::vector<ParsedEvent> ParserState::ParseStream(std::span<const RawLogLine> lines) {
  std::vector<ParsedEvent> events;
  std::vector<const RawLogLine*> sources;
  events.reserve(lines.size());
  for (const RawLogLine& line : lines) {
    try {
      events.push_back(ParseLine(line));
      sources.push_back(&line);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyAfterMask) throw;
      std::clog << "logad: skipping line " << line.line_no << ": " << e.what() << "\n";
    }
  }
  for (std::size_t i = 0; i < events.size(); ++i) {
    events[i].variables = ExtractVariables(events[i].template_id, sources[i]->content);
  }
  return events;
}

std::vector<std::string> ParserState::ExtractVariables(TemplateId id,
                                                       std::string_view content) const {
  const LogTemplate& tmpl = at(id);
  std::vector<std::string> raw = SplitWhitespace(content);
  if (raw.size() != tmpl.tokens.size()) {
    throw Error(ErrorCode::kInvalidArgument, "token count differs from template");
  }
  std::vector<std::string> vars;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (tmpl.tokens[i] == kWildcard) vars.push_back(std::move(raw[i]));
  }
  return vars;
}

std::string ParserState::TemplatesTsv() const {
  std::string out;
  for (const auto& [id, tmpl] : templates_) {
    out += std::to_string(id);
    out.push_back('\t');
    out += tmpl.Render();
    out.push_back('\n');
  }
  return out;
}

std::string ParserState::SnapshotHash() const { return HexU64(Fnv1a64(TemplatesTsv())); }

void ParserState::Save(const std::filesystem::path& path) const {
  nlohmann::ordered_json doc;
  doc["format"] = "logad-parser-v1";
  nlohmann::ordered_json cfg;
  cfg["depth"] = config_.depth;
  cfg["similarity_threshold"] = config_.similarity_threshold;
  cfg["max_children"] = config_.max_children;
  nlohmann::ordered_json masks = nlohmann::ordered_json::array();
  for (const MaskRule& m : config_.masks) masks.push_back({{"name", m.name}, {"pattern", m.pattern}});
  cfg["masks"] = masks;
  doc["config"] = cfg;
  doc["next_id"] = next_id_;
  nlohmann::ordered_json tmpls = nlohmann::ordered_json::array();
  for (const auto& [id, t] : templates_) {
    tmpls.push_back({{"id", id}, {"tokens", t.tokens}, {"support", t.support_count}});
  }
  doc["templates"] = tmpls;
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const Node& n : nodes_) {
    nlohmann::ordered_json children = nlohmann::ordered_json::object();
    for (const auto& [tok, idx] : n.children) children[tok] = idx;
    nodes.push_back({{"children", children}, {"clusters", n.cluster_ids}});
  }
  doc["nodes"] = nodes;
  WriteFileAtomic(path, doc.dump() + "\n");
}

ParserState ParserState::Load(const std::filesystem::path& path) {
  const std::string text = ReadFile(path);
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    if (doc.at("format").get<std::string>() != "logad-parser-v1") {
      throw Error(ErrorCode::kFormatError, "not a parser state file");
    }
    const auto& cfg = doc.at("config");
    ParserConfig config;
    config.depth = cfg.at("depth").get<int>();
    config.similarity_threshold = cfg.at("similarity_threshold").get<double>();
    config.max_children = cfg.at("max_children").get<int>();
    config.masks.clear();
    for (const auto& m : cfg.at("masks")) {
      config.masks.push_back({m.at("name").get<std::string>(), m.at("pattern").get<std::string>()});
    }
    ParserState state(std::move(config));
    state.next_id_ = doc.at("next_id").get<TemplateId>();
    for (const auto& t : doc.at("templates")) {
      LogTemplate tmpl{t.at("id").get<TemplateId>(),
                       t.at("tokens").get<std::vector<std::string>>(),
                       t.at("support").get<std::int64_t>()};
      if (tmpl.tokens.empty() || tmpl.id >= state.next_id_) {
        throw Error(ErrorCode::kFormatError, "invalid template record");
      }
      state.templates_.emplace(tmpl.id, std::move(tmpl));
    }
    state.nodes_.clear();
    for (const auto& n : doc.at("nodes")) {
      Node node;
      for (const auto& [tok, idx] : n.at("children").items()) {
        node.children.emplace(tok, idx.get<std::size_t>());
      }
      node.cluster_ids = n.at("clusters").get<std::vector<TemplateId>>();
      state.nodes_.push_back(std::move(node));
    }
    if (state.nodes_.empty()) throw Error(ErrorCode::kFormatError, "missing root node");
    for (const Node& n : state.nodes_) {
      for (const auto& [tok, idx] : n.children) {
        if (idx == 0 || idx >= state.nodes_.size()) {
          throw Error(ErrorCode::kFormatError, "dangling tree edge");
        }
      }
      for (TemplateId id : n.cluster_ids) {
        if (!state.templates_.count(id)) throw Error(ErrorCode::kFormatError, "dangling cluster id");
      }
    }
    return state;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("parser state: ") + e.what());
  }
}

std::string FormatEventRecord(const ParsedEvent& event) {
  return std::to_string(event.line_no) + "\t" + std::to_string(event.template_id) + "\t" +
         nlohmann::json(event.variables).dump();
}

ParsedEvent ParseEventRecord(std::string_view record) {
  const std::vector<std::string> fields = SplitTabs(record);
  if (fields.size() != 3) throw Error(ErrorCode::kFormatError, "event record needs 3 fields");
  try {
    ParsedEvent event;
    event.line_no = std::stoll(fields[0]);
    event.template_id = std::stoi(fields[1]);
    event.variables = nlohmann::json::parse(fields[2]).get<std::vector<std::string>>();
    return event;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("event record: ") + e.what());
  }
}

}  // namespace logad
