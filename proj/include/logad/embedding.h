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

#ifndef LOGAD_EMBEDDING_H_
#define LOGAD_EMBEDDING_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "logad/parser.h"

namespace logad {

// A template's position in embedding space. Length equals the owning
// store's dimension; entries are finite.
using EmbeddingVector = std::vector<double>;

struct StoreEntry {
  std::string template_text;
  EmbeddingVector vector;

  bool operator==(const StoreEntry&) const = default;
};

class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  EmbeddingStore(std::size_t dim, std::string model_name, std::string parser_hash = "");

  std::size_t dim() const { return dim_; }
  const std::string& model_name() const { return model_name_; }
  const std::string& parser_hash() const { return parser_hash_; }
  void set_parser_hash(std::string hash) { parser_hash_ = std::move(hash); }

  // Throws kDimMismatch on wrong length, kNumericError on non-finite values.
  void Insert(TemplateId id, std::string template_text, EmbeddingVector vector);

  bool Contains(TemplateId id) const { return entries_.count(id) > 0; }
  const StoreEntry& at(TemplateId id) const;
  const std::map<TemplateId, StoreEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Restriction to the given ids; missing ids throw kInvalidArgument.
  EmbeddingStore Subset(std::span<const TemplateId> ids) const;

  bool operator==(const EmbeddingStore&) const = default;

 private:
  std::size_t dim_ = 0;
  std::string model_name_;
  std::string parser_hash_;
  std::map<TemplateId, StoreEntry> entries_;
};

struct MatchResult {
  TemplateId template_id = 0;
  double distance = 0.0;
};

// 1 - a.b / (|a||b|), clamped to [0, 2].
double CosineDistance(std::span<const double> a, std::span<const double> b);

// Closest stored template (lowest id on ties); nullopt when the minimum
// distance exceeds max_distance. Throws kEmptyStore.
std::optional<MatchResult> NearestTemplate(std::span<const double> query,
                                           const EmbeddingStore& store,
                                           double max_distance);

// Deterministic stand-in for a pre-trained sentence encoder. Each token maps
// to a pseudo-random unit vector seeded by (token, seed); the template vector
// is the normalized position-weighted sum with weight 1 / (1 + pos / len).
EmbeddingVector EmbedFallback(std::span<const std::string> tokens, std::size_t dim,
                              std::uint64_t seed);
EmbeddingVector EmbedFallback(const LogTemplate& tmpl, std::size_t dim, std::uint64_t seed);

// Store for every template of a parser snapshot, tagged with its hash.
EmbeddingStore EmbedAllFallback(const ParserState& parser, std::size_t dim,
                                std::uint64_t seed);

// "logvec-v1" text format: one JSON header line, then one record per line.
std::string SerializeStore(const EmbeddingStore& store);
EmbeddingStore DeserializeStore(std::string_view text);
void SaveStore(const EmbeddingStore& store, const std::filesystem::path& path);
EmbeddingStore LoadStore(const std::filesystem::path& path);

}  // namespace logad

#endif  // LOGAD_EMBEDDING_H_
