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

#include "logad/embedding.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "logad/error.h"
#include "logad/io_util.h"
#include "logad/random.h"

namespace logad {
namespace {

double Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void Normalize(EmbeddingVector& v) {
  const double n = Norm(v);
  if (n > 0.0) {
    for (double& x : v) x /= n;
  }
}

EmbeddingVector TokenVector(const std::string& token, std::size_t dim, std::uint64_t seed) {
  Rng rng(Rng::Mix(Fnv1a64(token) ^ Rng::Mix(seed)));
  EmbeddingVector v(dim);
  for (double& x : v) x = rng.normal();
  Normalize(v);
  return v;
}

}  // namespace

EmbeddingStore::EmbeddingStore(std::size_t dim, std::string model_name, std::string parser_hash)
    : dim_(dim), model_name_(std::move(model_name)), parser_hash_(std::move(parser_hash)) {
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "embedding dim must be positive");
}

void EmbeddingStore::Insert(TemplateId id, std::string template_text, EmbeddingVector vector) {
  if (vector.size() != dim_) {
    throw Error(ErrorCode::kDimMismatch, "vector for template " + std::to_string(id) +
                                             " has length " + std::to_string(vector.size()) +
                                             ", store dim is " + std::to_string(dim_));
  }
  for (double x : vector) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kNumericError, "non-finite embedding value");
  }
  entries_.insert_or_assign(id, StoreEntry{std::move(template_text), std::move(vector)});
}

const StoreEntry& EmbeddingStore::at(TemplateId id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) {
    throw Error(ErrorCode::kInvalidArgument, "template " + std::to_string(id) + " not in store");
  }
  return it->second;
}

EmbeddingStore EmbeddingStore::Subset(std::span<const TemplateId> ids) const {
  EmbeddingStore out(dim_, model_name_, parser_hash_);
  for (TemplateId id : ids) {
    const StoreEntry& e = at(id);
    out.entries_.emplace(id, e);
  }
  return out;
}

double CosineDistance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kShapeMismatch, "cosine distance of unequal dims");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::kZeroVector, "cosine distance of zero vector");
  const double d = 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(d, 0.0, 2.0);
}

std::optional<MatchResult> NearestTemplate(std::span<const double> query,
                                           const EmbeddingStore& store,
                                           double max_distance) {
  if (store.empty()) throw Error(ErrorCode::kEmptyStore, "nearest template on empty store");
  MatchResult best{0, std::numeric_limits<double>::infinity()};
  for (const auto& [id, entry] : store.entries()) {
    const double d = CosineDistance(query, entry.vector);
    if (d < best.distance) best = {id, d};
  }
  if (best.distance > max_distance) return std::nullopt;
  return best;
}

EmbeddingVector EmbedFallback(std::span<const std::string> tokens, std::size_t dim,
                              std::uint64_t seed) {
  if (dim < 4) throw Error(ErrorCode::kInvalidArgument, "fallback embedding needs dim >= 4");
  if (tokens.empty()) throw Error(ErrorCode::kInvalidArgument, "empty template");
  EmbeddingVector sum(dim, 0.0);
  const double len = static_cast<double>(tokens.size());
  for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
    const double weight = 1.0 / (1.0 + static_cast<double>(pos) / len);
    const EmbeddingVector tv = TokenVector(tokens[pos], dim, seed);
    for (std::size_t i = 0; i < dim; ++i) sum[i] += weight * tv[i];
  }
  Normalize(sum);
  return sum;
}

EmbeddingVector EmbedFallback(const LogTemplate& tmpl, std::size_t dim, std::uint64_t seed) {
  return EmbedFallback(std::span<const std::string>(tmpl.tokens), dim, seed);
}

EmbeddingStore EmbedAllFallback(const ParserState& parser, std::size_t dim, std::uint64_t seed) {
  EmbeddingStore store(dim, "fallback-hash-v1", parser.SnapshotHash());
  for (const auto& [id, tmpl] : parser.templates()) {
    store.Insert(id, tmpl.Render(), EmbedFallback(tmpl, dim, seed));
  }
  return store;
}

std::string SerializeStore(const EmbeddingStore& store) {
  nlohmann::ordered_json header;
  header["format"] = "logvec-v1";
  header["dim"] = store.dim();
  header["model"] = store.model_name();
  header["parser_hash"] = store.parser_hash();
  header["count"] = store.size();
  std::string out = header.dump();
  out.push_back('\n');
  for (const auto& [id, entry] : store.entries()) {
    out += "{\"template_id\":" + std::to_string(id) +
           ",\"template\":" + nlohmann::json(entry.template_text).dump() + ",\"vector\":[";
    for (std::size_t i = 0; i < entry.vector.size(); ++i) {
      if (i > 0) out.push_back(',');
      out += FormatDouble17(entry.vector[i]);
    }
    out += "]}\n";
  }
  return out;
}

EmbeddingStore DeserializeStore(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kFormatError, "logvec: missing header");
  try {
    const nlohmann::json header = nlohmann::json::parse(line);
    if (header.at("format").get<std::string>() != "logvec-v1") {
      throw Error(ErrorCode::kFormatError, "logvec: unsupported format");
    }
    const std::size_t dim = header.at("dim").get<std::size_t>();
    const std::size_t count = header.at("count").get<std::size_t>();
    std::string hash;
    if (header.contains("parser_hash") && header["parser_hash"].is_string()) {
      hash = header["parser_hash"].get<std::string>();
    }
    EmbeddingStore store(dim, header.at("model").get<std::string>(), hash);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const nlohmann::json rec = nlohmann::json::parse(line);
      std::vector<double> vec = rec.at("vector").get<std::vector<double>>();
      if (vec.size() != dim) {
        throw Error(ErrorCode::kFormatError, "logvec: row " + std::to_string(rows) +
                                                 " has " + std::to_string(vec.size()) +
                                                 " values, header dim " + std::to_string(dim));
      }
      const TemplateId id = rec.at("template_id").get<TemplateId>();
      if (store.Contains(id)) throw Error(ErrorCode::kFormatError, "logvec: duplicate template id");
      store.Insert(id, rec.at("template").get<std::string>(), std::move(vec));
      ++rows;
    }
    if (rows != count) {
      throw Error(ErrorCode::kFormatError, "logvec: header count " + std::to_string(count) +
                                               " but " + std::to_string(rows) + " rows");
    }
    return store;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("logvec: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kFormatError) throw;
    throw Error(ErrorCode::kFormatError, e.what());
  }
}

void SaveStore(const EmbeddingStore& store, const std::filesystem::path& path) {
  WriteFileAtomic(path, SerializeStore(store));
}

EmbeddingStore LoadStore(const std::filesystem::path& path) {
  return DeserializeStore(ReadFile(path));
}

}  // namespace logad
