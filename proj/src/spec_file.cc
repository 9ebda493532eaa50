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

#include "logad/spec_file.h"

#include <charconv>
#include <cstdlib>

#include "logad/error.h"
#include "logad/io_util.h"

namespace logad {
namespace {

std::string_view Trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

[[noreturn]] void BadValue(const std::string& key, const std::string& value, const char* kind) {
  throw Error(ErrorCode::kConfigError, "key '" + key + "' expects " + kind + ", got '" + value + "'");
}

}  // namespace

SpecFile SpecFile::Parse(std::string_view text) {
  SpecFile spec;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = Trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfigError, "line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key(Trim(line.substr(0, eq)));
    if (key.empty()) {
      throw Error(ErrorCode::kConfigError, "line " + std::to_string(line_no) + ": empty key");
    }
    if (spec.values_.count(key) > 0) {
      throw Error(ErrorCode::kConfigError, "duplicate key '" + key + "'");
    }
    spec.values_[key] = std::string(Trim(line.substr(eq + 1)));
  }
  return spec;
}

SpecFile SpecFile::Load(const std::filesystem::path& path) { return Parse(ReadFile(path)); }

void SpecFile::RejectUnknown(const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : values_) {
    if (allowed.count(key) == 0) throw Error(ErrorCode::kConfigError, "unknown key '" + key + "'");
  }
}

std::string SpecFile::GetString(const std::string& key, std::string fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double SpecFile::GetDouble(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) BadValue(key, v, "a number");
  return out;
}

std::int64_t SpecFile::GetInt(const std::string& key, std::int64_t fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) BadValue(key, v, "an integer");
  return out;
}

std::uint64_t SpecFile::GetUint(const std::string& key, std::uint64_t fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    BadValue(key, v, "a non-negative integer");
  }
  return out;
}

bool SpecFile::GetBool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  BadValue(key, it->second, "true or false");
}

}  // namespace logad
