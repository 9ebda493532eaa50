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

#ifndef LOGAD_IO_UTIL_H_
#define LOGAD_IO_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace logad {

std::string ReadFile(const std::filesystem::path& path);
std::vector<std::string> ReadLines(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view data);

std::vector<std::string> SplitTabs(std::string_view line);
std::vector<std::string> SplitWhitespace(std::string_view text);
std::string JoinTokens(const std::vector<std::string>& tokens);

std::uint64_t Fnv1a64(std::string_view data, std::uint64_t basis = 0xcbf29ce484222325ULL);
std::string HexU64(std::uint64_t value);

// Shortest "%.17g" rendering; parses back to the identical double.
std::string FormatDouble17(double value);

}  // namespace logad

#endif  // LOGAD_IO_UTIL_H_
