// Copyright 2026 The socnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SOCNAV_LOG_IO_HPP
#define SOCNAV_LOG_IO_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "socnav/engine.hpp"

namespace socnav {

/// Episode logs are JSON lines: one "header" record (units, config and
/// scenario echo, static geometry), one "step" record per robot decision,
/// one "footer" record with the outcome. Doubles round-trip exactly.
inline constexpr int kLogSchema = 1;

class LogParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string serialize_log(const EpisodeLog& log);
/// Throws LogParseError naming the offending record (line number and
/// record type) on malformed or truncated input.
EpisodeLog parse_log(std::string_view text);

/// Writes via a sibling temporary file and rename(2). Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace socnav

#endif  // SOCNAV_LOG_IO_HPP
