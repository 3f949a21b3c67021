// Copyright (c) the cdenoise authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cdenoise::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses "key=value" lines; blank lines and lines starting with '#' are skipped.
std::vector<std::pair<std::string, std::string>> parse_config(const std::string& text);

// If args contain "--config PATH" (or "--config=PATH"), splices the file's
// pairs in as "--key=value" tokens right after the subcommand, so that
// explicit flags, which come later, take precedence.
std::vector<std::string> splice_config(std::vector<std::string> args);

}  // namespace cdenoise::cli
