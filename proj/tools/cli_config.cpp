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

#include "cli_config.hpp"

#include <fstream>
#include <sstream>

namespace cdenoise::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_config(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(number) + ": expected key=value");
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (key == "config") throw ConfigError("config files cannot include other config files");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

std::vector<std::string> splice_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("--config requires a path");
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    }
  }
  if (path.empty()) return args;

  std::ifstream file(path);
  if (!file) throw ConfigError("cannot read config file " + path);
  std::stringstream buffer;
  buffer << file.rdbuf();
  const auto pairs = parse_config(buffer.str());

  std::size_t sub = 1;
  while (sub < args.size() && args[sub].rfind("-", 0) == 0) ++sub;
  if (sub >= args.size()) return args;
  std::vector<std::string> injected;
  for (const auto& [key, value] : pairs) injected.push_back("--" + key + "=" + value);
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub + 1), injected.begin(),
              injected.end());
  return args;
}

}  // namespace cdenoise::cli
