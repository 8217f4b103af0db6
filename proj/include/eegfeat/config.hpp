// Copyright 2026 The eegfeat Authors.
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

#ifndef EEGFEAT_CONFIG_HPP
#define EEGFEAT_CONFIG_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace eegfeat {

// Flat `key = value` settings. Lines starting with '#' are comments. Later
// assignments override earlier ones, so command-line overrides are applied
// with set() after load().
class Config {
 public:
  Config() = default;

  static Config load(const std::filesystem::path& path);
  static Config parse(const std::string& text, const std::string& origin = "<string>");

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key, long fallback) const;
  /// Comma-separated reals, e.g. `10,50`.
  std::vector<double> get_doubles(const std::string& key,
                                  const std::vector<double>& fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Strict full-string conversion; throws ParseError naming `what`.
double parse_double(const std::string& text, const std::string& what);
long parse_long(const std::string& text, const std::string& what);

}  // namespace eegfeat

#endif  // EEGFEAT_CONFIG_HPP
