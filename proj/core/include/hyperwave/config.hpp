// Copyright 2026 The Hyperwave Authors.
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hyperwave {

/// Minimal TOML-style key/value document.
///
///   # comment
///   [section]
///   key = "string" | 12 | 1.5e-3 | true | [1, 2, 3] | ["a", "b"]
///
/// Keys are addressed as "section.key". Every key must be read exactly
/// through one of the getters; finish() rejects anything left unread so a
/// typo in a config file is an error rather than a silent default.
class ConfigDocument {
 public:
  /// Throws ConfigError with the offending line.
  static ConfigDocument parse(const std::string& text, const std::string& origin = "<config>");
  static ConfigDocument load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  std::optional<std::string> get_string(const std::string& key);
  std::optional<std::int64_t> get_int(const std::string& key);
  std::optional<std::size_t> get_size(const std::string& key);
  std::optional<double> get_double(const std::string& key);
  std::optional<bool> get_bool(const std::string& key);
  std::optional<std::vector<std::string>> get_string_list(const std::string& key);
  std::optional<std::vector<std::int64_t>> get_int_list(const std::string& key);
  std::optional<std::vector<double>> get_double_list(const std::string& key);

  /// Throws ConfigError naming any key that was never read.
  void finish() const;

  const std::string& origin() const { return origin_; }

 private:
  struct Entry {
    std::string raw;
    std::size_t line = 0;
  };
  const Entry* find(const std::string& key);
  [[noreturn]] void bad(const std::string& key, const Entry& e, const char* want) const;

  std::map<std::string, Entry> values_;
  std::set<std::string> consumed_;
  std::string origin_;
};

}  // namespace hyperwave
