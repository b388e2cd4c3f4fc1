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

#include "hyperwave/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "hyperwave/csv.hpp"
#include "hyperwave/error.hpp"

namespace hyperwave {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Drops a trailing '#' comment that is not inside a string.
std::string strip_comment(const std::string& s) {
  bool in_str = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_str = !in_str;
    if (s[i] == '#' && !in_str) return s.substr(0, i);
  }
  return s;
}

bool is_bare_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
      return false;
    }
  }
  return true;
}

std::optional<std::string> unquote(const std::string& raw) {
  if (raw.size() < 2 || raw.front() != '"' || raw.back() != '"') return std::nullopt;
  std::string out;
  for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
    if (raw[i] == '\\' && i + 2 < raw.size()) {
      const char n = raw[++i];
      out.push_back(n == 'n' ? '\n' : n == 't' ? '\t' : n);
    } else {
      out.push_back(raw[i]);
    }
  }
  return out;
}

std::optional<std::vector<std::string>> split_array(const std::string& raw) {
  if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']') return std::nullopt;
  std::vector<std::string> items;
  std::string cur;
  bool in_str = false;
  for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
    const char c = raw[i];
    if (c == '"' && (i == 0 || raw[i - 1] != '\\')) in_str = !in_str;
    if (c == ',' && !in_str) {
      items.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  const std::string last = trim(cur);
  if (!last.empty()) items.push_back(last);
  for (const auto& it : items) {
    if (it.empty()) return std::nullopt;
  }
  return items;
}

std::optional<std::int64_t> to_int(const std::string& s) {
  std::int64_t v = 0;
  const char* b = s.data();
  if (!s.empty() && s.front() == '+') ++b;
  const auto res = std::from_chars(b, s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> to_double(const std::string& s) {
  try {
    return parse_double(s, "config");
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

ConfigDocument ConfigDocument::parse(const std::string& text, const std::string& origin) {
  ConfigDocument doc;
  doc.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  std::size_t lineno = 0;
  auto error = [&](const std::string& what) {
    fail(ErrorCode::kConfigError, origin + ":" + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') error("malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (!is_bare_key(section)) error("bad section name '" + section + "'");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) error("expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (!is_bare_key(key)) error("bad key '" + key + "'");
    if (value.empty()) error("missing value for '" + key + "'");
    const std::string full = section.empty() ? key : section + "." + key;
    if (doc.values_.count(full)) error("duplicate key '" + full + "'");
    doc.values_[full] = Entry{value, lineno};
  }
  return doc;
}

ConfigDocument ConfigDocument::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kConfigError, "cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::vector<std::string> ConfigDocument::keys_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& [k, _] : values_) {
    if (k.compare(0, prefix.size(), prefix) == 0) out.push_back(k);
  }
  return out;
}

const ConfigDocument::Entry* ConfigDocument::find(const std::string& key) {
  const auto it = values_.find(key);
  if (it == values_.end()) return nullptr;
  consumed_.insert(key);
  return &it->second;
}

void ConfigDocument::bad(const std::string& key, const Entry& e, const char* want) const {
  fail(ErrorCode::kConfigError, origin_ + ":" + std::to_string(e.line) + ": '" + key +
                                    "' must be " + want + ", got " + e.raw);
}

std::optional<std::string> ConfigDocument::get_string(const std::string& key) {
  const Entry* e = find(key);
  if (!e) return std::nullopt;
  auto s = unquote(e->raw);
  if (!s) bad(key, *e, "a quoted string");
  return s;
}

std::optional<std::int64_t> ConfigDocument::get_int(const std::string& key) {
  const Entry* e = find(key);
  if (!e) return std::nullopt;
  auto v = to_int(e->raw);
  if (!v) bad(key, *e, "an integer");
  return v;
}

std::optional<std::size_t> ConfigDocument::get_size(const std::string& key) {
  const Entry* e = find(key);
  if (!e) return std::nullopt;
  auto v = to_int(e->raw);
  if (!v || *v < 0) bad(key, *e, "a nonnegative integer");
  return static_cast<std::size_t>(*v);
}

std::optional<double> ConfigDocument::get_double(const std::string& key) {
  const Entry* e = find(key);
  if (!e) return std::nullopt;
  auto v = to_double(e->raw);
  if (!v) bad(key, *e, "a number");
  return v;
}

std::optional<bool> ConfigDocument::get_bool(const std::string& key) {
  const Entry* e = find(key);
  if (!e) return std::nullopt;
  if (e->raw == "true") return true;
  if (e->raw == "false") return false;
  bad(key, *e, "true or false");
}

std::optional<std::vector<std::string>> ConfigDocument::get_string_list(const std::string& key) {
  const Entry* e = find(key);
  if (!e) return std::nullopt;
  auto items = split_array(e->raw);
  if (!items) bad(key, *e, "an array of strings");
  std::vector<std::string> out;
  for (const auto& it : *items) {
    auto s = unquote(it);
    if (!s) bad(key, *e, "an array of strings");
    out.push_back(*s);
  }
  return out;
}

std::optional<std::vector<std::int64_t>> ConfigDocument::get_int_list(const std::string& key) {
  const Entry* e = find(key);
  if (!e) return std::nullopt;
  auto items = split_array(e->raw);
  if (!items) bad(key, *e, "an array of integers");
  std::vector<std::int64_t> out;
  for (const auto& it : *items) {
    auto v = to_int(it);
    if (!v) bad(key, *e, "an array of integers");
    out.push_back(*v);
  }
  return out;
}

std::optional<std::vector<double>> ConfigDocument::get_double_list(const std::string& key) {
  const Entry* e = find(key);
  if (!e) return std::nullopt;
  auto items = split_array(e->raw);
  if (!items) bad(key, *e, "an array of numbers");
  std::vector<double> out;
  for (const auto& it : *items) {
    auto v = to_double(it);
    if (!v) bad(key, *e, "an array of numbers");
    out.push_back(*v);
  }
  return out;
}

void ConfigDocument::finish() const {
  for (const auto& [k, e] : values_) {
    if (!consumed_.count(k)) {
      fail(ErrorCode::kConfigError,
           origin_ + ":" + std::to_string(e.line) + ": unknown key '" + k + "'");
    }
  }
}

}  // namespace hyperwave
