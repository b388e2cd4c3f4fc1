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

#include "hyperwave/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <system_error>

#include "hyperwave/error.hpp"

namespace hyperwave {

std::vector<CsvRow> read_csv(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  if (text.compare(0, 3, "\xEF\xBB\xBF") == 0) pos = 3;

  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  std::size_t line = 1, col = 1;
  row.line = 1;
  bool in_quotes = false, quoted = false, any = false;

  auto end_field = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
    quoted = false;
  };
  auto end_row = [&] {
    end_field();
    const bool blank = row.fields.size() == 1 && row.fields[0].empty() && !any;
    if (!blank) rows.push_back(std::move(row));
    row = CsvRow{};
    row.line = line;
    any = false;
  };

  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (in_quotes) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field.push_back('"');
          ++pos;
          ++col;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') {
          ++line;
          col = 0;
        }
        field.push_back(c);
      }
      ++col;
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || quoted) {
          fail(ErrorCode::kParseError, "unexpected quote at line " + std::to_string(line) +
                                           ", column " + std::to_string(col));
        }
        in_quotes = quoted = any = true;
        break;
      case ',':
        end_field();
        any = true;
        break;
      case '\r':
        break;
      case '\n':
        ++line;
        end_row();
        col = 0;
        break;
      default:
        if (quoted) {
          fail(ErrorCode::kParseError, "text after closing quote at line " +
                                           std::to_string(line) + ", column " +
                                           std::to_string(col));
        }
        field.push_back(c);
        any = true;
    }
    ++col;
  }
  if (in_quotes) {
    fail(ErrorCode::kParseError, "unterminated quoted field at line " + std::to_string(line));
  }
  if (any || !field.empty()) end_row();
  return rows;
}

std::vector<CsvRow> read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path);
  try {
    return read_csv(in);
  } catch (const Error& e) {
    fail(e.code(), path + ": " + e.what());
  }
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(fields[i]);
  }
  out << '\n';
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::string_view where) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    fail(ErrorCode::kParseError,
         std::string(where) + ": cannot parse '" + std::string(text) + "' as a number");
  }
  return v;
}

}  // namespace hyperwave
