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
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hyperwave {

struct CsvRow {
  std::size_t line = 0;  // 1-based source line
  std::vector<std::string> fields;
};

/// RFC 4180-style reader: comma separated, double-quoted fields may hold
/// commas, quotes ("") and newlines. A UTF-8 BOM is skipped. Blank lines are
/// ignored. Throws ParseError with line and column.
std::vector<CsvRow> read_csv(std::istream& in);
std::vector<CsvRow> read_csv_file(const std::string& path);

std::string csv_escape(std::string_view field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Strict numeric parse of a whole field. Throws ParseError naming `where`.
double parse_double(std::string_view text, std::string_view where);

}  // namespace hyperwave
