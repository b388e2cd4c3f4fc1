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

#include <iosfwd>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace hyperwave {

/// Binary matrix container:
///   bytes 0..5   magic "HWAV1\0"
///   u64 LE       rows
///   u64 LE       cols
///   f64 LE       rows * cols values, row-major
inline constexpr std::string_view kMatrixMagic{"HWAV1\0", 6};

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m);
void write_matrix_file(const std::string& path, const Eigen::MatrixXd& m);

/// Throws FormatError on bad magic, truncation or trailing bytes.
Eigen::MatrixXd read_matrix(std::istream& in);
Eigen::MatrixXd read_matrix_file(const std::string& path);

}  // namespace hyperwave
