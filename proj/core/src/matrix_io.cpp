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

#include "hyperwave/matrix_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "hyperwave/error.hpp"

namespace hyperwave {

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b.data(), 8);
}

std::uint64_t get_u64(std::istream& in, const char* what) {
  std::array<unsigned char, 8> b;
  if (!in.read(reinterpret_cast<char*>(b.data()), 8)) {
    fail(ErrorCode::kFormatError, std::string("truncated matrix file reading ") + what);
  }
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
  return v;
}

}  // namespace

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  out.write(kMatrixMagic.data(), static_cast<std::streamsize>(kMatrixMagic.size()));
  put_u64(out, static_cast<std::uint64_t>(m.rows()));
  put_u64(out, static_cast<std::uint64_t>(m.cols()));
  std::vector<char> row(static_cast<std::size_t>(m.cols()) * 8);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const auto bits = std::bit_cast<std::uint64_t>(m(i, j));
      for (int b = 0; b < 8; ++b) {
        row[static_cast<std::size_t>(j) * 8 + static_cast<std::size_t>(b)] =
            static_cast<char>((bits >> (8 * b)) & 0xFF);
      }
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!out) fail(ErrorCode::kIoError, "failed writing matrix");
}

void write_matrix_file(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoError, "cannot create " + path);
  write_matrix(out, m);
}

Eigen::MatrixXd read_matrix(std::istream& in) {
  std::array<char, 6> magic{};
  if (!in.read(magic.data(), 6) ||
      std::string_view(magic.data(), magic.size()) != kMatrixMagic) {
    fail(ErrorCode::kFormatError, "bad magic bytes (expected HWAV1\\0)");
  }
  const std::uint64_t rows = get_u64(in, "rows");
  const std::uint64_t cols = get_u64(in, "cols");
  if (cols != 0 && rows > (std::uint64_t{1} << 40) / cols) {
    fail(ErrorCode::kFormatError, "implausible matrix shape");
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::vector<unsigned char> row(static_cast<std::size_t>(cols) * 8);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (!in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size()))) {
      fail(ErrorCode::kFormatError, "truncated matrix payload at row " + std::to_string(i));
    }
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::uint64_t v = 0;
      for (int b = 7; b >= 0; --b) {
        v = (v << 8) | row[static_cast<std::size_t>(j) * 8 + static_cast<std::size_t>(b)];
      }
      m(i, j) = std::bit_cast<double>(v);
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    fail(ErrorCode::kFormatError, "trailing bytes after matrix payload");
  }
  return m;
}

Eigen::MatrixXd read_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path);
  return read_matrix(in);
}

}  // namespace hyperwave
