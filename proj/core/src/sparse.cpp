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

#include "hyperwave/sparse.hpp"

#include <algorithm>

namespace hyperwave {

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  const double* xv = x.data();
  for (std::size_t i = 0; i < rows; ++i) {
    double sum = 0.0;
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      sum += values[k] * xv[col_idx[k]];
    }
    y[i] = sum;
  }
}

CsrMatrix CsrMatrix::transposed() const {
  CsrMatrix t;
  t.rows = cols;
  t.cols = rows;
  t.row_ptr.assign(cols + 1, 0);
  for (index_t c : col_idx) ++t.row_ptr[c + 1];
  for (std::size_t c = 0; c < cols; ++c) t.row_ptr[c + 1] += t.row_ptr[c];
  t.col_idx.resize(nnz());
  t.values.resize(nnz());
  std::vector<std::size_t> cursor(t.row_ptr.begin(), t.row_ptr.end() - 1);
  // Row-ordered scan keeps the transposed column indices sorted.
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      const std::size_t dst = cursor[col_idx[k]]++;
      t.col_idx[dst] = static_cast<index_t>(r);
      t.values[dst] = values[k];
    }
  }
  return t;
}

Eigen::MatrixXd CsrMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows),
                                            static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      d(static_cast<Eigen::Index>(r), col_idx[k]) += values[k];
    }
  }
  return d;
}

CsrMatrix CsrMatrix::from_rows(std::size_t cols,
                               const std::vector<std::vector<index_t>>& rows,
                               double fill) {
  CsrMatrix m;
  m.rows = rows.size();
  m.cols = cols;
  m.row_ptr.reserve(rows.size() + 1);
  m.row_ptr.push_back(0);
  std::size_t total = 0;
  for (const auto& r : rows) total += r.size();
  m.col_idx.reserve(total);
  for (const auto& r : rows) {
    m.col_idx.insert(m.col_idx.end(), r.begin(), r.end());
    m.row_ptr.push_back(m.col_idx.size());
  }
  m.values.assign(total, fill);
  return m;
}

bool same_pattern(const CsrMatrix& a, const CsrMatrix& b) {
  return a.rows == b.rows && a.cols == b.cols && a.row_ptr == b.row_ptr &&
         a.col_idx == b.col_idx && a.values == b.values;
}

}  // namespace hyperwave
