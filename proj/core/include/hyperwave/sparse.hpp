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
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hyperwave {

using index_t = std::uint32_t;

/// Compressed sparse row matrix with owned storage.
///
/// Column indices inside a row are kept sorted; values are stored
/// explicitly even for 0/1 patterns so the same kernel serves weighted and
/// unweighted operators.
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr;  // size rows + 1
  std::vector<index_t> col_idx;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }

  std::span<const index_t> row_indices(std::size_t r) const {
    return {col_idx.data() + row_ptr[r], row_ptr[r + 1] - row_ptr[r]};
  }
  std::span<const double> row_values(std::size_t r) const {
    return {values.data() + row_ptr[r], row_ptr[r + 1] - row_ptr[r]};
  }

  /// y = A * x
  void multiply(std::span<const double> x, std::span<double> y) const;

  /// Same pattern with rows and columns swapped.
  CsrMatrix transposed() const;

  Eigen::MatrixXd to_dense() const;

  /// Builds from per-row column lists; each list must be sorted and unique.
  static CsrMatrix from_rows(std::size_t cols,
                             const std::vector<std::vector<index_t>>& rows,
                             double fill = 1.0);
};

bool same_pattern(const CsrMatrix& a, const CsrMatrix& b);

}  // namespace hyperwave
