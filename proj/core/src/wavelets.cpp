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

#include "hyperwave/wavelets.hpp"

#include <string>

#include "hyperwave/error.hpp"

namespace hyperwave {

ScaleSequence::ScaleSequence(std::vector<std::size_t> scales)
    : scales_(std::move(scales)) {
  if (scales_.size() < 2) {
    fail(ErrorCode::kInvalidScales, "need at least s_0 and s_1 (J >= 1)");
  }
  if (scales_[0] != 0 || scales_[1] != 1) {
    fail(ErrorCode::kInvalidScales, "scales must start with 0, 1");
  }
  for (std::size_t i = 1; i < scales_.size(); ++i) {
    if (scales_[i] < scales_[i - 1]) {
      fail(ErrorCode::kInvalidScales,
           "scales must be nondecreasing (position " + std::to_string(i) + ")");
    }
  }
}

ScaleSequence dyadic_scales(std::size_t J) {
  if (J == 0) fail(ErrorCode::kInvalidJ, "J must be at least 1");
  if (J > 40) fail(ErrorCode::kInvalidJ, "J = " + std::to_string(J) + " is too large");
  std::vector<std::size_t> s{0};
  for (std::size_t i = 0; i < J; ++i) s.push_back(std::size_t{1} << i);
  return ScaleSequence(std::move(s));
}

WaveletCoefficients::WaveletCoefficients(Eigen::MatrixXd flat,
                                         std::size_t block_cols)
    : flat_(std::move(flat)),
      block_cols_(block_cols),
      num_blocks_(block_cols == 0
                      ? 0
                      : static_cast<std::size_t>(flat_.cols()) / block_cols) {}

WaveletCoefficients wavelet_transform(const DiffusionOperator& op,
                                      const SignalMatrix& x,
                                      const ScaleSequence& scales) {
  if (x.rows() != op.dim()) {
    fail(ErrorCode::kDimensionMismatch,
         "signal has " + std::to_string(x.rows()) + " rows, operator expects " +
             std::to_string(op.dim()));
  }
  const std::size_t J = scales.J();
  const auto rows = static_cast<Eigen::Index>(x.rows());
  const auto cols = static_cast<Eigen::Index>(x.cols());
  Eigen::MatrixXd flat(rows, static_cast<Eigen::Index>(J + 1) * cols);

  // cur holds P^t x; prev_scale holds P^{s_i} x for the open band.
  Eigen::MatrixXd cur = x.values();
  Eigen::MatrixXd next;
  Eigen::MatrixXd prev_scale = cur;
  std::size_t t = 0;
  for (std::size_t i = 0; i < J; ++i) {
    while (t < scales[i + 1]) {
      op.apply_into(cur, next);
      std::swap(cur, next);
      ++t;
    }
    flat.middleCols(static_cast<Eigen::Index>(i) * cols, cols) = prev_scale - cur;
    prev_scale = cur;
  }
  flat.middleCols(static_cast<Eigen::Index>(J) * cols, cols) = cur;
  return WaveletCoefficients(std::move(flat), static_cast<std::size_t>(cols));
}

OperationCount transform_count(const ScaleSequence& scales, std::size_t n_signals,
                               std::size_t nnz, std::size_t rows) {
  OperationCount c;
  c.multiply_adds = 2 * nnz * scales.max_scale() * n_signals;
  c.subtractions = rows * scales.J() * n_signals;
  return c;
}

}  // namespace hyperwave
