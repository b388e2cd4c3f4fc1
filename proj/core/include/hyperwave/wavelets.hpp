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
#include <vector>

#include <Eigen/Dense>

#include "hyperwave/diffusion.hpp"

namespace hyperwave {

/// Diffusion scales s_0 = 0, s_1 = 1, ..., s_J, nondecreasing, J >= 1.
///
/// Equal consecutive scales are allowed; the corresponding band-pass block
/// is identically zero.
class ScaleSequence {
 public:
  /// Throws InvalidScales when the invariants do not hold.
  explicit ScaleSequence(std::vector<std::size_t> scales);

  const std::vector<std::size_t>& scales() const { return scales_; }
  std::size_t J() const { return scales_.size() - 1; }
  std::size_t max_scale() const { return scales_.back(); }
  std::size_t operator[](std::size_t i) const { return scales_[i]; }

  bool operator==(const ScaleSequence&) const = default;

 private:
  std::vector<std::size_t> scales_;
};

/// (0, 1, 2, 4, ..., 2^(J-1)). Throws InvalidJ for J = 0.
ScaleSequence dyadic_scales(std::size_t J);

/// Output of the filter bank: J band-pass blocks then the low-pass block.
///
/// Stored as one rows x (J+1)*cols matrix whose column blocks are
/// [Psi_0 x | ... | Psi_{J-1} x | Phi_J x]; block(i) is a view into it.
class WaveletCoefficients {
 public:
  WaveletCoefficients(Eigen::MatrixXd flat, std::size_t block_cols);

  std::size_t num_blocks() const { return num_blocks_; }
  std::size_t rows() const { return static_cast<std::size_t>(flat_.rows()); }
  std::size_t block_cols() const { return block_cols_; }

  auto block(std::size_t i) const {
    return flat_.middleCols(static_cast<Eigen::Index>(i * block_cols_),
                            static_cast<Eigen::Index>(block_cols_));
  }
  const Eigen::MatrixXd& flattened() const { return flat_; }
  Eigen::MatrixXd release() && { return std::move(flat_); }

 private:
  Eigen::MatrixXd flat_;
  std::size_t block_cols_;
  std::size_t num_blocks_;
};

/// Applies the filter bank W_J to every column of x. Powers P^t x are
/// produced once by a cursor over t = 0..s_J, so exactly s_J operator
/// applications are made regardless of J. Throws DimensionMismatch.
WaveletCoefficients wavelet_transform(const DiffusionOperator& op,
                                      const SignalMatrix& x,
                                      const ScaleSequence& scales);

struct OperationCount {
  std::size_t multiply_adds = 0;
  std::size_t subtractions = 0;

  std::size_t total() const { return multiply_adds + subtractions; }
};

/// Predicted arithmetic for wavelet_transform: 2 nnz(H) multiply-adds per
/// application per signal and one length-`rows` subtraction per band-pass
/// block per signal.
OperationCount transform_count(const ScaleSequence& scales, std::size_t n_signals,
                               std::size_t nnz, std::size_t rows);

}  // namespace hyperwave
