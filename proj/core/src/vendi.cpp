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

#include "hyperwave/eval.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hyperwave/error.hpp"

namespace hyperwave {

double vendi_from_eigenvalues(const Eigen::VectorXd& eigenvalues) {
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double l = eigenvalues(i);
    if (l > 0.0) entropy -= l * std::log(l);
  }
  return std::exp(entropy);
}

namespace {

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::kEigenSolverFailure, "Vendi kernel eigendecomposition failed");
  }
  return solver.eigenvalues();
}

}  // namespace

double vendi_score(const Eigen::MatrixXd& features, const VendiOptions& opts) {
  const Eigen::Index m = features.rows();
  if (m < 1) fail(ErrorCode::kInvalidArgument, "Vendi score needs at least one row");
  if (!features.allFinite()) fail(ErrorCode::kNonFinite, "Vendi features not finite");
  const double inv_m = 1.0 / static_cast<double>(m);

  Eigen::VectorXd spectrum;
  if (opts.kernel == VendiKernel::kCosine) {
    Eigen::MatrixXd u = features;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double norm = u.row(i).norm();
      if (norm == 0.0) {
        fail(ErrorCode::kZeroRow, "row " + std::to_string(i) + " has zero norm");
      }
      u.row(i) /= norm;
    }
    if (m <= u.cols()) {
      spectrum = symmetric_eigenvalues((u * u.transpose()) * inv_m);
    } else {
      spectrum = symmetric_eigenvalues((u.transpose() * u) * inv_m);
    }
  } else {
    if (!(opts.rbf_bandwidth > 0.0)) {
      fail(ErrorCode::kInvalidArgument, "RBF bandwidth must be positive");
    }
    const Eigen::VectorXd sq = features.rowwise().squaredNorm();
    Eigen::MatrixXd k = features * features.transpose();
    const double denom = 2.0 * opts.rbf_bandwidth * opts.rbf_bandwidth;
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index i = 0; i < m; ++i) {
        const double d2 = std::max(0.0, sq(i) + sq(j) - 2.0 * k(i, j));
        k(i, j) = i == j ? 1.0 : std::exp(-d2 / denom);
      }
    }
    spectrum = symmetric_eigenvalues(k * inv_m);
  }
  const double score = vendi_from_eigenvalues(spectrum);
  return std::clamp(score, 1.0, static_cast<double>(m));
}

}  // namespace hyperwave
