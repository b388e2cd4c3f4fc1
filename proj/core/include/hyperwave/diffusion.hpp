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
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "hyperwave/hypergraph.hpp"

namespace hyperwave {

inline constexpr std::size_t kDefaultDenseCap = 2000;

/// Hypergraph random walk P_H = H D_E^-1 H^T D_V^-1, applied matrix-free.
///
/// P_H is the vertex block of the squared bipartite walk matrix and is
/// column-stochastic. Each application runs four stages (scale by D_V^-1,
/// multiply by H^T, scale by D_E^-1, multiply by H) at O(nnz(H)) cost per
/// signal column; P_H itself is never formed.
class DiffusionOperator {
 public:
  explicit DiffusionOperator(std::shared_ptr<const Hypergraph> graph);
  explicit DiffusionOperator(Hypergraph graph);

  const Hypergraph& hypergraph() const { return *graph_; }
  std::size_t dim() const { return graph_->n(); }

  const std::vector<double>& inv_vertex_degrees() const { return inv_vdeg_; }
  const std::vector<double>& inv_edge_degrees() const { return inv_edeg_; }

  /// Worker count for column-parallel application. Output is bitwise
  /// identical for any value because columns never interact.
  void set_threads(std::size_t threads) { threads_ = threads == 0 ? 1 : threads; }
  std::size_t threads() const { return threads_; }

  /// out = P_H * in. `out` is resized; it must not alias `in`.
  void apply_into(const Eigen::MatrixXd& in, Eigen::MatrixXd& out) const;

 private:
  std::shared_ptr<const Hypergraph> graph_;
  std::vector<double> inv_vdeg_;
  std::vector<double> inv_edeg_;
  std::size_t threads_ = 1;
};

/// P_H x. Throws DimensionMismatch.
SignalMatrix apply(const DiffusionOperator& op, const SignalMatrix& x);

/// P_H^t x via t sequential applications; t = 0 returns x.
SignalMatrix apply_power(const DiffusionOperator& op, const SignalMatrix& x,
                         std::size_t t);

/// Dense n x n P_H. Throws SizeCapExceeded when n > cap.
Eigen::MatrixXd dense_materialize(const DiffusionOperator& op,
                                  std::size_t cap = kDefaultDenseCap);

/// 1/2 (I + A D^-1) for a graph given as a 2-uniform hypergraph.
/// Throws NotTwoUniform.
Eigen::MatrixXd lazy_walk_reference(const Hypergraph& g);

/// Eigenvalues of P_H sorted descending, via the symmetric similar matrix
/// D_V^-1/2 H D_E^-1 H^T D_V^-1/2. Throws SizeCapExceeded or
/// EigenSolverFailure.
Eigen::VectorXd eigenvalues_dense(const DiffusionOperator& op,
                                  std::size_t cap = kDefaultDenseCap);

}  // namespace hyperwave
