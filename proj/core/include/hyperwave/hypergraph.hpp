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
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hyperwave/sparse.hpp"

namespace hyperwave {

/// Immutable unweighted hypergraph on n vertices and m hyperedges.
///
/// The incidence relation is held twice: vertex-major (row i lists the
/// hyperedges containing vertex i) and edge-major (row j lists the members of
/// hyperedge j). Every vertex belongs to at least one hyperedge and every
/// hyperedge is nonempty. Duplicate hyperedges are kept as distinct edges.
class Hypergraph {
 public:
  std::size_t n() const { return vertex_degrees_.size(); }
  std::size_t m() const { return edge_degrees_.size(); }
  std::size_t nnz() const { return by_vertex_.nnz(); }

  std::span<const index_t> edges_of(std::size_t vertex) const {
    return by_vertex_.row_indices(vertex);
  }
  std::span<const index_t> members(std::size_t edge) const {
    return by_edge_.row_indices(edge);
  }

  const std::vector<std::size_t>& vertex_degrees() const {
    return vertex_degrees_;
  }
  const std::vector<std::size_t>& edge_degrees() const { return edge_degrees_; }

  /// n x m incidence H in CSR form.
  const CsrMatrix& incidence() const { return by_vertex_; }
  /// m x n transpose H^T in CSR form.
  const CsrMatrix& incidence_transpose() const { return by_edge_; }

  Eigen::MatrixXd dense_incidence() const { return by_vertex_.to_dense(); }

  /// Generating vertex of each hyperedge, when built by k-hop lifting.
  const std::optional<std::vector<std::size_t>>& anchors() const {
    return anchors_;
  }
  Hypergraph with_anchors(std::vector<std::size_t> anchors) const;

  bool same_incidence(const Hypergraph& other) const;

 private:
  friend Hypergraph build_hypergraph(
      std::size_t n, const std::vector<std::vector<std::size_t>>& edges);
  friend Hypergraph dual(const Hypergraph& g);

  Hypergraph(CsrMatrix by_vertex, CsrMatrix by_edge);

  CsrMatrix by_vertex_;
  CsrMatrix by_edge_;
  std::vector<std::size_t> vertex_degrees_;
  std::vector<std::size_t> edge_degrees_;
  std::optional<std::vector<std::size_t>> anchors_;
};

/// Builds a hypergraph from edge member lists. Members are treated as sets
/// (sorted, repeated indices collapsed).
///
/// Throws EmptyEdge, IndexOutOfRange, or IsolatedVertex.
Hypergraph build_hypergraph(std::size_t n,
                            const std::vector<std::vector<std::size_t>>& edges);

/// Hypergraph with incidence H^T: hyperedges become vertices. Anchors are
/// dropped.
Hypergraph dual(const Hypergraph& g);

/// Dense real matrix of signals; rows index vertices, columns are signals.
class SignalMatrix {
 public:
  SignalMatrix() = default;
  /// Throws NonFinite if any entry is NaN or infinite.
  explicit SignalMatrix(Eigen::MatrixXd values);

  static SignalMatrix zeros(std::size_t rows, std::size_t cols);
  static SignalMatrix basis(std::size_t rows, std::size_t index);

  std::size_t rows() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values_.cols()); }
  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::MatrixXd release() && { return std::move(values_); }

 private:
  Eigen::MatrixXd values_;
};

/// Bipartite graph on V u E linking each vertex to its hyperedges.
struct BipartiteExpansion {
  std::size_t n = 0;
  std::size_t m = 0;
  /// (n+m) x (n+m) symmetric adjacency [[0, H], [H^T, 0]].
  CsrMatrix adjacency;
  /// vertex degrees followed by edge degrees.
  std::vector<std::size_t> degrees;
};

BipartiteExpansion bipartite_expansion(const Hypergraph& g);

inline constexpr std::size_t kUnreachable =
    std::numeric_limits<std::size_t>::max();

/// Hyperedge-hop distances from `source`; unreachable vertices get
/// kUnreachable.
std::vector<std::size_t> hypergraph_distance(const Hypergraph& g,
                                             std::size_t source);

}  // namespace hyperwave
