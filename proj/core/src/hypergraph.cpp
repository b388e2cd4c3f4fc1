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

#include "hyperwave/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hyperwave/error.hpp"

namespace hyperwave {

namespace {

std::vector<std::size_t> row_counts(const CsrMatrix& a) {
  std::vector<std::size_t> counts(a.rows);
  for (std::size_t r = 0; r < a.rows; ++r) {
    counts[r] = a.row_ptr[r + 1] - a.row_ptr[r];
  }
  return counts;
}

}  // namespace

Hypergraph::Hypergraph(CsrMatrix by_vertex, CsrMatrix by_edge)
    : by_vertex_(std::move(by_vertex)),
      by_edge_(std::move(by_edge)),
      vertex_degrees_(row_counts(by_vertex_)),
      edge_degrees_(row_counts(by_edge_)) {}

Hypergraph Hypergraph::with_anchors(std::vector<std::size_t> anchors) const {
  if (anchors.size() != m()) {
    fail(ErrorCode::kDimensionMismatch,
         "anchor count " + std::to_string(anchors.size()) +
             " != hyperedge count " + std::to_string(m()));
  }
  for (std::size_t a : anchors) {
    if (a >= n()) {
      fail(ErrorCode::kIndexOutOfRange,
           "anchor vertex " + std::to_string(a) + " out of range");
    }
  }
  Hypergraph g = *this;
  g.anchors_ = std::move(anchors);
  return g;
}

bool Hypergraph::same_incidence(const Hypergraph& other) const {
  return same_pattern(by_vertex_, other.by_vertex_) &&
         same_pattern(by_edge_, other.by_edge_);
}

Hypergraph build_hypergraph(std::size_t n,
                            const std::vector<std::vector<std::size_t>>& edges) {
  if (n > std::numeric_limits<index_t>::max() ||
      edges.size() > std::numeric_limits<index_t>::max()) {
    fail(ErrorCode::kIndexOutOfRange, "hypergraph too large for 32-bit indices");
  }
  std::vector<std::vector<index_t>> edge_rows(edges.size());
  for (std::size_t j = 0; j < edges.size(); ++j) {
    if (edges[j].empty()) {
      fail(ErrorCode::kEmptyEdge, "hyperedge " + std::to_string(j) + " is empty");
    }
    auto& row = edge_rows[j];
    row.reserve(edges[j].size());
    for (std::size_t v : edges[j]) {
      if (v >= n) {
        fail(ErrorCode::kIndexOutOfRange,
             "hyperedge " + std::to_string(j) + " references vertex " +
                 std::to_string(v) + " but n = " + std::to_string(n));
      }
      row.push_back(static_cast<index_t>(v));
    }
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  CsrMatrix by_edge = CsrMatrix::from_rows(n, edge_rows);
  CsrMatrix by_vertex = by_edge.transposed();
  for (std::size_t i = 0; i < n; ++i) {
    if (by_vertex.row_ptr[i + 1] == by_vertex.row_ptr[i]) {
      fail(ErrorCode::kIsolatedVertex,
           "vertex " + std::to_string(i) + " belongs to no hyperedge");
    }
  }
  return Hypergraph(std::move(by_vertex), std::move(by_edge));
}

Hypergraph dual(const Hypergraph& g) {
  // A valid g has nonempty edges, so no dual vertex can be isolated.
  for (std::size_t d : g.edge_degrees()) {
    if (d == 0) fail(ErrorCode::kIsolatedVertex, "dual has an isolated vertex");
  }
  return Hypergraph(g.by_edge_, g.by_vertex_);
}

SignalMatrix::SignalMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (!values_.allFinite()) {
    fail(ErrorCode::kNonFinite, "signal matrix contains NaN or Inf");
  }
}

SignalMatrix SignalMatrix::zeros(std::size_t rows, std::size_t cols) {
  return SignalMatrix(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows),
                                            static_cast<Eigen::Index>(cols)));
}

SignalMatrix SignalMatrix::basis(std::size_t rows, std::size_t index) {
  if (index >= rows) {
    fail(ErrorCode::kIndexOutOfRange, "basis index out of range");
  }
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), 1);
  v(static_cast<Eigen::Index>(index), 0) = 1.0;
  return SignalMatrix(std::move(v));
}

BipartiteExpansion bipartite_expansion(const Hypergraph& g) {
  const std::size_t n = g.n();
  const std::size_t m = g.m();
  std::vector<std::vector<index_t>> rows(n + m);
  for (std::size_t i = 0; i < n; ++i) {
    for (index_t e : g.edges_of(i)) {
      rows[i].push_back(static_cast<index_t>(n + e));
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    for (index_t v : g.members(j)) rows[n + j].push_back(v);
  }
  BipartiteExpansion out;
  out.n = n;
  out.m = m;
  out.adjacency = CsrMatrix::from_rows(n + m, rows);
  out.degrees = g.vertex_degrees();
  out.degrees.insert(out.degrees.end(), g.edge_degrees().begin(),
                     g.edge_degrees().end());
  return out;
}

std::vector<std::size_t> hypergraph_distance(const Hypergraph& g,
                                             std::size_t source) {
  if (source >= g.n()) {
    fail(ErrorCode::kIndexOutOfRange,
         "source vertex " + std::to_string(source) + " out of range");
  }
  std::vector<std::size_t> dist(g.n(), kUnreachable);
  std::vector<bool> edge_seen(g.m(), false);
  std::vector<std::size_t> frontier{source};
  dist[source] = 0;
  std::size_t level = 0;
  while (!frontier.empty()) {
    ++level;
    std::vector<std::size_t> next;
    for (std::size_t v : frontier) {
      for (index_t e : g.edges_of(v)) {
        if (edge_seen[e]) continue;
        edge_seen[e] = true;
        for (index_t w : g.members(e)) {
          if (dist[w] == kUnreachable) {
            dist[w] = level;
            next.push_back(w);
          }
        }
      }
    }
    frontier = std::move(next);
  }
  return dist;
}

}  // namespace hyperwave
