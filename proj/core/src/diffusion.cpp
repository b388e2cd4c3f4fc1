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

#include "hyperwave/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>

#include "hyperwave/error.hpp"
#include "hyperwave/parallel.hpp"

namespace hyperwave {

namespace {

std::vector<double> inverses(const std::vector<std::size_t>& degrees) {
  std::vector<double> inv(degrees.size());
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    inv[i] = 1.0 / static_cast<double>(degrees[i]);
  }
  return inv;
}

void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    fail(ErrorCode::kSizeCapExceeded,
         "dense operator requested for n = " + std::to_string(n) +
             " above cap " + std::to_string(cap));
  }
}

}  // namespace

DiffusionOperator::DiffusionOperator(std::shared_ptr<const Hypergraph> graph)
    : graph_(std::move(graph)),
      inv_vdeg_(inverses(graph_->vertex_degrees())),
      inv_edeg_(inverses(graph_->edge_degrees())) {}

DiffusionOperator::DiffusionOperator(Hypergraph graph)
    : DiffusionOperator(std::make_shared<const Hypergraph>(std::move(graph))) {}

void DiffusionOperator::apply_into(const Eigen::MatrixXd& in,
                                   Eigen::MatrixXd& out) const {
  const std::size_t n = graph_->n();
  const std::size_t m = graph_->m();
  if (static_cast<std::size_t>(in.rows()) != n) {
    fail(ErrorCode::kDimensionMismatch,
         "signal has " + std::to_string(in.rows()) + " rows, operator expects " +
             std::to_string(n));
  }
  out.resize(in.rows(), in.cols());
  const CsrMatrix& h = graph_->incidence();
  const CsrMatrix& ht = graph_->incidence_transpose();
  const auto cols = static_cast<std::size_t>(in.cols());

  parallel_for_chunks(cols, threads_, [&](std::size_t begin, std::size_t end) {
    std::vector<double> scaled(n);
    std::vector<double> edge_vals(m);
    for (std::size_t c = begin; c < end; ++c) {
      const double* x = in.col(static_cast<Eigen::Index>(c)).data();
      for (std::size_t i = 0; i < n; ++i) scaled[i] = x[i] * inv_vdeg_[i];
      ht.multiply(scaled, edge_vals);
      for (std::size_t j = 0; j < m; ++j) edge_vals[j] *= inv_edeg_[j];
      h.multiply(edge_vals,
                 std::span<double>(out.col(static_cast<Eigen::Index>(c)).data(), n));
    }
  });
}

SignalMatrix apply(const DiffusionOperator& op, const SignalMatrix& x) {
  Eigen::MatrixXd out;
  op.apply_into(x.values(), out);
  return SignalMatrix(std::move(out));
}

SignalMatrix apply_power(const DiffusionOperator& op, const SignalMatrix& x,
                         std::size_t t) {
  if (x.rows() != op.dim()) {
    fail(ErrorCode::kDimensionMismatch, "signal row count does not match operator");
  }
  Eigen::MatrixXd cur = x.values();
  Eigen::MatrixXd next;
  for (std::size_t s = 0; s < t; ++s) {
    op.apply_into(cur, next);
    std::swap(cur, next);
  }
  return SignalMatrix(std::move(cur));
}

Eigen::MatrixXd dense_materialize(const DiffusionOperator& op, std::size_t cap) {
  const std::size_t n = op.dim();
  check_cap(n, cap);
  Eigen::MatrixXd out;
  op.apply_into(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                          static_cast<Eigen::Index>(n)),
                out);
  return out;
}

Eigen::MatrixXd lazy_walk_reference(const Hypergraph& g) {
  for (std::size_t j = 0; j < g.m(); ++j) {
    if (g.edge_degrees()[j] != 2) {
      fail(ErrorCode::kNotTwoUniform,
           "hyperedge " + std::to_string(j) + " has degree " +
               std::to_string(g.edge_degrees()[j]));
    }
  }
  const auto n = static_cast<Eigen::Index>(g.n());
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t j = 0; j < g.m(); ++j) {
    const auto mem = g.members(j);
    adj(mem[0], mem[1]) += 1.0;
    adj(mem[1], mem[0]) += 1.0;
  }
  Eigen::VectorXd inv_deg(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    inv_deg(i) = 1.0 / static_cast<double>(g.vertex_degrees()[static_cast<std::size_t>(i)]);
  }
  Eigen::MatrixXd walk = adj * inv_deg.asDiagonal();
  return 0.5 * (Eigen::MatrixXd::Identity(n, n) + walk);
}

Eigen::VectorXd eigenvalues_dense(const DiffusionOperator& op, std::size_t cap) {
  const Hypergraph& g = op.hypergraph();
  check_cap(g.n(), cap);
  const auto n = static_cast<Eigen::Index>(g.n());
  const auto m = static_cast<Eigen::Index>(g.m());
  // B = D_V^-1/2 H D_E^-1/2, so S = B B^T is symmetric PSD and similar to P_H.
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, m);
  for (std::size_t i = 0; i < g.n(); ++i) {
    const double vs = std::sqrt(op.inv_vertex_degrees()[i]);
    for (index_t e : g.edges_of(i)) {
      b(static_cast<Eigen::Index>(i), e) = vs * std::sqrt(op.inv_edge_degrees()[e]);
    }
  }
  const Eigen::MatrixXd s = b * b.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::kEigenSolverFailure, "symmetric eigensolver did not converge");
  }
  Eigen::VectorXd values = solver.eigenvalues();
  std::sort(values.data(), values.data() + values.size(), std::greater<>());
  return values;
}

}  // namespace hyperwave
