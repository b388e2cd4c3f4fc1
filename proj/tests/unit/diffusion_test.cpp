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

#include <memory>
#include <random>

#include <gtest/gtest.h>

#include "hyperwave/diffusion.hpp"
#include "hyperwave/hypergraph.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace hyperwave {
namespace {

using hwtest::code_of;

Eigen::MatrixXd col(std::initializer_list<double> v) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double d : v) x(i++, 0) = d;
  return x;
}

TEST(Apply, SingleEdge) {
  const DiffusionOperator op(build_hypergraph(2, {{0, 1}}));
  const auto y = apply(op, SignalMatrix(col({1, 0})));
  EXPECT_EQ(y.values(), col({0.5, 0.5}));
}

TEST(Apply, FixesDegreeVector) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = build_hypergraph(30, hwtest::random_hypergraph(30, 20, 6, rng));
    Eigen::MatrixXd d(30, 1);
    for (std::size_t v = 0; v < 30; ++v) d(static_cast<Eigen::Index>(v), 0) = static_cast<double>(g.vertex_degrees()[v]);
    const DiffusionOperator op(g);
    const auto y = apply(op, SignalMatrix(d));
    EXPECT_LT((y.values() - d).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Apply, ZeroToZero) {
  const DiffusionOperator op(build_hypergraph(3, {{0, 1}, {0, 1, 2}}));
  EXPECT_TRUE(apply(op, SignalMatrix::zeros(3, 4)).values().isZero(0.0));
}

TEST(Apply, DimensionMismatch) {
  const DiffusionOperator op(build_hypergraph(3, {{0, 1}, {0, 1, 2}}));
  EXPECT_EQ(code_of([&] { apply(op, SignalMatrix::zeros(4, 1)); }), ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code_of([&] { apply_power(op, SignalMatrix::zeros(2, 1), 2); }),
            ErrorCode::kDimensionMismatch);
}

TEST(Apply, PreservesNonnegativity) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const DiffusionOperator op(build_hypergraph(25, hwtest::random_hypergraph(25, 10, 7, rng)));
  Eigen::MatrixXd x(25, 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = u(rng);
  EXPECT_GE(apply_power(op, SignalMatrix(x), 5).values().minCoeff(), 0.0);
}

TEST(Apply, ThreadCountDoesNotChangeResult) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> gauss;
  const auto g = std::make_shared<const Hypergraph>(
      build_hypergraph(60, hwtest::random_hypergraph(60, 40, 8, rng)));
  Eigen::MatrixXd x(60, 9);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = gauss(rng);
  DiffusionOperator one(g);
  DiffusionOperator four(g);
  four.set_threads(4);
  // Columns are independent, so the split cannot change any bit.
  EXPECT_EQ(apply(one, SignalMatrix(x)).values(), apply(four, SignalMatrix(x)).values());
}

TEST(ApplyPower, Examples) {
  const DiffusionOperator op(build_hypergraph(2, {{0, 1}}));
  const SignalMatrix x(col({1, 0}));
  EXPECT_EQ(apply_power(op, x, 0).values(), x.values());
  EXPECT_EQ(apply_power(op, x, 2).values(), col({0.5, 0.5}));
}

TEST(ApplyPower, MatchesDenseCube) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 20; ++trial) {
    const auto edges = hwtest::random_hypergraph(10, 6, 4, rng);
    const DiffusionOperator op(build_hypergraph(10, edges));
    Eigen::MatrixXd x(10, 2);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = gauss(rng);
    const Eigen::MatrixXd p = dense_materialize(op);
    const Eigen::MatrixXd expected = p * p * p * x;
    EXPECT_LT((apply_power(op, SignalMatrix(x), 3).values() - expected).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(ApplyPower, MatchesOraclePowersUpTo16) {
  std::mt19937_64 rng(18);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 10; ++trial) {
    const auto edges = hwtest::random_hypergraph(50, 30, 6, rng);
    const DiffusionOperator op(build_hypergraph(50, edges));
    const Eigen::MatrixXd p = hwtest::dense_operator(50, edges);
    Eigen::MatrixXd x(50, 1);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = gauss(rng);
    for (std::size_t t : {1u, 4u, 9u, 16u}) {
      const Eigen::MatrixXd expected = hwtest::matrix_power(p, t) * x;
      const Eigen::MatrixXd got = apply_power(op, SignalMatrix(x), t).values();
      EXPECT_LT((got - expected).norm(), 1e-10 * std::max(1.0, expected.norm()));
    }
  }
}

TEST(DenseMaterialize, SingleEdge) {
  const DiffusionOperator op(build_hypergraph(2, {{0, 1}}));
  EXPECT_EQ(dense_materialize(op), Eigen::MatrixXd::Constant(2, 2, 0.5));
}

TEST(DenseMaterialize, TriangleIsLazyWalk) {
  const auto g = build_hypergraph(3, {{0, 1}, {1, 2}, {0, 2}});
  const DiffusionOperator op(g);
  EXPECT_LT((dense_materialize(op) - hwtest::lazy_walk(3, {{0, 1}, {1, 2}, {0, 2}}))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(DenseMaterialize, ColumnsAreApplyOnBasis) {
  std::mt19937_64 rng(19);
  const DiffusionOperator op(build_hypergraph(12, hwtest::random_hypergraph(12, 8, 5, rng)));
  const Eigen::MatrixXd p = dense_materialize(op);
  for (std::size_t i = 0; i < 12; ++i) {
    EXPECT_EQ(Eigen::MatrixXd(p.col(static_cast<Eigen::Index>(i))),
              apply(op, SignalMatrix::basis(12, i)).values());
  }
}

TEST(DenseMaterialize, MatchesOracleAndColumnSums) {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 5 + trial;
    const auto edges = hwtest::random_hypergraph(n, n / 2 + 1, 7, rng);
    const Eigen::MatrixXd p = dense_materialize(DiffusionOperator(build_hypergraph(n, edges)));
    EXPECT_LT((p - hwtest::dense_operator(n, edges)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((p.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
  }
}

TEST(DenseMaterialize, CapEnforced) {
  const DiffusionOperator op(build_hypergraph(3, {{0, 1, 2}}));
  EXPECT_EQ(code_of([&] { dense_materialize(op, 2); }), ErrorCode::kSizeCapExceeded);
  EXPECT_EQ(code_of([&] { eigenvalues_dense(op, 2); }), ErrorCode::kSizeCapExceeded);
}

TEST(ColumnStochastic, RandomUpTo200) {
  std::mt19937_64 rng(22);
  for (std::size_t n : {7u, 50u, 120u, 200u}) {
    const DiffusionOperator op(build_hypergraph(n, hwtest::random_hypergraph(n, n / 3, 9, rng)));
    Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const Eigen::MatrixXd p = apply(op, SignalMatrix(eye)).values();
    EXPECT_LT((p.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12) << n;
  }
}

TEST(LazyWalk, Examples) {
  EXPECT_EQ(lazy_walk_reference(build_hypergraph(2, {{0, 1}})), Eigen::MatrixXd::Constant(2, 2, 0.5));
  Eigen::MatrixXd tri = Eigen::MatrixXd::Constant(3, 3, 0.25);
  tri.diagonal().setConstant(0.5);
  EXPECT_EQ(lazy_walk_reference(build_hypergraph(3, {{0, 1}, {1, 2}, {0, 2}})), tri);
}

TEST(LazyWalk, RejectsNonTwoUniform) {
  EXPECT_EQ(code_of([] { lazy_walk_reference(build_hypergraph(3, {{0, 1, 2}})); }),
            ErrorCode::kNotTwoUniform);
}

TEST(LazyWalk, EqualsOperatorOnRandomGraphs) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 4 + static_cast<std::size_t>(trial);
    const auto edges = hwtest::random_graph(n, 0.3, rng);
    const auto g = build_hypergraph(n, edges);
    const Eigen::MatrixXd lw = lazy_walk_reference(g);
    EXPECT_LT((lw - hwtest::lazy_walk(n, edges)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((dense_materialize(DiffusionOperator(g)) - lw).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Eigenvalues, SingleEdge) {
  const auto ev = eigenvalues_dense(DiffusionOperator(build_hypergraph(2, {{0, 1}})));
  ASSERT_EQ(ev.size(), 2);
  EXPECT_NEAR(ev(0), 1.0, 1e-12);
  EXPECT_NEAR(ev(1), 0.0, 1e-12);
}

TEST(Eigenvalues, BoundedAndSortedWithUnitTop) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const auto edges = hwtest::random_connected_graph(30, 20, rng);
    // Mix in larger hyperedges on top of a connected skeleton.
    auto mixed = edges;
    for (const auto& e : hwtest::random_hypergraph(30, 6, 8, rng)) mixed.push_back(e);
    const DiffusionOperator op(build_hypergraph(30, mixed));
    const auto ev = eigenvalues_dense(op);
    EXPECT_NEAR(ev(0), 1.0, 1e-10);
    EXPECT_GE(ev.minCoeff(), -1e-10);
    EXPECT_LE(ev.maxCoeff(), 1.0 + 1e-10);
    for (Eigen::Index i = 1; i < ev.size(); ++i) EXPECT_LE(ev(i), ev(i - 1));
    // Same spectrum as the dense oracle, checked through the trace.
    EXPECT_NEAR(ev.sum(), hwtest::dense_operator(30, mixed).trace(), 1e-10);
  }
}

TEST(Eigenvalues, DisconnectedHasRepeatedOne) {
  const auto ev = eigenvalues_dense(DiffusionOperator(build_hypergraph(4, {{0, 1}, {2, 3}})));
  EXPECT_NEAR(ev(0), 1.0, 1e-12);
  EXPECT_NEAR(ev(1), 1.0, 1e-12);
}

TEST(Locality, DeltaStaysWithinDistance) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 10; ++trial) {
    const auto edges = hwtest::random_hypergraph(40, 25, 3, rng);
    const auto g = build_hypergraph(40, edges);
    const DiffusionOperator op(g);
    const auto dist = hwtest::bfs(40, edges, 0);
    SignalMatrix x = SignalMatrix::basis(40, 0);
    for (std::size_t d = 1; d <= 6; ++d) {
      x = apply(op, x);
      for (std::size_t v = 0; v < 40; ++v) {
        if (dist[v] > d) EXPECT_EQ(x.values()(static_cast<Eigen::Index>(v), 0), 0.0);
      }
    }
  }
}

TEST(Operator, InverseDegrees) {
  const auto g = build_hypergraph(3, {{0, 1}, {0, 1, 2}});
  const DiffusionOperator op(g);
  for (std::size_t v = 0; v < 3; ++v) {
    EXPECT_NEAR(op.inv_vertex_degrees()[v] * static_cast<double>(g.vertex_degrees()[v]), 1.0, 1e-16);
  }
  EXPECT_EQ(op.inv_edge_degrees(), (std::vector<double>{0.5, 1.0 / 3.0}));
}

}  // namespace
}  // namespace hyperwave
