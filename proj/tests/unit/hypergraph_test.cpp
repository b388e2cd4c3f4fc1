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

#include <random>

#include <gtest/gtest.h>

#include "hyperwave/error.hpp"
#include "hyperwave/hypergraph.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace hyperwave {
namespace {

using hwtest::code_of;

TEST(BuildHypergraph, SmallExample) {
  const auto g = build_hypergraph(3, {{0, 1}, {0, 1, 2}});
  Eigen::MatrixXd expected(3, 2);
  expected << 1, 1, 1, 1, 0, 1;
  EXPECT_EQ(g.dense_incidence(), expected);
  EXPECT_EQ(g.vertex_degrees(), (std::vector<std::size_t>{2, 2, 1}));
  EXPECT_EQ(g.edge_degrees(), (std::vector<std::size_t>{2, 3}));
  EXPECT_FALSE(g.anchors().has_value());
}

TEST(BuildHypergraph, Singleton) {
  const auto g = build_hypergraph(1, {{0}});
  EXPECT_EQ(g.dense_incidence(), Eigen::MatrixXd::Ones(1, 1));
  EXPECT_EQ(g.vertex_degrees(), std::vector<std::size_t>{1});
  EXPECT_EQ(g.edge_degrees(), std::vector<std::size_t>{1});
}

TEST(BuildHypergraph, AllPairsOfFour) {
  std::vector<std::vector<std::size_t>> edges;
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a + 1; b < 4; ++b) edges.push_back({a, b});
  }
  const auto g = build_hypergraph(4, edges);
  EXPECT_EQ(g.m(), 6u);
  EXPECT_EQ(g.vertex_degrees(), (std::vector<std::size_t>{3, 3, 3, 3}));
  for (auto d : g.edge_degrees()) EXPECT_EQ(d, 2u);
}

TEST(BuildHypergraph, RejectsBadInput) {
  EXPECT_EQ(code_of([] { build_hypergraph(2, {{0, 1}, {}}); }), ErrorCode::kEmptyEdge);
  EXPECT_EQ(code_of([] { build_hypergraph(3, {{0, 1}}); }), ErrorCode::kIsolatedVertex);
  EXPECT_EQ(code_of([] { build_hypergraph(2, {{0, 2}}); }), ErrorCode::kIndexOutOfRange);
}

TEST(BuildHypergraph, IsolatedVertexNamesIndex) {
  try {
    build_hypergraph(4, {{0, 1}, {3}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find('2'), std::string::npos) << e.what();
  }
}

TEST(BuildHypergraph, DuplicateEdgesKept) {
  const auto g = build_hypergraph(2, {{0, 1}, {1, 0}});
  EXPECT_EQ(g.m(), 2u);
  EXPECT_EQ(g.vertex_degrees(), (std::vector<std::size_t>{2, 2}));
}

TEST(BuildHypergraph, DegreesAgreeWithBothForms) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto edges = hwtest::random_hypergraph(25, 15, 6, rng);
    const auto g = build_hypergraph(25, edges);
    const Eigen::MatrixXd h = hwtest::incidence(25, edges);
    EXPECT_EQ(g.dense_incidence(), h);
    EXPECT_EQ(g.incidence_transpose().to_dense(), h.transpose());
    for (std::size_t v = 0; v < g.n(); ++v) {
      EXPECT_EQ(g.edges_of(v).size(), g.vertex_degrees()[v]);
      EXPECT_EQ(static_cast<double>(g.vertex_degrees()[v]), h.row(static_cast<Eigen::Index>(v)).sum());
    }
    for (std::size_t e = 0; e < g.m(); ++e) {
      EXPECT_EQ(g.members(e).size(), g.edge_degrees()[e]);
    }
  }
}

TEST(Dual, TransposesIncidence) {
  const auto g = build_hypergraph(3, {{0, 1}, {0, 1, 2}});
  Eigen::MatrixXd expected(2, 3);
  expected << 1, 1, 0, 1, 1, 1;
  const auto d = dual(g);
  EXPECT_EQ(d.n(), 2u);
  EXPECT_EQ(d.m(), 3u);
  EXPECT_EQ(d.dense_incidence(), expected);
}

TEST(Dual, PathOnThree) {
  const auto d = dual(build_hypergraph(3, {{0, 1}, {1, 2}}));
  Eigen::MatrixXd expected(2, 3);
  expected << 1, 1, 0, 0, 1, 1;
  EXPECT_EQ(d.dense_incidence(), expected);
}

TEST(Dual, DropsAnchors) {
  const auto g = build_hypergraph(2, {{0, 1}, {0, 1}}).with_anchors({0, 1});
  ASSERT_TRUE(g.anchors().has_value());
  EXPECT_FALSE(dual(g).anchors().has_value());
}

TEST(Dual, Involution) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = build_hypergraph(20, hwtest::random_hypergraph(20, 12, 5, rng));
    EXPECT_TRUE(dual(dual(g)).same_incidence(g));
  }
}

TEST(Bipartite, SingleEdgeIsPath) {
  const auto b = bipartite_expansion(build_hypergraph(2, {{0, 1}}));
  Eigen::MatrixXd expected(3, 3);
  expected << 0, 0, 1, 0, 0, 1, 1, 1, 0;
  EXPECT_EQ(b.adjacency.to_dense(), expected);
}

TEST(Bipartite, RowSumsAreDegrees) {
  const auto b = bipartite_expansion(build_hypergraph(3, {{0, 1}, {0, 1, 2}}));
  EXPECT_EQ(b.degrees, (std::vector<std::size_t>{2, 2, 1, 2, 3}));
  const Eigen::MatrixXd a = b.adjacency.to_dense();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    EXPECT_EQ(a.row(i).sum(), static_cast<double>(b.degrees[static_cast<std::size_t>(i)]));
  }
}

TEST(Bipartite, SquareVertexBlockIsHHt) {
  const auto g = build_hypergraph(3, {{0, 1}, {0, 1, 2}});
  const Eigen::MatrixXd a = bipartite_expansion(g).adjacency.to_dense();
  const Eigen::MatrixXd h = g.dense_incidence();
  EXPECT_EQ(Eigen::MatrixXd((a * a).topLeftCorner(3, 3)), Eigen::MatrixXd(h * h.transpose()));
}

TEST(Bipartite, BlockLawAndSymmetry) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = build_hypergraph(15, hwtest::random_hypergraph(15, 9, 5, rng));
    const Eigen::MatrixXd a = bipartite_expansion(g).adjacency.to_dense();
    const auto n = static_cast<Eigen::Index>(g.n());
    const auto m = static_cast<Eigen::Index>(g.m());
    EXPECT_EQ(a, a.transpose());
    EXPECT_TRUE(a.topLeftCorner(n, n).isZero(0.0));
    EXPECT_TRUE(a.bottomRightCorner(m, m).isZero(0.0));
    EXPECT_EQ(Eigen::MatrixXd(a.topRightCorner(n, m)), g.dense_incidence());
  }
}

TEST(Distance, Examples) {
  EXPECT_EQ(hypergraph_distance(build_hypergraph(2, {{0, 1}}), 0),
            (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(hypergraph_distance(build_hypergraph(4, hwtest::path_graph(4)), 0),
            (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(hypergraph_distance(build_hypergraph(5, {{0, 1, 2}, {2, 3, 4}}), 0),
            (std::vector<std::size_t>{0, 1, 1, 2, 2}));
}

TEST(Distance, UnreachableAndRange) {
  const auto g = build_hypergraph(4, {{0, 1}, {2, 3}});
  const auto d = hypergraph_distance(g, 0);
  EXPECT_EQ(d[2], kUnreachable);
  EXPECT_EQ(d[3], kUnreachable);
  EXPECT_EQ(code_of([&] { hypergraph_distance(g, 4); }), ErrorCode::kIndexOutOfRange);
}

TEST(Distance, SymmetricAndMatchesBfs) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto edges = hwtest::random_hypergraph(40, 30, 4, rng);
    const auto g = build_hypergraph(40, edges);
    std::vector<std::vector<std::size_t>> d(40);
    for (std::size_t s = 0; s < 40; ++s) {
      d[s] = hypergraph_distance(g, s);
      EXPECT_EQ(d[s], hwtest::bfs(40, edges, s));
    }
    for (std::size_t u = 0; u < 40; ++u) {
      for (std::size_t v = 0; v < 40; ++v) EXPECT_EQ(d[u][v], d[v][u]);
    }
  }
}

TEST(SignalMatrix, RejectsNonFinite) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(2, 2);
  x(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(code_of([&] { SignalMatrix s(x); }), ErrorCode::kNonFinite);
  x(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_EQ(code_of([&] { SignalMatrix s(x); }), ErrorCode::kNonFinite);
}

TEST(SignalMatrix, Basis) {
  const auto e = SignalMatrix::basis(4, 2);
  EXPECT_EQ(e.rows(), 4u);
  EXPECT_EQ(e.cols(), 1u);
  EXPECT_EQ(e.values().sum(), 1.0);
  EXPECT_EQ(e.values()(2, 0), 1.0);
}

}  // namespace
}  // namespace hyperwave
