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

#include "hyperwave/diffusion.hpp"
#include "hyperwave/wavelets.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace hyperwave {
namespace {

using hwtest::code_of;

Eigen::MatrixXd random_signal(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd x(rows, cols);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = gauss(rng);
  return x;
}

TEST(Scales, Dyadic) {
  EXPECT_EQ(dyadic_scales(1).scales(), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(dyadic_scales(4).scales(), (std::vector<std::size_t>{0, 1, 2, 4, 8}));
  EXPECT_EQ(dyadic_scales(6).scales(), (std::vector<std::size_t>{0, 1, 2, 4, 8, 16, 32}));
  EXPECT_EQ(dyadic_scales(4).J(), 4u);
  EXPECT_EQ(dyadic_scales(4).max_scale(), 8u);
}

TEST(Scales, Validation) {
  EXPECT_EQ(code_of([] { dyadic_scales(0); }), ErrorCode::kInvalidJ);
  EXPECT_EQ(code_of([] { ScaleSequence({0}); }), ErrorCode::kInvalidScales);
  EXPECT_EQ(code_of([] { ScaleSequence({1, 2}); }), ErrorCode::kInvalidScales);
  EXPECT_EQ(code_of([] { ScaleSequence({0, 2}); }), ErrorCode::kInvalidScales);
  EXPECT_EQ(code_of([] { ScaleSequence({0, 1, 4, 3}); }), ErrorCode::kInvalidScales);
  EXPECT_NO_THROW(ScaleSequence({0, 1, 1, 3}));
}

TEST(Transform, SingleEdgeExample) {
  const DiffusionOperator op(build_hypergraph(2, {{0, 1}}));
  const auto w = wavelet_transform(op, SignalMatrix::basis(2, 0), ScaleSequence({0, 1}));
  ASSERT_EQ(w.num_blocks(), 2u);
  EXPECT_EQ(Eigen::MatrixXd(w.block(0)), (Eigen::MatrixXd(2, 1) << 0.5, -0.5).finished());
  EXPECT_EQ(Eigen::MatrixXd(w.block(1)), (Eigen::MatrixXd(2, 1) << 0.5, 0.5).finished());
}

TEST(Transform, FlattenedLayout) {
  std::mt19937_64 rng(1);
  const DiffusionOperator op(build_hypergraph(10, hwtest::random_hypergraph(10, 5, 4, rng)));
  const Eigen::MatrixXd x = random_signal(10, 3, rng);
  const auto w = wavelet_transform(op, SignalMatrix(x), dyadic_scales(3));
  EXPECT_EQ(w.flattened().rows(), 10);
  EXPECT_EQ(w.flattened().cols(), 12);
  for (std::size_t b = 0; b < 4; ++b) {
    EXPECT_EQ(Eigen::MatrixXd(w.block(b)),
              Eigen::MatrixXd(w.flattened().middleCols(static_cast<Eigen::Index>(3 * b), 3)));
  }
}

TEST(Transform, MatchesDensePowers) {
  std::mt19937_64 rng(2);
  const auto edges = hwtest::random_hypergraph(20, 12, 5, rng);
  const DiffusionOperator op(build_hypergraph(20, edges));
  const Eigen::MatrixXd p = hwtest::dense_operator(20, edges);
  const Eigen::MatrixXd x = random_signal(20, 2, rng);
  const ScaleSequence s({0, 1, 2, 4});
  const auto w = wavelet_transform(op, SignalMatrix(x), s);
  for (std::size_t i = 0; i < s.J(); ++i) {
    const Eigen::MatrixXd expected =
        (hwtest::matrix_power(p, s[i]) - hwtest::matrix_power(p, s[i + 1])) * x;
    EXPECT_LT((Eigen::MatrixXd(w.block(i)) - expected).cwiseAbs().maxCoeff(), 1e-10) << i;
  }
  const Eigen::MatrixXd phi = hwtest::matrix_power(p, 4) * x;
  EXPECT_LT((Eigen::MatrixXd(w.block(3)) - phi).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Transform, Telescopes) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 5 + static_cast<std::size_t>(trial) * 2;
    const DiffusionOperator op(build_hypergraph(n, hwtest::random_hypergraph(n, n, 6, rng)));
    const Eigen::MatrixXd x = random_signal(static_cast<Eigen::Index>(n), 4, rng);
    const ScaleSequence s = dyadic_scales(1 + static_cast<std::size_t>(trial) % 5);
    const auto w = wavelet_transform(op, SignalMatrix(x), s);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(x.rows(), x.cols());
    for (std::size_t b = 0; b < w.num_blocks(); ++b) sum += w.block(b);
    EXPECT_LT((sum - x).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Transform, EqualScalesGiveZeroBlock) {
  std::mt19937_64 rng(4);
  const DiffusionOperator op(build_hypergraph(8, hwtest::random_hypergraph(8, 6, 3, rng)));
  const auto w = wavelet_transform(op, SignalMatrix(random_signal(8, 2, rng)), ScaleSequence({0, 1, 3, 3, 5}));
  EXPECT_TRUE(Eigen::MatrixXd(w.block(2)).isZero(0.0));
}

TEST(Transform, LocalizedOnPath) {
  const std::size_t n = 30;
  const auto edges = hwtest::path_graph(n);
  const DiffusionOperator op(build_hypergraph(n, edges));
  const ScaleSequence s = dyadic_scales(4);
  for (std::size_t src : {0u, 7u, 15u}) {
    const auto w = wavelet_transform(op, SignalMatrix::basis(n, src), s);
    const auto dist = hwtest::bfs(n, edges, src);
    for (std::size_t i = 0; i <= s.J(); ++i) {
      const std::size_t reach = i < s.J() ? s[i + 1] : s[s.J()];
      for (std::size_t v = 0; v < n; ++v) {
        if (dist[v] > reach) EXPECT_EQ(w.block(i)(static_cast<Eigen::Index>(v), 0), 0.0);
      }
    }
  }
}

TEST(Transform, SmoothingIsMonotoneInScale) {
  std::mt19937_64 rng(5);
  const auto edges = hwtest::random_connected_graph(40, 30, rng);
  const DiffusionOperator op(build_hypergraph(40, edges));
  Eigen::MatrixXd x = random_signal(40, 1, rng);
  x.array() -= x.mean();
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t J = 1; J <= 6; ++J) {
    const auto w = wavelet_transform(op, SignalMatrix(x), dyadic_scales(J));
    const Eigen::MatrixXd phi = w.block(J);
    const double var = (phi.array() - phi.mean()).square().sum();
    EXPECT_LE(var, prev + 1e-12);
    prev = var;
  }
}

TEST(Transform, DimensionMismatch) {
  const DiffusionOperator op(build_hypergraph(2, {{0, 1}}));
  EXPECT_EQ(code_of([&] { wavelet_transform(op, SignalMatrix::zeros(3, 1), dyadic_scales(2)); }),
            ErrorCode::kDimensionMismatch);
}

TEST(TransformCount, Examples) {
  const auto c = transform_count(ScaleSequence({0, 1}), 1, 4, 2);
  EXPECT_EQ(c.multiply_adds, 8u);
  EXPECT_EQ(c.subtractions, 2u);
  const auto a = transform_count(dyadic_scales(4), 3, 100, 50);
  const auto b = transform_count(dyadic_scales(5), 3, 100, 50);
  EXPECT_EQ(b.multiply_adds, 2 * a.multiply_adds);
}

}  // namespace
}  // namespace hyperwave
