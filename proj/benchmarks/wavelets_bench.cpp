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

// Wavelet transform and operator throughput on k = 1 lifted grids.
//
//   ./hyperwave_bench --benchmark_filter=Transform
//
// BM_TransformScale should grow linearly in s_J, BM_TransformSize linearly
// in the number of hyperedges.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "hyperwave/diffusion.hpp"
#include "hyperwave/niche.hpp"
#include "hyperwave/wavelets.hpp"

namespace {

using namespace hyperwave;

Hypergraph lifted_grid(std::size_t side) {
  std::vector<std::vector<std::size_t>> edges;
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      const std::size_t v = r * side + c;
      if (c + 1 < side) edges.push_back({v, v + 1});
      if (r + 1 < side) edges.push_back({v, v + side});
    }
  }
  return khop_lift(build_hypergraph(side * side, edges), 1);
}

Eigen::MatrixXd random_signal(std::size_t n, std::size_t p) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = u(rng);
  return x;
}

void BM_Apply(benchmark::State& state) {
  const DiffusionOperator op(lifted_grid(static_cast<std::size_t>(state.range(0))));
  const Eigen::MatrixXd x = random_signal(op.dim(), 16);
  Eigen::MatrixXd y;
  for (auto _ : state) {
    op.apply_into(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(op.dim()));
}
BENCHMARK(BM_Apply)->Arg(100)->Arg(200)->Arg(317)->Unit(benchmark::kMillisecond);

void BM_TransformScale(benchmark::State& state) {
  const DiffusionOperator op(lifted_grid(224));
  const SignalMatrix x(random_signal(op.dim(), 16));
  const ScaleSequence s = dyadic_scales(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto w = wavelet_transform(op, x, s);
    benchmark::DoNotOptimize(w.flattened().data());
  }
  state.counters["s_J"] = static_cast<double>(s.max_scale());
}
BENCHMARK(BM_TransformScale)->DenseRange(3, 7)->Unit(benchmark::kMillisecond);

void BM_TransformSize(benchmark::State& state) {
  const DiffusionOperator op(lifted_grid(static_cast<std::size_t>(state.range(0))));
  const SignalMatrix x(random_signal(op.dim(), 16));
  const ScaleSequence s = dyadic_scales(5);
  for (auto _ : state) {
    auto w = wavelet_transform(op, x, s);
    benchmark::DoNotOptimize(w.flattened().data());
  }
  state.counters["m"] = static_cast<double>(op.hypergraph().m());
}
BENCHMARK(BM_TransformSize)->Arg(71)->Arg(100)->Arg(141)->Arg(200)->Arg(283)->Unit(benchmark::kMillisecond);

void BM_Threads(benchmark::State& state) {
  DiffusionOperator op(lifted_grid(224));
  op.set_threads(static_cast<std::size_t>(state.range(0)));
  const SignalMatrix x(random_signal(op.dim(), 32));
  for (auto _ : state) {
    auto w = wavelet_transform(op, x, dyadic_scales(4));
    benchmark::DoNotOptimize(w.flattened().data());
  }
}
BENCHMARK(BM_Threads)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
