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

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace hyperwave {

/// Splits [0, count) into contiguous chunks, one per worker, and runs
/// fn(begin, end) on each. With threads <= 1 the call is inline. Chunk
/// boundaries depend only on (count, threads), so any per-item computation
/// that does not reduce across items is bitwise independent of threading.
template <typename Fn>
void parallel_for_chunks(std::size_t count, std::size_t threads, Fn&& fn) {
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (threads == 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  const std::size_t base = count / threads;
  const std::size_t extra = count % threads;
  std::size_t begin = 0;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t end = begin + base + (t < extra ? 1 : 0);
    workers.emplace_back([&fn, begin, end] { fn(begin, end); });
    begin = end;
  }
}

}  // namespace hyperwave
