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

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

namespace hyperwave {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Twice the signed area of (a, b, c); positive when counter-clockwise.
double orient2d(const Point2& a, const Point2& b, const Point2& c);

/// Positive when d lies strictly inside the circumcircle of the
/// counter-clockwise triangle (a, b, c).
double incircle(const Point2& a, const Point2& b, const Point2& c,
                const Point2& d);

/// Undirected Delaunay edges (i < j, sorted) of a planar point set.
///
/// Incremental Bowyer-Watson with ghost triangles on the hull, so no
/// bounding super-triangle is involved and hull edges are exact. Points
/// must be pairwise distinct. Cocircular configurations resolve to one
/// valid triangulation (strict in-circle test). Throws TooFewPoints for
/// n < 3 and DegenerateGeometry when all points are collinear.
std::vector<std::pair<std::size_t, std::size_t>> delaunay_edges(
    const std::vector<Point2>& points);

/// Triangles (vertex triples, counter-clockwise) of the same triangulation.
std::vector<std::array<std::size_t, 3>> delaunay_triangles(
    const std::vector<Point2>& points);

}  // namespace hyperwave
