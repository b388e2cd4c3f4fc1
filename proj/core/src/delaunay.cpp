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

#include "hyperwave/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "hyperwave/error.hpp"

namespace hyperwave {

double orient2d(const Point2& a, const Point2& b, const Point2& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

double incircle(const Point2& a, const Point2& b, const Point2& c,
                const Point2& d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  return adx * (bdy * clift - blift * cdy) - ady * (bdx * clift - blift * cdx) +
         alift * (bdx * cdy - bdy * cdx);
}

namespace {

constexpr std::size_t kGhost = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Vertex v[i] is opposite the edge v[i+1] -> v[i+2]; nb[i] is the triangle
// across that edge. Ghost triangles keep the ghost vertex in slot 2, so their
// finite edge v[0] -> v[1] has the outside of the hull on its left.
struct Tri {
  std::array<std::size_t, 3> v{};
  std::array<std::size_t, 3> nb{kNone, kNone, kNone};
  bool alive = true;

  bool ghost() const { return v[2] == kGhost; }
};

class Triangulator {
 public:
  explicit Triangulator(const std::vector<Point2>& pts) : pts_(pts) {}

  void run() {
    const std::size_t n = pts_.size();
    if (n < 3) fail(ErrorCode::kTooFewPoints, "Delaunay needs at least 3 points");
    std::vector<std::size_t> order = insertion_order();
    // Seed with the first non-collinear triple in insertion order.
    const std::size_t a = order[0];
    const std::size_t b = order[1];
    std::size_t pos_c = kNone;
    for (std::size_t k = 2; k < n; ++k) {
      if (orient2d(pts_[a], pts_[b], pts_[order[k]]) != 0.0) {
        pos_c = k;
        break;
      }
    }
    if (pos_c == kNone) {
      fail(ErrorCode::kDegenerateGeometry, "all points are collinear");
    }
    const std::size_t c = order[pos_c];
    seed(a, b, c);
    for (std::size_t k = 2; k < n; ++k) {
      if (k == pos_c) continue;
      insert(order[k]);
    }
  }

  std::vector<std::array<std::size_t, 3>> triangles() const {
    std::vector<std::array<std::size_t, 3>> out;
    for (const Tri& t : tris_) {
      if (t.alive && !t.ghost()) out.push_back(t.v);
    }
    return out;
  }

 private:
  // Snake order over a coarse grid keeps consecutive insertions close, so
  // the point-location walk stays short.
  std::vector<std::size_t> insertion_order() const {
    const std::size_t n = pts_.size();
    double minx = pts_[0].x, maxx = minx, miny = pts_[0].y, maxy = miny;
    for (const Point2& p : pts_) {
      minx = std::min(minx, p.x);
      maxx = std::max(maxx, p.x);
      miny = std::min(miny, p.y);
      maxy = std::max(maxy, p.y);
    }
    const auto side = static_cast<std::size_t>(
        std::max(1.0, std::ceil(std::sqrt(static_cast<double>(n) / 4.0))));
    const double w = std::max(maxx - minx, 1e-300);
    const double h = std::max(maxy - miny, 1e-300);
    std::vector<std::uint64_t> key(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto cx = static_cast<std::size_t>((pts_[i].x - minx) / w * static_cast<double>(side));
      auto cy = static_cast<std::size_t>((pts_[i].y - miny) / h * static_cast<double>(side));
      cx = std::min(cx, side - 1);
      cy = std::min(cy, side - 1);
      if (cy % 2 == 1) cx = side - 1 - cx;
      key[i] = static_cast<std::uint64_t>(cy) * side + cx;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return key[l] < key[r]; });
    return order;
  }

  void seed(std::size_t a, std::size_t b, std::size_t c) {
    if (orient2d(pts_[a], pts_[b], pts_[c]) < 0) std::swap(b, c);
    // Real triangle 0 = (a, b, c); ghosts 1..3 sit across edges a->b, b->c,
    // c->a respectively.
    tris_.push_back({{a, b, c}, {2, 3, 1}});
    tris_.push_back({{b, a, kGhost}, {kNone, kNone, 0}});
    tris_.push_back({{c, b, kGhost}, {kNone, kNone, 0}});
    tris_.push_back({{a, c, kGhost}, {kNone, kNone, 0}});
    // Ghost (u, w, G): nb[0] across w->G is the ghost whose first vertex is
    // w, nb[1] across G->u is the ghost whose second vertex is u.
    link_ghost_ring({1, 2, 3});
    last_ = 0;
  }

  void link_ghost_ring(const std::vector<std::size_t>& ghosts) {
    for (std::size_t gi : ghosts) {
      for (std::size_t gj : ghosts) {
        if (gi == gj) continue;
        if (tris_[gj].v[0] == tris_[gi].v[1]) tris_[gi].nb[0] = gj;
        if (tris_[gj].v[1] == tris_[gi].v[0]) tris_[gi].nb[1] = gj;
      }
    }
  }

  bool conflicts(const Tri& t, std::size_t p) const {
    const Point2& q = pts_[p];
    if (t.ghost()) {
      const Point2& u = pts_[t.v[0]];
      const Point2& w = pts_[t.v[1]];
      const double o = orient2d(u, w, q);
      if (o > 0) return true;
      if (o < 0) return false;
      // Collinear with the hull edge: conflict only strictly inside it.
      const double dot = (q.x - u.x) * (w.x - u.x) + (q.y - u.y) * (w.y - u.y);
      const double len2 = (w.x - u.x) * (w.x - u.x) + (w.y - u.y) * (w.y - u.y);
      return dot > 0 && dot < len2;
    }
    return incircle(pts_[t.v[0]], pts_[t.v[1]], pts_[t.v[2]], q) > 0;
  }

  std::size_t locate(std::size_t p) {
    const Point2& q = pts_[p];
    std::size_t cur = last_;
    if (!tris_[cur].alive) cur = first_alive();
    const std::size_t budget = 4 * tris_.size() + 16;
    for (std::size_t step = 0; step < budget; ++step) {
      const Tri& t = tris_[cur];
      if (t.ghost()) {
        if (conflicts(t, p)) return cur;
        cur = t.nb[2];
        continue;
      }
      std::size_t next = kNone;
      for (std::size_t r = 0; r < 3; ++r) {
        const std::size_t i = (r + step) % 3;
        const Point2& e0 = pts_[t.v[(i + 1) % 3]];
        const Point2& e1 = pts_[t.v[(i + 2) % 3]];
        if (orient2d(e0, e1, q) < 0) {
          next = t.nb[i];
          break;
        }
      }
      if (next == kNone) {
        if (conflicts(t, p)) return cur;
        break;
      }
      cur = next;
    }
    for (std::size_t i = 0; i < tris_.size(); ++i) {
      if (tris_[i].alive && conflicts(tris_[i], p)) return i;
    }
    fail(ErrorCode::kDegenerateGeometry,
         "point " + std::to_string(p) + " conflicts with no triangle (duplicate?)");
  }

  std::size_t first_alive() const {
    for (std::size_t i = 0; i < tris_.size(); ++i) {
      if (tris_[i].alive) return i;
    }
    return 0;
  }

  void insert(std::size_t p) {
    const std::size_t start = locate(p);
    std::vector<std::size_t> cavity{start};
    std::vector<std::size_t> stack{start};
    in_cavity_.resize(tris_.size(), 0);
    in_cavity_[start] = 1;
    while (!stack.empty()) {
      const std::size_t t = stack.back();
      stack.pop_back();
      for (std::size_t nb : tris_[t].nb) {
        if (in_cavity_[nb]) continue;
        if (conflicts(tris_[nb], p)) {
          in_cavity_[nb] = 1;
          cavity.push_back(nb);
          stack.push_back(nb);
        }
      }
    }

    struct Boundary {
      std::size_t a, b, outside;
    };
    std::vector<Boundary> boundary;
    for (std::size_t t : cavity) {
      const Tri& tri = tris_[t];
      for (std::size_t i = 0; i < 3; ++i) {
        if (!in_cavity_[tri.nb[i]]) {
          boundary.push_back({tri.v[(i + 1) % 3], tri.v[(i + 2) % 3], tri.nb[i]});
        }
      }
    }
    for (std::size_t t : cavity) {
      tris_[t].alive = false;
      in_cavity_[t] = 0;
      free_.push_back(t);
    }

    // New triangles are laid out as (a, b, p): nb[2] = outside, nb[0] is the
    // new triangle starting at b, nb[1] is the one ending at a.
    std::vector<std::size_t> created;
    created.reserve(boundary.size());
    for (const Boundary& e : boundary) {
      const std::size_t id = allocate();
      tris_[id] = Tri{{e.a, e.b, p}, {kNone, kNone, e.outside}};
      Tri& out = tris_[e.outside];
      for (std::size_t i = 0; i < 3; ++i) {
        const std::size_t s = out.v[(i + 1) % 3];
        const std::size_t d = out.v[(i + 2) % 3];
        if (s == e.b && d == e.a) out.nb[i] = id;
      }
      created.push_back(id);
    }
    for (std::size_t i : created) {
      for (std::size_t j : created) {
        if (i == j) continue;
        if (tris_[j].v[0] == tris_[i].v[1]) tris_[i].nb[0] = j;
        if (tris_[j].v[1] == tris_[i].v[0]) tris_[i].nb[1] = j;
      }
    }
    // Rotate ghosts so the ghost vertex sits in slot 2.
    for (std::size_t id : created) {
      Tri& t = tris_[id];
      while (t.v[2] != kGhost && (t.v[0] == kGhost || t.v[1] == kGhost)) {
        std::rotate(t.v.begin(), t.v.begin() + 1, t.v.end());
        std::rotate(t.nb.begin(), t.nb.begin() + 1, t.nb.end());
      }
      if (!t.ghost()) last_ = id;
    }
  }

  std::size_t allocate() {
    if (!free_.empty()) {
      const std::size_t id = free_.back();
      free_.pop_back();
      return id;
    }
    tris_.emplace_back();
    in_cavity_.push_back(0);
    return tris_.size() - 1;
  }

  const std::vector<Point2>& pts_;
  std::vector<Tri> tris_;
  std::vector<char> in_cavity_;
  std::vector<std::size_t> free_;
  std::size_t last_ = 0;
};

}  // namespace

std::vector<std::array<std::size_t, 3>> delaunay_triangles(
    const std::vector<Point2>& points) {
  Triangulator tri(points);
  tri.run();
  return tri.triangles();
}

std::vector<std::pair<std::size_t, std::size_t>> delaunay_edges(
    const std::vector<Point2>& points) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& t : delaunay_triangles(points)) {
    for (std::size_t i = 0; i < 3; ++i) {
      std::size_t a = t[i];
      std::size_t b = t[(i + 1) % 3];
      if (a > b) std::swap(a, b);
      edges.emplace_back(a, b);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace hyperwave
