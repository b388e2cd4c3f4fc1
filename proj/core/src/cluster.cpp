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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "hyperwave/error.hpp"
#include "hyperwave/eval.hpp"
#include "hyperwave/sparse.hpp"

namespace hyperwave {

namespace {

Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd u = x;
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double norm = u.row(i).norm();
    if (norm > 0.0) u.row(i) /= norm;
  }
  return u;
}

// Symmetrised cosine kNN connectivity 0.5 (A + A^T), as CSR.
CsrMatrix cosine_knn_graph(const Eigen::MatrixXd& u, std::size_t neighbors) {
  const auto m = static_cast<std::size_t>(u.rows());
  neighbors = std::min(neighbors, m - 1);
  std::vector<std::vector<index_t>> picks(m);
  constexpr Eigen::Index kBlock = 256;
  std::vector<std::pair<double, std::size_t>> cand;
  for (Eigen::Index start = 0; start < u.rows(); start += kBlock) {
    const Eigen::Index len = std::min(kBlock, u.rows() - start);
    const Eigen::MatrixXd sim = u.middleRows(start, len) * u.transpose();
    for (Eigen::Index r = 0; r < len; ++r) {
      const auto i = static_cast<std::size_t>(start + r);
      cand.clear();
      for (std::size_t j = 0; j < m; ++j) {
        if (j != i) cand.emplace_back(-sim(r, static_cast<Eigen::Index>(j)), j);
      }
      std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(neighbors),
                        cand.end());
      for (std::size_t t = 0; t < neighbors; ++t) {
        picks[i].push_back(static_cast<index_t>(cand[t].second));
      }
    }
  }
  std::vector<std::map<index_t, double>> rows(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (index_t j : picks[i]) {
      rows[i][j] += 0.5;
      rows[j][static_cast<index_t>(i)] += 0.5;
    }
  }
  CsrMatrix w;
  w.rows = w.cols = m;
  w.row_ptr.push_back(0);
  for (const auto& row : rows) {
    for (const auto& [j, v] : row) {
      w.col_idx.push_back(j);
      w.values.push_back(v);
    }
    w.row_ptr.push_back(w.col_idx.size());
  }
  return w;
}

// y = M x for M = D^-1/2 W D^-1/2, column by column.
void normalized_multiply(const CsrMatrix& w, const Eigen::VectorXd& inv_sqrt_deg,
                         const Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
  y.resize(x.rows(), x.cols());
  Eigen::VectorXd scaled(x.rows());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    scaled = x.col(c).cwiseProduct(inv_sqrt_deg);
    w.multiply(std::span<const double>(scaled.data(), static_cast<std::size_t>(scaled.size())),
               std::span<double>(y.col(c).data(), static_cast<std::size_t>(y.rows())));
    y.col(c).array() *= inv_sqrt_deg.array();
  }
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& v) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
  return qr.householderQ() * Eigen::MatrixXd::Identity(v.rows(), v.cols());
}

// Top-k eigenvectors of M by Chebyshev-filtered subspace iteration. The
// spectrum of M lies in [-1, 1]; the filter damps [-1, cutoff], where cutoff
// is the smallest Ritz value of the current block.
bool top_eigenvectors_iterative(const CsrMatrix& w, const Eigen::VectorXd& inv_sqrt_deg,
                                std::size_t k, std::uint64_t seed, Eigen::MatrixXd& out) {
  const Eigen::Index m = static_cast<Eigen::Index>(w.rows);
  const Eigen::Index block = std::min<Eigen::Index>(m, static_cast<Eigen::Index>(k) + 12);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd v(m, block);
  for (Eigen::Index j = 0; j < block; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) v(i, j) = gauss(rng);
  }
  v = orthonormalize(v);
  Eigen::MatrixXd mv, y0, y1, y2;
  constexpr int kDegree = 12;
  constexpr int kMaxOuter = 400;
  constexpr double kTolerance = 1e-6;
  for (int outer = 0; outer < kMaxOuter; ++outer) {
    normalized_multiply(w, inv_sqrt_deg, v, mv);
    const Eigen::MatrixXd h = v.transpose() * mv;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (h + h.transpose()));
    if (es.info() != Eigen::Success) return false;
    // Ascending eigenvalues; reverse so column 0 is the largest.
    const Eigen::MatrixXd q = es.eigenvectors().rowwise().reverse();
    const Eigen::VectorXd theta = es.eigenvalues().reverse();
    v = v * q;
    mv = mv * q;
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const auto c = static_cast<Eigen::Index>(j);
      worst = std::max(worst, (mv.col(c) - theta(c) * v.col(c)).norm());
    }
    if (worst < kTolerance) {
      out = v.leftCols(static_cast<Eigen::Index>(k));
      return true;
    }
    const double cutoff = theta(block - 1);
    const double lower = -1.0 - 1e-12;
    if (cutoff <= lower) return false;
    const double center = 0.5 * (cutoff + lower);
    const double half = 0.5 * (cutoff - lower);
    y0 = v;
    y1 = (mv - center * v) / half;
    for (int d = 2; d <= kDegree; ++d) {
      normalized_multiply(w, inv_sqrt_deg, y1, y2);
      y2 = 2.0 * (y2 - center * y1) / half - y0;
      std::swap(y0, y1);
      std::swap(y1, y2);
    }
    if (!y1.allFinite()) return false;
    v = orthonormalize(y1);
  }
  return false;
}

}  // namespace

ClusterResult kmeans(const Eigen::MatrixXd& points, std::size_t k, std::size_t restarts,
                     std::uint64_t seed, std::size_t max_iterations) {
  const auto m = static_cast<std::size_t>(points.rows());
  if (k == 0 || k > m) fail(ErrorCode::kInvalidArgument, "k-means needs 1 <= k <= m");
  const Eigen::Index d = points.cols();
  ClusterResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  restarts = std::max<std::size_t>(restarts, 1);

  auto sqdist = [&](std::size_t i, const Eigen::MatrixXd& centers, Eigen::Index c) {
    return (points.row(static_cast<Eigen::Index>(i)) - centers.row(c)).squaredNorm();
  };

  for (std::size_t r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(seed + r);
    Eigen::MatrixXd centers(static_cast<Eigen::Index>(k), d);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    centers.row(0) = points.row(static_cast<Eigen::Index>(pick(rng)));
    std::vector<double> closest(m, std::numeric_limits<double>::infinity());
    for (std::size_t c = 1; c < k; ++c) {
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < m; ++i) {
        closest[i] = std::min(closest[i], sqdist(i, centers, static_cast<Eigen::Index>(c - 1)));
        if (closest[i] > far_d) {
          far_d = closest[i];
          far = i;
        }
      }
      centers.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(far));
    }

    std::vector<std::size_t> assign(m, k);
    double inertia = 0.0;
    for (std::size_t it = 0; it < max_iterations; ++it) {
      bool changed = false;
      inertia = 0.0;
      std::vector<double> own(m);
      for (std::size_t i = 0; i < m; ++i) {
        std::size_t arg = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
          const double dist = sqdist(i, centers, static_cast<Eigen::Index>(c));
          if (dist < bd) {
            bd = dist;
            arg = c;
          }
        }
        if (assign[i] != arg) changed = true;
        assign[i] = arg;
        own[i] = bd;
        inertia += bd;
      }
      std::vector<std::size_t> sizes(k, 0);
      Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), d);
      for (std::size_t i = 0; i < m; ++i) {
        sums.row(static_cast<Eigen::Index>(assign[i])) += points.row(static_cast<Eigen::Index>(i));
        ++sizes[assign[i]];
      }
      for (std::size_t c = 0; c < k; ++c) {
        if (sizes[c] > 0) {
          centers.row(static_cast<Eigen::Index>(c)) =
              sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(sizes[c]);
          continue;
        }
        // Empty cluster: move it onto the worst-served point.
        const auto far = static_cast<std::size_t>(
            std::max_element(own.begin(), own.end()) - own.begin());
        centers.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(far));
        own[far] = 0.0;
        changed = true;
      }
      if (!changed) break;
    }
    if (inertia < best.inertia) {
      best.inertia = inertia;
      best.labels = assign;
    }
  }
  return best;
}

ClusterResult spectral_cluster(const Eigen::MatrixXd& features, std::size_t k,
                               const ClusterOptions& opts) {
  const auto m = static_cast<std::size_t>(features.rows());
  if (k < 2 || m <= k) {
    fail(ErrorCode::kInvalidArgument,
         "spectral clustering needs m > k >= 2 (m = " + std::to_string(m) +
             ", k = " + std::to_string(k) + ")");
  }
  if (!features.allFinite()) fail(ErrorCode::kNonFinite, "cluster features not finite");
  const Eigen::MatrixXd u = normalize_rows(features);
  const CsrMatrix w = cosine_knn_graph(u, std::max<std::size_t>(opts.neighbors, 1));
  Eigen::VectorXd inv_sqrt_deg(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    double deg = 0.0;
    for (double v : w.row_values(i)) deg += v;
    inv_sqrt_deg(static_cast<Eigen::Index>(i)) = 1.0 / std::sqrt(deg);
  }

  // Bottom-k eigenvectors of I - M are the top-k of M.
  Eigen::MatrixXd embedding;
  bool ok = true;
  if (m <= opts.dense_limit) {
    Eigen::MatrixXd dense = w.to_dense();
    dense = inv_sqrt_deg.asDiagonal() * dense * inv_sqrt_deg.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    ok = es.info() == Eigen::Success;
    if (ok) embedding = es.eigenvectors().rightCols(static_cast<Eigen::Index>(k)).rowwise().reverse();
  } else {
    ok = top_eigenvectors_iterative(w, inv_sqrt_deg, k, opts.seed, embedding);
  }
  if (!ok || !embedding.allFinite()) {
    ClusterResult fallback = kmeans(features, k, opts.restarts, opts.seed,
                                    opts.max_kmeans_iterations);
    fallback.degenerate_fallback = true;
    return fallback;
  }
  return kmeans(normalize_rows(embedding), k, opts.restarts, opts.seed,
                opts.max_kmeans_iterations);
}

double adjusted_rand_index(const std::vector<std::size_t>& a,
                           const std::vector<std::size_t>& b) {
  if (a.size() != b.size()) fail(ErrorCode::kDimensionMismatch, "ARI label lengths differ");
  const auto n = static_cast<double>(a.size());
  std::map<std::pair<std::size_t, std::size_t>, double> joint;
  std::map<std::size_t, double> ra, rb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1;
    ra[a[i]] += 1;
    rb[b[i]] += 1;
  }
  auto comb2 = [](double x) { return x * (x - 1) / 2.0; };
  double sum_joint = 0, sum_a = 0, sum_b = 0;
  for (const auto& [_, c] : joint) sum_joint += comb2(c);
  for (const auto& [_, c] : ra) sum_a += comb2(c);
  for (const auto& [_, c] : rb) sum_b += comb2(c);
  const double total = comb2(n);
  const double expected = total > 0 ? sum_a * sum_b / total : 0.0;
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;
  return (sum_joint - expected) / (max_index - expected);
}

}  // namespace hyperwave
