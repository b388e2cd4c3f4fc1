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

#include "hyperwave/niche.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "hyperwave/error.hpp"
#include "hyperwave/parallel.hpp"

namespace hyperwave {

void NicheConfig::validate() const {
  if (hop_k < 1) fail(ErrorCode::kConfigError, "hop_k must be >= 1");
  if (graph_method == GraphMethod::kKnn && knn_k < 1) {
    fail(ErrorCode::kConfigError, "knn_k must be >= 1");
  }
  if (!gene_pairs && top_variance_genes < 2) {
    fail(ErrorCode::kConfigError, "top_variance_genes must be >= 2");
  }
  if (min_cells_for_correlation < 3) {
    fail(ErrorCode::kConfigError, "min_cells_for_correlation must be >= 3");
  }
}

namespace {

std::vector<Point2> jittered_points(const Eigen::MatrixXd& coords,
                                    std::vector<JitterRecord>& log) {
  const auto n = static_cast<std::size_t>(coords.rows());
  std::vector<Point2> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i] = {coords(static_cast<Eigen::Index>(i), 0),
              coords(static_cast<Eigen::Index>(i), 1)};
  }
  const double diag = std::hypot(coords.col(0).maxCoeff() - coords.col(0).minCoeff(),
                                 coords.col(1).maxCoeff() - coords.col(1).minCoeff());
  const double magnitude = 1e-9 * diag;
  constexpr double kGoldenAngle = 2.39996322972865332;
  std::map<std::pair<double, double>, std::size_t> seen;
  for (std::size_t i = 0; i < n; ++i) {
    const auto key = std::make_pair(pts[i].x, pts[i].y);
    const std::size_t occurrence = seen[key]++;
    if (occurrence == 0 || magnitude == 0.0) continue;
    const double angle = kGoldenAngle * static_cast<double>(occurrence);
    JitterRecord rec{i, magnitude * std::cos(angle), magnitude * std::sin(angle)};
    pts[i].x += rec.dx;
    pts[i].y += rec.dy;
    log.push_back(rec);
  }
  return pts;
}

std::vector<std::pair<std::size_t, std::size_t>> knn_edges(
    const Eigen::MatrixXd& coords, std::size_t k) {
  const auto n = static_cast<std::size_t>(coords.rows());
  k = std::min(k, n - 1);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(n * k);
  std::vector<std::pair<double, std::size_t>> cand(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dx = coords(static_cast<Eigen::Index>(i), 0) - coords(static_cast<Eigen::Index>(j), 0);
      const double dy = coords(static_cast<Eigen::Index>(i), 1) - coords(static_cast<Eigen::Index>(j), 1);
      cand[c++] = {dx * dx + dy * dy, j};
    }
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
    for (std::size_t r = 0; r < k; ++r) {
      const std::size_t j = cand[r].second;
      edges.emplace_back(std::min(i, j), std::max(i, j));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace

SpatialGraph build_spatial_graph(const Eigen::MatrixXd& coords,
                                 const NicheConfig& cfg) {
  if (coords.cols() != 2) fail(ErrorCode::kDimensionMismatch, "coords must be n x 2");
  if (!coords.allFinite()) fail(ErrorCode::kNonFinite, "coordinates not finite");
  const auto n = static_cast<std::size_t>(coords.rows());
  std::vector<JitterRecord> jitter;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  if (cfg.graph_method == GraphMethod::kDelaunay) {
    if (n < 3) fail(ErrorCode::kTooFewPoints, "Delaunay mode needs n >= 3");
    edges = delaunay_edges(jittered_points(coords, jitter));
  } else {
    if (n < 2) fail(ErrorCode::kTooFewPoints, "kNN mode needs n >= 2");
    if (cfg.knn_k < 1) fail(ErrorCode::kConfigError, "knn_k must be >= 1");
    edges = knn_edges(coords, cfg.knn_k);
  }
  std::vector<std::vector<std::size_t>> lists;
  lists.reserve(edges.size());
  for (const auto& [a, b] : edges) lists.push_back({a, b});
  return SpatialGraph{build_hypergraph(n, lists), std::move(jitter)};
}

Hypergraph khop_lift(const Hypergraph& g0, std::size_t k) {
  if (k < 1) fail(ErrorCode::kInvalidArgument, "hop count k must be >= 1");
  const std::size_t n = g0.n();
  std::vector<std::vector<std::size_t>> edges(n);
  std::vector<std::size_t> stamp(n, kUnreachable);
  std::vector<std::size_t> frontier, next;
  for (std::size_t v = 0; v < n; ++v) {
    auto& members = edges[v];
    members.push_back(v);
    stamp[v] = v;
    frontier.assign(1, v);
    for (std::size_t depth = 0; depth < k && !frontier.empty(); ++depth) {
      next.clear();
      for (std::size_t u : frontier) {
        for (index_t e : g0.edges_of(u)) {
          for (index_t w : g0.members(e)) {
            if (stamp[w] != v) {
              stamp[w] = v;
              members.push_back(w);
              next.push_back(w);
            }
          }
        }
      }
      std::swap(frontier, next);
    }
    std::sort(members.begin(), members.end());
  }
  std::vector<std::size_t> anchors(n);
  std::iota(anchors.begin(), anchors.end(), 0);
  return build_hypergraph(n, edges).with_anchors(std::move(anchors));
}

Eigen::MatrixXd lognormalize(const Eigen::MatrixXd& counts) {
  if ((counts.array() < 0.0).any()) {
    fail(ErrorCode::kInvalidArgument, "counts must be nonnegative");
  }
  Eigen::MatrixXd out(counts.rows(), counts.cols());
  for (Eigen::Index i = 0; i < counts.rows(); ++i) {
    const double total = counts.row(i).sum();
    if (!(total > 0.0)) {
      fail(ErrorCode::kZeroLibraryCell,
           "cell " + std::to_string(i) + " has zero total count");
    }
    const double scale = kLibrarySize / total;
    for (Eigen::Index j = 0; j < counts.cols(); ++j) {
      out(i, j) = std::log1p(counts(i, j) * scale);
    }
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> resolve_gene_pairs(
    const Eigen::MatrixXd& norm_expr, const NicheConfig& cfg) {
  const auto q = static_cast<std::size_t>(norm_expr.cols());
  if (cfg.gene_pairs) {
    for (const auto& [a, b] : *cfg.gene_pairs) {
      if (a >= q || b >= q) {
        fail(ErrorCode::kIndexOutOfRange,
             "gene pair (" + std::to_string(a) + ", " + std::to_string(b) +
                 ") out of range for q = " + std::to_string(q));
      }
    }
    return *cfg.gene_pairs;
  }
  std::vector<double> variance(q, 0.0);
  const double rows = static_cast<double>(norm_expr.rows());
  for (std::size_t j = 0; j < q; ++j) {
    const auto col = norm_expr.col(static_cast<Eigen::Index>(j));
    const double mean = col.sum() / rows;
    variance[j] = (col.array() - mean).square().sum() / rows;
  }
  std::vector<std::size_t> genes(q);
  std::iota(genes.begin(), genes.end(), 0);
  std::stable_sort(genes.begin(), genes.end(), [&](std::size_t a, std::size_t b) {
    return variance[a] > variance[b];
  });
  genes.resize(std::min(q, cfg.top_variance_genes));
  std::sort(genes.begin(), genes.end());
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < genes.size(); ++a) {
    for (std::size_t b = a + 1; b < genes.size(); ++b) {
      pairs.emplace_back(genes[a], genes[b]);
    }
  }
  return pairs;
}

double pearson_or_zero(const Eigen::Ref<const Eigen::VectorXd>& a,
                       const Eigen::Ref<const Eigen::VectorXd>& b,
                       std::size_t min_count) {
  const Eigen::Index n = a.size();
  if (n != b.size()) fail(ErrorCode::kDimensionMismatch, "pearson length mismatch");
  if (static_cast<std::size_t>(n) < min_count || n < 2) return 0.0;
  const bool a_const = (a.array() == a(0)).all();
  const bool b_const = (b.array() == b(0)).all();
  if (a_const || b_const) return 0.0;
  const double ma = a.sum() / static_cast<double>(n);
  const double mb = b.sum() / static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double da = a(i) - ma;
    const double db = b(i) - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

HyperedgeFeatureMatrix hyperedge_features(const Hypergraph& g,
                                          const Eigen::MatrixXd& norm_expr,
                                          const SpatialDataset& data,
                                          const NicheConfig& cfg,
                                          const DiffusionOperator& op) {
  const std::size_t n = g.n();
  const auto q = static_cast<std::size_t>(norm_expr.cols());
  if (static_cast<std::size_t>(norm_expr.rows()) != n || op.dim() != n) {
    fail(ErrorCode::kDimensionMismatch,
         "expression rows, hypergraph and operator disagree on n");
  }
  if (!norm_expr.allFinite()) fail(ErrorCode::kNonFinite, "normalized expression");

  struct Granularity {
    const char* name;
    const Categorical* labels;
  };
  const std::vector<Granularity> levels{{"cell_type", &data.cell_types},
                                        {"subclass", &data.subclasses},
                                        {"supertype", &data.supertypes}};
  for (const auto& lv : levels) {
    if (lv.labels->size() != n) {
      fail(ErrorCode::kDimensionMismatch,
           std::string(lv.name) + " labels do not cover every cell");
    }
    for (std::size_t c : lv.labels->codes) {
      if (c >= lv.labels->vocabulary.size()) {
        fail(ErrorCode::kUnknownLabel,
             std::string(lv.name) + " code " + std::to_string(c) + " not in vocabulary");
      }
    }
  }

  auto gene_name = [&](std::size_t j) {
    return j < data.gene_names.size() ? data.gene_names[j] : "g" + std::to_string(j);
  };
  const auto pairs = resolve_gene_pairs(norm_expr, cfg);

  HyperedgeFeatureMatrix z;
  auto& schema = z.column_schema;
  for (std::size_t j = 0; j < q; ++j) {
    schema.push_back({FeatureFamily::kMean, j, 0, {}, {}, "mean:" + gene_name(j)});
  }
  for (const auto& [a, b] : pairs) {
    schema.push_back({FeatureFamily::kPairCorrelation, a, b, {}, {},
                      "corr:" + gene_name(a) + ":" + gene_name(b)});
  }
  for (std::size_t j = 0; j < q; ++j) {
    schema.push_back({FeatureFamily::kDiffusionCorrelation, j, 0, {}, {},
                      "diffcorr:" + gene_name(j)});
  }
  for (const auto& lv : levels) {
    for (const auto& label : lv.labels->vocabulary) {
      schema.push_back({FeatureFamily::kTypeCount, 0, 0, lv.name, label,
                        std::string("count:") + lv.name + ":" + label});
    }
  }

  Eigen::MatrixXd diffused;
  op.apply_into(norm_expr, diffused);

  const std::size_t m = g.m();
  const std::size_t p = schema.size();
  z.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                   static_cast<Eigen::Index>(p));
  const std::size_t pair_offset = q;
  const std::size_t diff_offset = q + pairs.size();
  const std::size_t count_offset = diff_offset + q;

  parallel_for_chunks(m, cfg.threads, [&](std::size_t begin, std::size_t end) {
    Eigen::MatrixXd local, local_diff;
    for (std::size_t e = begin; e < end; ++e) {
      const auto mem = g.members(e);
      const auto size = static_cast<Eigen::Index>(mem.size());
      local.resize(size, static_cast<Eigen::Index>(q));
      local_diff.resize(size, static_cast<Eigen::Index>(q));
      for (Eigen::Index r = 0; r < size; ++r) {
        local.row(r) = norm_expr.row(mem[static_cast<std::size_t>(r)]);
        local_diff.row(r) = diffused.row(mem[static_cast<std::size_t>(r)]);
      }
      auto row = z.values.row(static_cast<Eigen::Index>(e));
      for (std::size_t j = 0; j < q; ++j) {
        row(static_cast<Eigen::Index>(j)) =
            local.col(static_cast<Eigen::Index>(j)).sum() / static_cast<double>(size);
      }
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        row(static_cast<Eigen::Index>(pair_offset + k)) = pearson_or_zero(
            local.col(static_cast<Eigen::Index>(pairs[k].first)),
            local.col(static_cast<Eigen::Index>(pairs[k].second)),
            cfg.min_cells_for_correlation);
      }
      for (std::size_t j = 0; j < q; ++j) {
        row(static_cast<Eigen::Index>(diff_offset + j)) =
            pearson_or_zero(local.col(static_cast<Eigen::Index>(j)),
                            local_diff.col(static_cast<Eigen::Index>(j)),
                            cfg.min_cells_for_correlation);
      }
      std::size_t offset = count_offset;
      for (const auto& lv : levels) {
        for (index_t v : mem) {
          row(static_cast<Eigen::Index>(offset + lv.labels->codes[v])) += 1.0;
        }
        offset += lv.labels->vocabulary.size();
      }
    }
  });
  return z;
}

Eigen::MatrixXd niche_representations(const Hypergraph& g,
                                      const HyperedgeFeatureMatrix& z,
                                      const ScaleSequence& scales,
                                      std::size_t threads) {
  if (static_cast<std::size_t>(z.values.rows()) != g.m()) {
    fail(ErrorCode::kDimensionMismatch,
         "feature rows " + std::to_string(z.values.rows()) + " != hyperedges " +
             std::to_string(g.m()));
  }
  DiffusionOperator op(dual(g));
  op.set_threads(threads);
  return wavelet_transform(op, SignalMatrix(z.values), scales).release();
}

}  // namespace hyperwave
