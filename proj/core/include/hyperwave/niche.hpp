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

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hyperwave/dataset.hpp"
#include "hyperwave/delaunay.hpp"
#include "hyperwave/diffusion.hpp"
#include "hyperwave/hypergraph.hpp"
#include "hyperwave/wavelets.hpp"

namespace hyperwave {

enum class GraphMethod { kDelaunay, kKnn };

struct NicheConfig {
  GraphMethod graph_method = GraphMethod::kDelaunay;
  std::size_t knn_k = 6;
  std::size_t hop_k = 3;
  /// Explicit gene pairs for pairwise correlation; when unset, all pairs
  /// among the `top_variance_genes` most variable genes are used.
  std::optional<std::vector<std::pair<std::size_t, std::size_t>>> gene_pairs;
  std::size_t top_variance_genes = 20;
  std::size_t min_cells_for_correlation = 3;
  std::size_t threads = 1;

  /// Throws ConfigError.
  void validate() const;
};

/// Jitter applied to a coincident point before triangulation.
struct JitterRecord {
  std::size_t index = 0;
  double dx = 0.0;
  double dy = 0.0;
};

struct SpatialGraph {
  Hypergraph graph;  // 2-uniform
  std::vector<JitterRecord> jitter;
};

/// Cell-cell proximity graph as a 2-uniform hypergraph.
///
/// Delaunay mode links Delaunay-adjacent points (the Voronoi adjacency
/// dual). Repeated coordinates are moved by 1e-9 of the bounding-box
/// diagonal, deterministically, and logged. kNN mode keeps an edge when
/// either endpoint selects the other; ties break by lower index.
/// Throws TooFewPoints or DegenerateGeometry.
SpatialGraph build_spatial_graph(const Eigen::MatrixXd& coords,
                                 const NicheConfig& cfg);

/// One hyperedge per vertex v holding every w with d(v, w) <= k, anchored at
/// v. Identical neighborhoods stay separate hyperedges.
Hypergraph khop_lift(const Hypergraph& g0, std::size_t k);

inline constexpr double kLibrarySize = 10000.0;

/// log(1 + L * c / sum(c)) per cell row, L = 10,000.
/// Throws ZeroLibraryCell or InvalidArgument (negative counts).
Eigen::MatrixXd lognormalize(const Eigen::MatrixXd& counts);

enum class FeatureFamily { kMean, kPairCorrelation, kDiffusionCorrelation, kTypeCount };

struct FeatureColumn {
  FeatureFamily family = FeatureFamily::kMean;
  std::size_t gene = 0;        // kMean, kDiffusionCorrelation, first of pair
  std::size_t gene_b = 0;      // second of pair
  std::string granularity;     // kTypeCount
  std::string label;           // kTypeCount
  std::string name;            // CSV header
};

struct HyperedgeFeatureMatrix {
  Eigen::MatrixXd values;  // m x p
  std::vector<FeatureColumn> column_schema;
};

/// Gene pairs actually used: the explicit list, else all pairs (a < b)
/// among the most variable genes, ordered by index.
std::vector<std::pair<std::size_t, std::size_t>> resolve_gene_pairs(
    const Eigen::MatrixXd& norm_expr, const NicheConfig& cfg);

/// Pearson correlation, with 0 returned when fewer than `min_count` samples
/// are given or either input is constant.
double pearson_or_zero(const Eigen::Ref<const Eigen::VectorXd>& a,
                       const Eigen::Ref<const Eigen::VectorXd>& b,
                       std::size_t min_count);

/// Per-hyperedge features: gene means, within-edge gene pair correlations,
/// within-edge correlation of each gene with its one-step diffused value
/// (diffusion taken over the whole hypergraph), and label counts at the
/// three granularities.
HyperedgeFeatureMatrix hyperedge_features(const Hypergraph& g,
                                          const Eigen::MatrixXd& norm_expr,
                                          const SpatialDataset& data,
                                          const NicheConfig& cfg,
                                          const DiffusionOperator& op);

/// Wavelet coefficients of z on the dual hypergraph, flattened to
/// m x (J+1) p. Row j represents hyperedge j.
Eigen::MatrixXd niche_representations(const Hypergraph& g,
                                      const HyperedgeFeatureMatrix& z,
                                      const ScaleSequence& scales,
                                      std::size_t threads = 1);

}  // namespace hyperwave
