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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyperwave/dataset.hpp"

namespace hyperwave {

// ---------------------------------------------------------------------------
// Vendi diversity score

enum class VendiKernel { kCosine, kRbf };

struct VendiOptions {
  VendiKernel kernel = VendiKernel::kCosine;
  double rbf_bandwidth = 1.0;
};

/// exp of the Shannon entropy of the eigenvalues of K/m, where K is a unit
/// diagonal similarity kernel over the rows. Lies in [1, m].
///
/// The cosine kernel is evaluated through the smaller of the m x m and
/// p x p Gram matrices; both share their nonzero spectrum. Throws ZeroRow
/// (cosine kernel), InvalidArgument or EigenSolverFailure.
double vendi_score(const Eigen::MatrixXd& features, const VendiOptions& opts = {});

/// Entropy-based score from an explicit spectrum of K/m; 0 log 0 := 0.
double vendi_from_eigenvalues(const Eigen::VectorXd& eigenvalues);

// ---------------------------------------------------------------------------
// Linear probe

struct EvalConfig {
  bool standardize = true;
  double train_fraction = 0.8;
  double l2_penalty = 1e-2;
  std::size_t max_iterations = 500;
  double tolerance = 1e-8;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  /// Hold out whole groups instead of a stratified per-row split.
  bool group_holdout = false;

  /// Throws ConfigError.
  void validate() const;
};

struct LogisticModel {
  Eigen::MatrixXd weights;  // p x K
  Eigen::RowVectorXd bias;  // K
  std::vector<double> objective_history;
  double gradient_norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;

  /// Row-wise class probabilities.
  Eigen::MatrixXd predict_proba(const Eigen::MatrixXd& x) const;
};

/// Multinomial logistic regression minimising
///   mean(-log p_y) + l2/2 ||W||^2   (bias unpenalised)
/// by monotone accelerated gradient descent with a fixed 1/L step from a
/// power-iteration curvature bound, falling back to a plain gradient step
/// (and restarting momentum) whenever the accelerated step would increase
/// the objective. Deterministic for fixed inputs.
LogisticModel fit_multinomial_logistic(const Eigen::MatrixXd& x,
                                       const std::vector<std::size_t>& y,
                                       std::size_t num_classes, double l2,
                                       std::size_t max_iterations, double tolerance);

struct ClassMetrics {
  std::string label;
  std::size_t support = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auroc = 0.0;
};

struct ProbeMetrics {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double auroc_ovr = 0.0;
  std::vector<ClassMetrics> per_class;
  std::uint64_t split_seed = 0;
  bool converged = false;
  double gradient_norm = 0.0;
  std::size_t iterations = 0;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

struct ProbeSummary {
  std::vector<ProbeMetrics> runs;
  MeanStd accuracy;
  MeanStd macro_f1;
  MeanStd auroc_ovr;
  /// True when any run stopped at max_iterations (NonConvergence).
  bool non_convergence = false;
};

/// Fits one probe per seed on a stratified train split and scores the held
/// out rows. Classes absent from `labels` are ignored. `groups` (one code
/// per row) is required when cfg.group_holdout is set.
/// Throws SingleClass, ClassTooSmall, DimensionMismatch.
ProbeSummary linear_probe(const Eigen::MatrixXd& features, const Categorical& labels,
                          const EvalConfig& cfg,
                          const std::vector<std::size_t>* groups = nullptr);

/// Macro one-vs-rest AUROC helper: area under ROC of `scores` for the
/// positives in `positive`, ties counted as 1/2.
double auroc(const std::vector<double>& scores, const std::vector<bool>& positive);

// ---------------------------------------------------------------------------
// Spectral clustering

struct ClusterOptions {
  std::size_t neighbors = 15;
  std::size_t restarts = 20;
  std::uint64_t seed = 0;
  std::size_t max_kmeans_iterations = 300;
  /// Above this size the eigenvectors come from filtered subspace iteration
  /// instead of a dense solver.
  std::size_t dense_limit = 1000;
};

struct ClusterResult {
  std::vector<std::size_t> labels;
  double inertia = 0.0;
  /// Set when the spectral embedding could not be computed
  /// (DegenerateEigenspace) and k-means ran on the raw rows instead.
  bool degenerate_fallback = false;
};

/// Cosine kNN graph, symmetric normalized Laplacian, bottom-k eigenvectors,
/// row normalisation, then seeded farthest-point k-means with restarts.
/// Throws InvalidArgument unless m > k >= 2.
ClusterResult spectral_cluster(const Eigen::MatrixXd& features, std::size_t k,
                               const ClusterOptions& opts = {});

/// Lloyd k-means with seeded farthest-point initialisation; best of
/// `restarts` by inertia.
ClusterResult kmeans(const Eigen::MatrixXd& points, std::size_t k,
                     std::size_t restarts, std::uint64_t seed,
                     std::size_t max_iterations);

double adjusted_rand_index(const std::vector<std::size_t>& a,
                           const std::vector<std::size_t>& b);

/// Per-column z-scoring statistics; zero-variance columns get scale 1.
struct Standardizer {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static Standardizer fit(const Eigen::MatrixXd& x);
  Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const;
};

}  // namespace hyperwave
