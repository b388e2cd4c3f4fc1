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
#include "hyperwave/dataset_io.hpp"
#include "hyperwave/eval.hpp"
#include "hyperwave/niche.hpp"
#include "hyperwave/wavelets.hpp"

namespace hyperwave {

inline constexpr const char* kCacheEnvVar = "HYPERWAVE_CACHE_DIR";

/// Library version string, recorded in every manifest.
const char* library_version();

/// Fully resolved pipeline settings. Paths are absolute once loaded.
struct PipelineConfig {
  std::string cells_path;
  std::string expression_path;
  ExpressionFormat expression_format = ExpressionFormat::kAuto;
  std::string output_dir = "out";
  bool write_csv = true;

  NicheConfig niche;
  /// "geneA:geneB" by name or "3:7" by index; overrides top-variance pairs.
  std::optional<std::vector<std::string>> gene_pair_specs;
  ScaleSequence scales = dyadic_scales(4);

  EvalConfig eval;
  std::string label = "condition";
  std::optional<std::string> group_by;
  VendiOptions vendi;
  bool vendi_standardize = true;
  bool baseline = true;

  std::size_t n_clusters = 4;
  ClusterOptions cluster;

  std::size_t threads = 1;
  std::uint64_t seed = 0;

  /// Input digests a manifest-driven rerun must reproduce; empty otherwise.
  std::string expected_cells_sha256;
  std::string expected_expression_sha256;
};

/// Loads a TOML-style pipeline config, or the config snapshot embedded in a
/// manifest.json written by a previous run. Relative paths resolve against
/// the file's directory. Throws ConfigError.
PipelineConfig load_pipeline_config(const std::string& path);

/// Command line overrides.
struct RunOverrides {
  std::optional<std::string> out_dir;
  std::optional<std::size_t> threads;
  std::optional<std::uint64_t> seed;
};
void apply_overrides(PipelineConfig& cfg, const RunOverrides& overrides);

/// In-memory stages shared by the CLI and tests.
struct NicheStageOutput {
  std::optional<Hypergraph> lifted;
  HyperedgeFeatureMatrix features;
  Eigen::MatrixXd representations;  // m x (J+1) p
  std::vector<std::string> representation_names;
  std::vector<JitterRecord> jitter;
  std::vector<std::size_t> anchors;
};
NicheStageOutput compute_niche_stage(const SpatialDataset& data, const PipelineConfig& cfg);

struct EvalReport {
  std::string label;
  ProbeSummary probe;
  /// Set instead of failing the run when the labels cannot support a probe
  /// (SingleClass, ClassTooSmall); holds the reason.
  std::optional<std::string> probe_skipped;
  double vendi = 0.0;
  std::optional<ProbeSummary> baseline_probe;
  std::optional<std::string> baseline_skipped;
  std::optional<double> baseline_vendi;
};

/// Probe + Vendi on representations whose row j belongs to cell anchors[j],
/// plus the raw-node-feature baseline when enabled.
EvalReport evaluate(const SpatialDataset& data, const Eigen::MatrixXd& representations,
                    const std::vector<std::size_t>& anchors, const PipelineConfig& cfg);

struct StageTiming {
  std::string name;
  double seconds = 0.0;
};

struct RunSummary {
  std::string output_dir;
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool cache_hit = false;
  EvalReport eval;
  ClusterResult clusters;
  /// n_clusters, capped at rows - 1 for tiny inputs.
  std::size_t effective_clusters = 0;
  std::vector<StageTiming> timings;
};

/// Runs ingest -> graph -> lift -> features -> wavelets -> eval -> cluster
/// and writes niche_features.csv, representations.bin, representations.csv
/// (optional), metrics.json, clusters.csv and manifest.json. Files written
/// by a failing run are removed. Wavelet outputs are reused from
/// $HYPERWAVE_CACHE_DIR when present.
RunSummary run_pipeline(const PipelineConfig& cfg);

/// Re-evaluates an existing run's representations.bin; rewrites metrics.json.
EvalReport eval_only(const PipelineConfig& cfg);

/// Re-clusters an existing run's representations.bin; rewrites clusters.csv.
ClusterResult cluster_only(const PipelineConfig& cfg);

struct IngestSummary {
  std::size_t cells = 0;
  std::size_t genes = 0;
  std::size_t cell_types = 0;
  std::size_t subclasses = 0;
  std::size_t supertypes = 0;
  std::size_t conditions = 0;
};
IngestSummary ingest_check(const PipelineConfig& cfg);

/// Human-readable names for the flattened representation columns:
/// "psi<i>:<feature>" for band-pass blocks and "phi<J>:<feature>".
std::vector<std::string> representation_column_names(const HyperedgeFeatureMatrix& z,
                                                     const ScaleSequence& scales);

}  // namespace hyperwave
