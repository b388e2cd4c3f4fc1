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
#include <string>
#include <vector>

#include "hyperwave/config.hpp"
#include "hyperwave/dataset.hpp"

namespace hyperwave {

/// Synthetic tissue generator.
///
/// Each condition owns `sections_per_condition` tissue sections laid side by
/// side. A section is a jittered grid of cells split into Voronoi regions;
/// each region draws a niche archetype from its condition's archetype
/// frequencies. A cell's supertype is drawn from its archetype's mixture,
/// and its counts are Poisson around the supertype's expression profile,
/// modulated per archetype.
struct GeneratorConfig {
  std::size_t grid_rows = 40;
  std::size_t grid_cols = 40;
  double spacing = 1.0;
  double jitter = 0.35;  // fraction of spacing, uniform in +-jitter
  std::size_t sections_per_condition = 1;
  std::size_t regions_per_section = 6;
  std::size_t n_genes = 50;
  std::size_t n_cell_types = 3;
  std::size_t n_subclasses = 6;
  std::size_t n_supertypes = 12;
  std::size_t n_archetypes = 3;
  std::size_t n_conditions = 3;
  double mixture_concentration = 0.5;
  double archetype_expression_shift = 0.2;
  double mean_library_size = 200.0;
  std::uint64_t seed = 0;
  /// n_archetypes rows over supertypes; drawn from a symmetric Dirichlet
  /// when empty.
  std::vector<std::vector<double>> archetype_mixtures;
  /// n_conditions rows over archetypes; defaults to 0.8 on archetype
  /// (c mod n_archetypes) and the rest spread evenly.
  std::vector<std::vector<double>> condition_frequencies;

  /// Reads the [synth] section. Throws ConfigError.
  static GeneratorConfig from_document(ConfigDocument& doc);

  /// Fills defaults for empty matrices and checks shapes.
  /// Throws InvalidGeneratorConfig.
  void resolve();
};

struct SyntheticTissue {
  SpatialDataset dataset;
  std::vector<std::size_t> archetype;  // ground truth per cell
  std::vector<std::size_t> region;     // global region id per cell
  std::vector<std::size_t> section;
};

/// Deterministic for a fixed config (including seed).
SyntheticTissue generate_tissue(GeneratorConfig cfg);

/// Writes cells.csv, expression.csv, ground_truth.csv and a starter
/// pipeline.toml into `dir`.
void write_tissue(const SyntheticTissue& tissue, const std::string& dir);

}  // namespace hyperwave
