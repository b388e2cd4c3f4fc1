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

#include <set>

#include <gtest/gtest.h>

#include "hyperwave/csv.hpp"
#include "hyperwave/dataset_io.hpp"
#include "hyperwave/pipeline.hpp"
#include "hyperwave/synth.hpp"
#include "test_util.hpp"

namespace hyperwave {
namespace {

using hwtest::code_of;

GeneratorConfig small(std::uint64_t seed) {
  GeneratorConfig g;
  g.grid_rows = 16;
  g.grid_cols = 16;
  g.seed = seed;
  return g;
}

TEST(Synth, ShapesAndGroundTruth) {
  const auto t = generate_tissue(small(3));
  const auto& d = t.dataset;
  EXPECT_EQ(d.num_cells(), 3u * 16 * 16);
  EXPECT_EQ(d.num_genes(), 50u);
  EXPECT_EQ(d.condition.vocabulary.size(), 3u);
  EXPECT_EQ(t.archetype.size(), d.num_cells());
  EXPECT_EQ(t.region.size(), d.num_cells());
  EXPECT_EQ(t.section.size(), d.num_cells());
  EXPECT_TRUE((d.expression.array() >= 0.0).all());
  EXPECT_TRUE((d.expression.array() == d.expression.array().round()).all());
  std::set<std::string> ids(d.cell_ids.begin(), d.cell_ids.end());
  EXPECT_EQ(ids.size(), d.num_cells());
  // One archetype per region.
  std::map<std::size_t, std::size_t> region_archetype;
  for (std::size_t i = 0; i < d.num_cells(); ++i) {
    auto [it, fresh] = region_archetype.emplace(t.region[i], t.archetype[i]);
    if (!fresh) EXPECT_EQ(it->second, t.archetype[i]);
  }
}

TEST(Synth, DeterministicBytes) {
  hwtest::TempDir a, b;
  write_tissue(generate_tissue(small(9)), a.path().string());
  write_tissue(generate_tissue(small(9)), b.path().string());
  for (const char* f : {"cells.csv", "expression.csv", "ground_truth.csv", "pipeline.toml"}) {
    EXPECT_EQ(hwtest::slurp(a / f), hwtest::slurp(b / f)) << f;
  }
  hwtest::TempDir c;
  write_tissue(generate_tissue(small(10)), c.path().string());
  EXPECT_NE(hwtest::slurp(a / "expression.csv"), hwtest::slurp(c / "expression.csv"));
}

TEST(Synth, WrittenFilesIngest) {
  hwtest::TempDir tmp;
  const auto t = generate_tissue(small(4));
  write_tissue(t, tmp.path().string());
  const auto d = ingest((tmp / "cells.csv").string(), (tmp / "expression.csv").string());
  EXPECT_EQ(d.cell_ids, t.dataset.cell_ids);
  EXPECT_EQ(d.expression, t.dataset.expression);
  EXPECT_EQ(d.coords, t.dataset.coords);
  const auto cfg = load_pipeline_config((tmp / "pipeline.toml").string());
  EXPECT_EQ(cfg.cells_path, (tmp / "cells.csv").string());
  EXPECT_EQ(read_csv_file((tmp / "ground_truth.csv").string()).size(), d.num_cells() + 1);
}

TEST(Synth, InvalidConfigs) {
  auto bad = [](auto mutate) {
    GeneratorConfig g = small(0);
    mutate(g);
    return code_of([&] { generate_tissue(g); });
  };
  EXPECT_EQ(bad([](GeneratorConfig& g) { g.grid_rows = 1; }), ErrorCode::kInvalidGeneratorConfig);
  EXPECT_EQ(bad([](GeneratorConfig& g) { g.jitter = 0.5; }), ErrorCode::kInvalidGeneratorConfig);
  EXPECT_EQ(bad([](GeneratorConfig& g) { g.n_archetypes = 0; }), ErrorCode::kInvalidGeneratorConfig);
  EXPECT_EQ(bad([](GeneratorConfig& g) { g.n_cell_types = 7; }), ErrorCode::kInvalidGeneratorConfig);
  EXPECT_EQ(bad([](GeneratorConfig& g) { g.condition_frequencies = {{1, 0}, {0, 1}, {1, 1}}; }),
            ErrorCode::kInvalidGeneratorConfig);
  EXPECT_EQ(bad([](GeneratorConfig& g) {
              g.n_archetypes = 2;
              g.archetype_mixtures = {std::vector<double>(12, 1.0), std::vector<double>(12, -1.0)};
            }),
            ErrorCode::kInvalidGeneratorConfig);
}

// Two archetypes split cleanly across two conditions: niche representations
// separate the conditions cleanly.
TEST(Synth, DisjointArchetypesAreLinearlySeparable) {
  GeneratorConfig g = small(5);
  g.grid_rows = g.grid_cols = 20;
  g.n_archetypes = 2;
  g.n_conditions = 2;
  g.condition_frequencies = {{1.0, 0.0}, {0.0, 1.0}};
  g.archetype_expression_shift = 0.5;
  const auto t = generate_tissue(g);
  PipelineConfig cfg;
  cfg.baseline = false;
  const auto stage = compute_niche_stage(t.dataset, cfg);
  const auto r = evaluate(t.dataset, stage.representations, stage.anchors, cfg);
  EXPECT_GE(r.probe.accuracy.mean, 0.95);
  EXPECT_GE(r.probe.auroc_ovr.mean, 0.99);
}

// Without any archetype signal the raw expression baseline has nothing to
// learn from, whatever the niche representations pick up from overlap.
TEST(Synth, SingleArchetypeBaselineIsChance) {
  GeneratorConfig g = small(6);
  g.grid_rows = g.grid_cols = 20;
  g.n_archetypes = 1;
  g.n_conditions = 2;
  g.archetype_expression_shift = 0.0;
  const auto t = generate_tissue(g);
  PipelineConfig cfg;
  const auto stage = compute_niche_stage(t.dataset, cfg);
  const auto r = evaluate(t.dataset, stage.representations, stage.anchors, cfg);
  ASSERT_TRUE(r.baseline_probe.has_value());
  EXPECT_NEAR(r.baseline_probe->auroc_ovr.mean, 0.5, 0.1);
}

}  // namespace
}  // namespace hyperwave
