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

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "hyperwave/csv.hpp"
#include "hyperwave/digest.hpp"
#include "hyperwave/dataset_io.hpp"
#include "hyperwave/matrix_io.hpp"
#include "hyperwave/pipeline.hpp"
#include "test_util.hpp"

namespace hyperwave {
namespace {

namespace fs = std::filesystem;
using hwtest::code_of;
using json = nlohmann::json;

const fs::path kToy = fs::path(HW_FIXTURE_DIR) / "toy";

// Toy inputs copied into a scratch dir so outputs never land in the source tree.
class ToyRun : public ::testing::Test {
 protected:
  void SetUp() override {
    for (const char* f : {"cells.csv", "expression_dense.csv", "expression_sparse.csv", "pipeline.toml"}) {
      fs::copy_file(kToy / f, tmp_ / f);
    }
    unsetenv(kCacheEnvVar);
  }
  PipelineConfig config() const { return load_pipeline_config((tmp_ / "pipeline.toml").string()); }
  hwtest::TempDir tmp_;
};

TEST_F(ToyRun, WritesAllOutputs) {
  const auto cfg = config();
  const auto s = run_pipeline(cfg);
  const fs::path out = tmp_ / "out";
  for (const char* f : {"niche_features.csv", "representations.bin", "representations.csv",
                        "metrics.json", "clusters.csv", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  EXPECT_FALSE(fs::exists(out / ".hyperwave-staging"));
  const Eigen::MatrixXd reps = read_matrix_file((out / "representations.bin").string());
  EXPECT_EQ(reps.rows(), 3);
  EXPECT_EQ(static_cast<std::size_t>(reps.cols()), s.cols);
  EXPECT_EQ(s.cols % 5, 0u);  // (J + 1) p with J = 4

  const auto feats = read_csv_file((out / "niche_features.csv").string());
  ASSERT_EQ(feats.size(), 4u);
  EXPECT_EQ(feats[0].fields[0], "anchor_cell_id");
  EXPECT_EQ(feats[0].fields.size() * 5, s.cols + 5);
  EXPECT_EQ(feats[1].fields[0], "c0");

  const auto csv = read_csv_file((out / "representations.csv").string());
  EXPECT_EQ(csv[0].fields.size(), s.cols + 1);
  EXPECT_EQ(csv[0].fields[1].rfind("psi0:", 0), 0u);
  EXPECT_EQ(csv[0].fields.back().rfind("phi4:", 0), 0u);

  const auto clusters = read_csv_file((out / "clusters.csv").string());
  EXPECT_EQ(clusters[0].fields, (std::vector<std::string>{"cell_id", "cluster"}));
  EXPECT_EQ(clusters.size(), 4u);
  EXPECT_EQ(s.effective_clusters, 2u);

  const json metrics = json::parse(hwtest::slurp(out / "metrics.json"));
  EXPECT_TRUE(metrics["representations"]["vendi"].contains("score"));
  EXPECT_EQ(metrics["clustering"]["n_clusters_effective"], 2);
  EXPECT_TRUE(s.eval.probe_skipped.has_value());

  const json manifest = json::parse(hwtest::slurp(out / "manifest.json"));
  EXPECT_EQ(manifest["inputs"]["cells"]["sha256"], sha256_file((tmp_ / "cells.csv").string()));
  EXPECT_EQ(manifest["outputs"]["representations.bin"],
            sha256_file((out / "representations.bin").string()));
  EXPECT_EQ(manifest["shape"]["rows"], 3);
}

TEST_F(ToyRun, DenseAndSparseInputsAgree) {
  auto a = config();
  run_pipeline(a);
  auto b = config();
  b.expression_path = (tmp_ / "expression_sparse.csv").string();
  b.output_dir = (tmp_ / "sparse").string();
  run_pipeline(b);
  EXPECT_EQ(hwtest::slurp(tmp_ / "out" / "representations.bin"),
            hwtest::slurp(tmp_ / "sparse" / "representations.bin"));
}

TEST_F(ToyRun, ManifestRerunIsByteIdentical) {
  run_pipeline(config());
  auto again = load_pipeline_config((tmp_ / "out" / "manifest.json").string());
  apply_overrides(again, {(tmp_ / "rerun").string(), std::nullopt, std::nullopt});
  run_pipeline(again);
  for (const char* f : {"representations.bin", "niche_features.csv", "clusters.csv", "metrics.json"}) {
    EXPECT_EQ(hwtest::slurp(tmp_ / "out" / f), hwtest::slurp(tmp_ / "rerun" / f)) << f;
  }
}

TEST_F(ToyRun, ManifestRejectsChangedInputs) {
  run_pipeline(config());
  hwtest::spit(tmp_ / "expression_dense.csv", "cell_id,GAD1,SLC17A7\nc0,3,1\nc1,0,5\nc2,2,3\n");
  auto again = load_pipeline_config((tmp_ / "out" / "manifest.json").string());
  EXPECT_EQ(code_of([&] { run_pipeline(again); }), ErrorCode::kFormatError);
}

TEST_F(ToyRun, FailureLeavesNoPartialOutputs) {
  // Collinear cells pass ingest and fail inside the niche stage.
  hwtest::spit(tmp_ / "cells.csv",
               "cell_id,x,y,cell_type,subclass,supertype,condition\n"
               "c0,0,0,n,a,a1,ctrl\nc1,1,1,n,a,a1,ctrl\nc2,2,2,n,a,a1,case\n");
  const auto cfg = config();
  EXPECT_EQ(code_of([&] { run_pipeline(cfg); }), ErrorCode::kDegenerateGeometry);
  const fs::path out = tmp_ / "out";
  EXPECT_TRUE(!fs::exists(out) || fs::is_empty(out));
}

TEST_F(ToyRun, CacheHitReproducesOutputs) {
  const fs::path cache = tmp_ / "cache";
  setenv(kCacheEnvVar, cache.c_str(), 1);
  const auto first = run_pipeline(config());
  EXPECT_FALSE(first.cache_hit);
  auto cfg = config();
  cfg.output_dir = (tmp_ / "second").string();
  const auto second = run_pipeline(cfg);
  EXPECT_TRUE(second.cache_hit);
  unsetenv(kCacheEnvVar);
  EXPECT_EQ(hwtest::slurp(tmp_ / "out" / "representations.bin"),
            hwtest::slurp(tmp_ / "second" / "representations.bin"));
  EXPECT_EQ(hwtest::slurp(tmp_ / "out" / "niche_features.csv"),
            hwtest::slurp(tmp_ / "second" / "niche_features.csv"));
  const json m = json::parse(hwtest::slurp(tmp_ / "second" / "manifest.json"));
  EXPECT_EQ(m["cache"]["hit"], true);
}

TEST_F(ToyRun, EvalAndClusterOnly) {
  const auto cfg = config();
  EXPECT_EQ(code_of([&] { eval_only(cfg); }), ErrorCode::kIoError);
  run_pipeline(cfg);
  const std::string clusters = hwtest::slurp(tmp_ / "out" / "clusters.csv");
  fs::remove(tmp_ / "out" / "metrics.json");
  fs::remove(tmp_ / "out" / "clusters.csv");
  const auto r = eval_only(cfg);
  EXPECT_TRUE(fs::exists(tmp_ / "out" / "metrics.json"));
  EXPECT_TRUE(r.probe_skipped.has_value());
  cluster_only(cfg);
  EXPECT_EQ(hwtest::slurp(tmp_ / "out" / "clusters.csv"), clusters);
}

TEST_F(ToyRun, IngestCheckCounts) {
  const auto s = ingest_check(config());
  EXPECT_EQ(s.cells, 3u);
  EXPECT_EQ(s.genes, 2u);
  EXPECT_EQ(s.conditions, 2u);
  EXPECT_EQ(s.supertypes, 3u);
}

TEST(PipelineConfig, ParsesSectionsAndRejectsTypos) {
  hwtest::TempDir tmp;
  hwtest::spit(tmp / "a.toml",
               "[input]\ncells = \"c.csv\"\nexpression = \"e.csv\"\n"
               "[niche]\ngraph_method = \"knn\"\nknn_k = 5\nhop_k = 2\n"
               "[wavelets]\nJ = 3\n[eval]\nlabel = \"cell_type\"\n"
               "[cluster]\nn_clusters = 6\n[run]\nseed = 7\nthreads = 2\n");
  const auto c = load_pipeline_config((tmp / "a.toml").string());
  EXPECT_EQ(c.cells_path, (tmp / "c.csv").string());
  EXPECT_EQ(c.niche.graph_method, GraphMethod::kKnn);
  EXPECT_EQ(c.niche.knn_k, 5u);
  EXPECT_EQ(c.niche.hop_k, 2u);
  EXPECT_EQ(c.scales.scales(), (std::vector<std::size_t>{0, 1, 2, 4}));
  EXPECT_EQ(c.label, "cell_type");
  EXPECT_EQ(c.n_clusters, 6u);
  EXPECT_EQ(c.threads, 2u);
  EXPECT_EQ(c.eval.seeds, (std::vector<std::uint64_t>{7, 8, 9, 10, 11}));
  EXPECT_EQ(c.cluster.seed, 7u);

  hwtest::spit(tmp / "typo.toml", "[input]\ncells = \"c\"\nexpression = \"e\"\n[niche]\nhopk = 2\n");
  EXPECT_EQ(code_of([&] { load_pipeline_config((tmp / "typo.toml").string()); }),
            ErrorCode::kConfigError);
  hwtest::spit(tmp / "both.toml",
               "[input]\ncells = \"c\"\nexpression = \"e\"\n[wavelets]\nJ = 2\nscales = [0, 1, 2]\n");
  EXPECT_EQ(code_of([&] { load_pipeline_config((tmp / "both.toml").string()); }),
            ErrorCode::kConfigError);
  hwtest::spit(tmp / "label.toml", "[input]\ncells = \"c\"\nexpression = \"e\"\n[eval]\nlabel = \"age\"\n");
  EXPECT_EQ(code_of([&] { load_pipeline_config((tmp / "label.toml").string()); }),
            ErrorCode::kConfigError);
  EXPECT_EQ(code_of([&] { load_pipeline_config((tmp / "missing.toml").string()); }),
            ErrorCode::kConfigError);
}

#ifdef HW_CLI_PATH
int run_cli(const std::string& args) {
  const std::string cmd = std::string(HW_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(ToyRun, CliExitCodes) {
  const std::string cfg = (tmp_ / "pipeline.toml").string();
  EXPECT_EQ(run_cli("ingest-check --config " + cfg), 0);
  EXPECT_EQ(run_cli("run --config " + cfg + " --out " + (tmp_ / "cli").string()), 0);
  EXPECT_TRUE(fs::exists(tmp_ / "cli" / "manifest.json"));
  EXPECT_EQ(run_cli("run --config " + (tmp_ / "nope.toml").string()), 2);
  EXPECT_EQ(run_cli("run --config " + cfg + " --threads 0"), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  hwtest::spit(tmp_ / "bad.toml", "[input]\ncells = \"cells.csv\"\nexpression = \"e.csv\"\n[niche]\nbogus = 1\n");
  EXPECT_EQ(run_cli("run --config " + (tmp_ / "bad.toml").string()), 2);
  hwtest::spit(tmp_ / "e.csv", "cell_id,G\nghost,1\n");
  hwtest::spit(tmp_ / "data.toml", "[input]\ncells = \"cells.csv\"\nexpression = \"e.csv\"\n");
  EXPECT_EQ(run_cli("run --config " + (tmp_ / "data.toml").string()), 3);
}
#endif

}  // namespace
}  // namespace hyperwave
