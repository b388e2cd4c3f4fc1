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

// hyperwave command line front end.
//
//   hyperwave synth        --config gen.toml --out fixture/
//   hyperwave ingest-check --config pipeline.toml
//   hyperwave run          --config pipeline.toml [--out dir] [--threads n] [--seed s]
//   hyperwave run          --config out/manifest.json --out rerun/
//   hyperwave eval-only    --config pipeline.toml
//   hyperwave cluster-only --config pipeline.toml
//
// Exit codes: 0 ok, 2 config error, 3 data error, 4 numerical failure.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hyperwave/config.hpp"
#include "hyperwave/error.hpp"
#include "hyperwave/pipeline.hpp"
#include "hyperwave/synth.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

int exit_code(hyperwave::ErrorCategory c) {
  switch (c) {
    case hyperwave::ErrorCategory::kConfig: return kExitConfig;
    case hyperwave::ErrorCategory::kData: return kExitData;
    case hyperwave::ErrorCategory::kNumerical: return kExitNumerical;
  }
  return kExitData;
}

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::size_t> threads;
  std::optional<std::uint64_t> seed;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "config file (TOML-style, or a run manifest.json)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--threads", f.threads, "worker threads; 1 is bitwise deterministic")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "base seed");
}

hyperwave::PipelineConfig pipeline_config(const Flags& f) {
  auto cfg = hyperwave::load_pipeline_config(f.config);
  hyperwave::apply_overrides(cfg, {f.out, f.threads, f.seed});
  return cfg;
}

void print_summary(const char* name, const hyperwave::ProbeSummary& s,
                   const std::optional<std::string>& skipped) {
  if (skipped) {
    std::printf("%-10s probe skipped (%s)\n", name, skipped->c_str());
    return;
  }
  std::printf("%-10s accuracy %.4f +- %.4f  macro-F1 %.4f +- %.4f  AUROC %.4f +- %.4f%s\n", name,
              s.accuracy.mean, s.accuracy.std, s.macro_f1.mean, s.macro_f1.std,
              s.auroc_ovr.mean, s.auroc_ovr.std,
              s.non_convergence ? "  (not converged)" : "");
}

void print_eval(const hyperwave::EvalReport& r) {
  std::printf("label: %s\n", r.label.c_str());
  print_summary("niche", r.probe, r.probe_skipped);
  std::printf("%-10s vendi %.4f\n", "niche", r.vendi);
  if (r.baseline_probe) {
    print_summary("baseline", *r.baseline_probe, r.baseline_skipped);
    std::printf("%-10s vendi %.4f\n", "baseline", r.baseline_vendi.value_or(0.0));
  }
}

int cmd_synth(const Flags& f) {
  auto doc = hyperwave::ConfigDocument::load(f.config);
  auto gen = hyperwave::GeneratorConfig::from_document(doc);
  doc.finish();
  if (f.seed) gen.seed = *f.seed;
  const std::string out = f.out.value_or("synth");
  const auto tissue = hyperwave::generate_tissue(gen);
  hyperwave::write_tissue(tissue, out);
  std::printf("wrote %zu cells x %zu genes to %s\n", tissue.dataset.num_cells(),
              tissue.dataset.num_genes(), out.c_str());
  return 0;
}

int cmd_ingest_check(const Flags& f) {
  const auto s = hyperwave::ingest_check(pipeline_config(f));
  std::printf("cells %zu\ngenes %zu\ncell_types %zu\nsubclasses %zu\nsupertypes %zu\nconditions %zu\n",
              s.cells, s.genes, s.cell_types, s.subclasses, s.supertypes, s.conditions);
  return 0;
}

int cmd_run(const Flags& f) {
  const auto s = hyperwave::run_pipeline(pipeline_config(f));
  std::printf("representations %zu x %zu%s -> %s\n", s.rows, s.cols,
              s.cache_hit ? " (cached)" : "", s.output_dir.c_str());
  print_eval(s.eval);
  if (s.clusters.degenerate_fallback) {
    std::printf("clustering fell back to k-means on raw rows\n");
  }
  return 0;
}

int cmd_eval_only(const Flags& f) {
  print_eval(hyperwave::eval_only(pipeline_config(f)));
  return 0;
}

int cmd_cluster_only(const Flags& f) {
  const auto r = hyperwave::cluster_only(pipeline_config(f));
  std::printf("clusters written; inertia %.6g%s\n", r.inertia,
              r.degenerate_fallback ? " (fallback to raw rows)" : "");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypergraph diffusion wavelets for spatial niches"};
  app.set_version_flag("--version", std::string(hyperwave::library_version()));
  app.require_subcommand(1);

  Flags synth, check, run, eval, cluster;
  add_flags(app.add_subcommand("synth", "generate a synthetic tissue fixture"), synth);
  add_flags(app.add_subcommand("ingest-check", "parse and validate the inputs"), check);
  add_flags(app.add_subcommand("run", "run the full pipeline"), run);
  add_flags(app.add_subcommand("eval-only", "re-run probe and Vendi on saved representations"),
            eval);
  add_flags(app.add_subcommand("cluster-only", "re-run clustering on saved representations"),
            cluster);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (app.got_subcommand("synth")) return cmd_synth(synth);
    if (app.got_subcommand("ingest-check")) return cmd_ingest_check(check);
    if (app.got_subcommand("run")) return cmd_run(run);
    if (app.got_subcommand("eval-only")) return cmd_eval_only(eval);
    if (app.got_subcommand("cluster-only")) return cmd_cluster_only(cluster);
  } catch (const hyperwave::Error& e) {
    std::cerr << "hyperwave: " << e.what() << '\n';
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "hyperwave: " << e.what() << '\n';
    return kExitData;
  }
  return kExitConfig;
}
