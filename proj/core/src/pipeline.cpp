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

#include "hyperwave/pipeline.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "hyperwave/config.hpp"
#include "hyperwave/csv.hpp"
#include "hyperwave/digest.hpp"
#include "hyperwave/error.hpp"
#include "hyperwave/matrix_io.hpp"

#ifndef HYPERWAVE_VERSION
#define HYPERWAVE_VERSION "0.0.0"
#endif

namespace hyperwave {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { fail(ErrorCode::kConfigError, msg); }

std::string format_name(ExpressionFormat f) {
  switch (f) {
    case ExpressionFormat::kDense: return "dense";
    case ExpressionFormat::kSparse: return "sparse";
    case ExpressionFormat::kAuto: break;
  }
  return "auto";
}

ExpressionFormat parse_format(const std::string& s) {
  if (s == "auto") return ExpressionFormat::kAuto;
  if (s == "dense") return ExpressionFormat::kDense;
  if (s == "sparse") return ExpressionFormat::kSparse;
  config_error("expression_format must be auto, dense or sparse, got '" + s + "'");
}

std::string method_name(GraphMethod m) { return m == GraphMethod::kKnn ? "knn" : "delaunay"; }

GraphMethod parse_method(const std::string& s) {
  if (s == "delaunay") return GraphMethod::kDelaunay;
  if (s == "knn") return GraphMethod::kKnn;
  config_error("graph_method must be delaunay or knn, got '" + s + "'");
}

std::string kernel_name(VendiKernel k) { return k == VendiKernel::kRbf ? "rbf" : "cosine"; }

VendiKernel parse_kernel(const std::string& s) {
  if (s == "cosine") return VendiKernel::kCosine;
  if (s == "rbf") return VendiKernel::kRbf;
  config_error("vendi_kernel must be cosine or rbf, got '" + s + "'");
}

const std::vector<std::string>& label_columns() {
  static const std::vector<std::string> names{"condition", "cell_type", "subclass", "supertype"};
  return names;
}

void check_label_column(const std::string& name, const char* key) {
  for (const auto& n : label_columns()) {
    if (n == name) return;
  }
  config_error(std::string(key) + " must be one of condition, cell_type, subclass, supertype");
}

const Categorical& label_column(const SpatialDataset& d, const std::string& name) {
  if (name == "cell_type") return d.cell_types;
  if (name == "subclass") return d.subclasses;
  if (name == "supertype") return d.supertypes;
  return d.condition;
}

std::string resolve_path(const fs::path& base, const std::string& p) {
  fs::path path(p);
  if (path.is_relative()) path = base / path;
  return path.lexically_normal().string();
}

void derive_seeds(PipelineConfig& cfg) {
  const std::size_t count = cfg.eval.seeds.empty() ? 5 : cfg.eval.seeds.size();
  cfg.eval.seeds.resize(count);
  for (std::size_t i = 0; i < count; ++i) cfg.eval.seeds[i] = cfg.seed + i;
  cfg.cluster.seed = cfg.seed;
}

// ---------------------------------------------------------------------------
// JSON snapshot of a config. Also the source of cache keys.

json niche_json(const PipelineConfig& c) {
  json j;
  j["graph_method"] = method_name(c.niche.graph_method);
  j["knn_k"] = c.niche.knn_k;
  j["hop_k"] = c.niche.hop_k;
  j["top_variance_genes"] = c.niche.top_variance_genes;
  j["min_cells_for_correlation"] = c.niche.min_cells_for_correlation;
  if (c.gene_pair_specs) j["gene_pairs"] = *c.gene_pair_specs;
  return j;
}

json config_to_json(const PipelineConfig& c) {
  json j;
  j["input"] = {{"cells", c.cells_path},
                {"expression", c.expression_path},
                {"expression_format", format_name(c.expression_format)}};
  j["output"] = {{"dir", c.output_dir}, {"write_csv", c.write_csv}};
  j["niche"] = niche_json(c);
  j["wavelets"] = {{"scales", c.scales.scales()}};
  json e;
  e["standardize"] = c.eval.standardize;
  e["train_fraction"] = c.eval.train_fraction;
  e["l2_penalty"] = c.eval.l2_penalty;
  e["max_iterations"] = c.eval.max_iterations;
  e["tolerance"] = c.eval.tolerance;
  e["seeds"] = c.eval.seeds;
  e["group_holdout"] = c.eval.group_holdout;
  e["label"] = c.label;
  if (c.group_by) e["group_by"] = *c.group_by;
  e["vendi_kernel"] = kernel_name(c.vendi.kernel);
  e["rbf_bandwidth"] = c.vendi.rbf_bandwidth;
  e["vendi_standardize"] = c.vendi_standardize;
  e["baseline"] = c.baseline;
  j["eval"] = e;
  j["cluster"] = {{"n_clusters", c.n_clusters},
                  {"neighbors", c.cluster.neighbors},
                  {"restarts", c.cluster.restarts},
                  {"seed", c.cluster.seed},
                  {"max_iterations", c.cluster.max_kmeans_iterations},
                  {"dense_limit", c.cluster.dense_limit}};
  j["run"] = {{"threads", c.threads}, {"seed", c.seed}};
  return j;
}

template <typename T>
T field(const json& j, const char* section, const char* key) {
  try {
    return j.at(section).at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(std::string("manifest config: bad or missing ") + section + "." + key + " (" +
                 e.what() + ")");
  }
}

PipelineConfig config_from_json(const json& j) {
  PipelineConfig c;
  c.cells_path = field<std::string>(j, "input", "cells");
  c.expression_path = field<std::string>(j, "input", "expression");
  c.expression_format = parse_format(field<std::string>(j, "input", "expression_format"));
  c.output_dir = field<std::string>(j, "output", "dir");
  c.write_csv = field<bool>(j, "output", "write_csv");
  c.niche.graph_method = parse_method(field<std::string>(j, "niche", "graph_method"));
  c.niche.knn_k = field<std::size_t>(j, "niche", "knn_k");
  c.niche.hop_k = field<std::size_t>(j, "niche", "hop_k");
  c.niche.top_variance_genes = field<std::size_t>(j, "niche", "top_variance_genes");
  c.niche.min_cells_for_correlation = field<std::size_t>(j, "niche", "min_cells_for_correlation");
  if (j.at("niche").contains("gene_pairs")) {
    c.gene_pair_specs = field<std::vector<std::string>>(j, "niche", "gene_pairs");
  }
  try {
    c.scales = ScaleSequence(field<std::vector<std::size_t>>(j, "wavelets", "scales"));
  } catch (const Error& e) {
    config_error(std::string("manifest config: ") + e.message());
  }
  c.eval.standardize = field<bool>(j, "eval", "standardize");
  c.eval.train_fraction = field<double>(j, "eval", "train_fraction");
  c.eval.l2_penalty = field<double>(j, "eval", "l2_penalty");
  c.eval.max_iterations = field<std::size_t>(j, "eval", "max_iterations");
  c.eval.tolerance = field<double>(j, "eval", "tolerance");
  c.eval.seeds = field<std::vector<std::uint64_t>>(j, "eval", "seeds");
  c.eval.group_holdout = field<bool>(j, "eval", "group_holdout");
  c.label = field<std::string>(j, "eval", "label");
  if (j.at("eval").contains("group_by")) c.group_by = field<std::string>(j, "eval", "group_by");
  c.vendi.kernel = parse_kernel(field<std::string>(j, "eval", "vendi_kernel"));
  c.vendi.rbf_bandwidth = field<double>(j, "eval", "rbf_bandwidth");
  c.vendi_standardize = field<bool>(j, "eval", "vendi_standardize");
  c.baseline = field<bool>(j, "eval", "baseline");
  c.n_clusters = field<std::size_t>(j, "cluster", "n_clusters");
  c.cluster.neighbors = field<std::size_t>(j, "cluster", "neighbors");
  c.cluster.restarts = field<std::size_t>(j, "cluster", "restarts");
  c.cluster.seed = field<std::uint64_t>(j, "cluster", "seed");
  c.cluster.max_kmeans_iterations = field<std::size_t>(j, "cluster", "max_iterations");
  c.cluster.dense_limit = field<std::size_t>(j, "cluster", "dense_limit");
  c.threads = field<std::size_t>(j, "run", "threads");
  c.seed = field<std::uint64_t>(j, "run", "seed");
  return c;
}

void validate(const PipelineConfig& c) {
  if (c.cells_path.empty()) config_error("input.cells is required");
  if (c.expression_path.empty()) config_error("input.expression is required");
  if (c.output_dir.empty()) config_error("output.dir is required");
  c.niche.validate();
  c.eval.validate();
  check_label_column(c.label, "eval.label");
  if (c.group_by) check_label_column(*c.group_by, "eval.group_by");
  if (c.eval.group_holdout && !c.group_by) config_error("eval.group_holdout needs eval.group_by");
  if (!(c.vendi.rbf_bandwidth > 0.0)) config_error("eval.rbf_bandwidth must be positive");
  if (c.n_clusters < 2) config_error("cluster.n_clusters must be >= 2");
  if (c.cluster.neighbors < 1) config_error("cluster.neighbors must be >= 1");
  if (c.cluster.restarts < 1) config_error("cluster.restarts must be >= 1");
  if (c.threads < 1) config_error("run.threads must be >= 1");
}

PipelineConfig config_from_document(ConfigDocument& doc, const fs::path& base) {
  PipelineConfig c;
  if (auto v = doc.get_string("input.cells")) c.cells_path = resolve_path(base, *v);
  if (auto v = doc.get_string("input.expression")) c.expression_path = resolve_path(base, *v);
  if (auto v = doc.get_string("input.expression_format")) c.expression_format = parse_format(*v);
  c.output_dir = resolve_path(base, doc.get_string("output.dir").value_or("out"));
  if (auto v = doc.get_bool("output.write_csv")) c.write_csv = *v;

  if (auto v = doc.get_string("niche.graph_method")) c.niche.graph_method = parse_method(*v);
  if (auto v = doc.get_size("niche.knn_k")) c.niche.knn_k = *v;
  if (auto v = doc.get_size("niche.hop_k")) c.niche.hop_k = *v;
  if (auto v = doc.get_size("niche.top_variance_genes")) c.niche.top_variance_genes = *v;
  if (auto v = doc.get_size("niche.min_cells_for_correlation")) {
    c.niche.min_cells_for_correlation = *v;
  }
  if (auto v = doc.get_string_list("niche.gene_pairs")) c.gene_pair_specs = *v;

  auto j = doc.get_size("wavelets.J");
  auto scales = doc.get_int_list("wavelets.scales");
  if (j && scales) config_error("set either wavelets.J or wavelets.scales, not both");
  try {
    if (j) c.scales = dyadic_scales(*j);
    if (scales) {
      std::vector<std::size_t> s;
      for (auto x : *scales) {
        if (x < 0) config_error("wavelets.scales must be non-negative");
        s.push_back(static_cast<std::size_t>(x));
      }
      c.scales = ScaleSequence(std::move(s));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigError) throw;
    config_error(doc.origin() + ": " + e.message());
  }

  if (auto v = doc.get_bool("eval.standardize")) c.eval.standardize = *v;
  if (auto v = doc.get_double("eval.train_fraction")) c.eval.train_fraction = *v;
  if (auto v = doc.get_double("eval.l2_penalty")) c.eval.l2_penalty = *v;
  if (auto v = doc.get_size("eval.max_iterations")) c.eval.max_iterations = *v;
  if (auto v = doc.get_double("eval.tolerance")) c.eval.tolerance = *v;
  if (auto v = doc.get_bool("eval.group_holdout")) c.eval.group_holdout = *v;
  if (auto v = doc.get_string("eval.label")) c.label = *v;
  if (auto v = doc.get_string("eval.group_by")) c.group_by = *v;
  if (auto v = doc.get_string("eval.vendi_kernel")) c.vendi.kernel = parse_kernel(*v);
  if (auto v = doc.get_double("eval.rbf_bandwidth")) c.vendi.rbf_bandwidth = *v;
  if (auto v = doc.get_bool("eval.vendi_standardize")) c.vendi_standardize = *v;
  if (auto v = doc.get_bool("eval.baseline")) c.baseline = *v;

  if (auto v = doc.get_size("cluster.n_clusters")) c.n_clusters = *v;
  if (auto v = doc.get_size("cluster.neighbors")) c.cluster.neighbors = *v;
  if (auto v = doc.get_size("cluster.restarts")) c.cluster.restarts = *v;
  if (auto v = doc.get_size("cluster.max_iterations")) c.cluster.max_kmeans_iterations = *v;
  if (auto v = doc.get_size("cluster.dense_limit")) c.cluster.dense_limit = *v;

  if (auto v = doc.get_size("run.threads")) c.threads = *v;
  auto seed = doc.get_size("run.seed");
  if (seed) {
    c.seed = *seed;
    derive_seeds(c);
  }
  // Explicit lists win over the derived ones.
  if (auto v = doc.get_int_list("eval.seeds")) {
    c.eval.seeds.clear();
    for (auto x : *v) {
      if (x < 0) config_error("eval.seeds must be non-negative");
      c.eval.seeds.push_back(static_cast<std::uint64_t>(x));
    }
  }
  if (auto v = doc.get_size("cluster.seed")) c.cluster.seed = *v;
  doc.finish();
  return c;
}

// ---------------------------------------------------------------------------

using Clock = std::chrono::steady_clock;

template <typename Fn>
auto run_stage(const char* name, std::vector<StageTiming>& timings, Fn&& fn) {
  const auto start = Clock::now();
  auto record = [&] {
    timings.push_back({name, std::chrono::duration<double>(Clock::now() - start).count()});
  };
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      record();
    } else {
      auto out = fn();
      record();
      return out;
    }
  } catch (const Error& e) {
    throw Error(e.code(), std::string("stage ") + name + ": " + e.message());
  } catch (const std::bad_alloc&) {
    throw Error(ErrorCode::kSizeCapExceeded, std::string("stage ") + name + ": out of memory");
  }
}

std::vector<std::pair<std::size_t, std::size_t>> parse_gene_pairs(
    const std::vector<std::string>& specs, const std::vector<std::string>& genes) {
  auto lookup = [&](const std::string& token) -> std::size_t {
    for (std::size_t g = 0; g < genes.size(); ++g) {
      if (genes[g] == token) return g;
    }
    if (!token.empty() && token.find_first_not_of("0123456789") == std::string::npos) {
      const auto idx = std::stoull(token);
      if (idx < genes.size()) return idx;
    }
    config_error("niche.gene_pairs: unknown gene '" + token + "'");
  };
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& s : specs) {
    const auto colon = s.find(':');
    if (colon == std::string::npos || s.find(':', colon + 1) != std::string::npos) {
      config_error("niche.gene_pairs entries look like 'geneA:geneB', got '" + s + "'");
    }
    out.emplace_back(lookup(s.substr(0, colon)), lookup(s.substr(colon + 1)));
  }
  return out;
}

// Files of one run are written to a staging directory and moved into place
// only once everything succeeded.
class Staging {
 public:
  explicit Staging(const fs::path& out) : out_(out), dir_(out / ".hyperwave-staging") {
    std::error_code ec;
    fs::create_directories(out_, ec);
    if (ec) fail(ErrorCode::kIoError, "cannot create output directory " + out_.string());
    fs::remove_all(dir_, ec);
    fs::create_directories(dir_, ec);
    if (ec) fail(ErrorCode::kIoError, "cannot create " + dir_.string());
  }
  Staging(const Staging&) = delete;
  Staging& operator=(const Staging&) = delete;
  ~Staging() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }

  fs::path path(const std::string& name) {
    names_.push_back(name);
    return dir_ / name;
  }

  void commit() {
    for (const auto& name : names_) {
      std::error_code ec;
      fs::rename(dir_ / name, out_ / name, ec);
      if (ec) fail(ErrorCode::kIoError, "cannot move " + name + " into " + out_.string());
    }
    names_.clear();
  }

 private:
  fs::path out_;
  fs::path dir_;
  std::vector<std::string> names_;
};

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorCode::kIoError, "cannot create " + p.string());
  return f;
}

void close_checked(std::ofstream& f, const fs::path& p) {
  f.close();
  if (!f) fail(ErrorCode::kIoError, "write failed: " + p.string());
}

void write_text(const fs::path& p, const std::string& text) {
  auto f = open_out(p);
  f << text;
  close_checked(f, p);
}

void write_features_csv(const fs::path& p, const SpatialDataset& data,
                        const std::vector<std::size_t>& anchors,
                        const HyperedgeFeatureMatrix& z) {
  auto f = open_out(p);
  std::vector<std::string> row{"anchor_cell_id"};
  for (const auto& c : z.column_schema) row.push_back(c.name);
  write_csv_row(f, row);
  for (Eigen::Index i = 0; i < z.values.rows(); ++i) {
    row.assign(1, data.cell_ids[anchors[static_cast<std::size_t>(i)]]);
    for (Eigen::Index j = 0; j < z.values.cols(); ++j) row.push_back(format_double(z.values(i, j)));
    write_csv_row(f, row);
  }
  close_checked(f, p);
}

void write_representations_csv(const fs::path& p, const SpatialDataset& data,
                               const std::vector<std::size_t>& anchors,
                               const Eigen::MatrixXd& reps,
                               const std::vector<std::string>& names) {
  auto f = open_out(p);
  std::vector<std::string> row{"anchor_cell_id"};
  row.insert(row.end(), names.begin(), names.end());
  write_csv_row(f, row);
  for (Eigen::Index i = 0; i < reps.rows(); ++i) {
    row.assign(1, data.cell_ids[anchors[static_cast<std::size_t>(i)]]);
    for (Eigen::Index j = 0; j < reps.cols(); ++j) row.push_back(format_double(reps(i, j)));
    write_csv_row(f, row);
  }
  close_checked(f, p);
}

void write_clusters_csv(const fs::path& p, const SpatialDataset& data,
                        const std::vector<std::size_t>& anchors, const ClusterResult& r) {
  auto f = open_out(p);
  f << "cell_id,cluster\n";
  for (std::size_t i = 0; i < r.labels.size(); ++i) {
    write_csv_row(f, {data.cell_ids[anchors[i]], std::to_string(r.labels[i])});
  }
  close_checked(f, p);
}

json summary_json(const ProbeSummary& s) {
  auto ms = [](const MeanStd& m) { return json{{"mean", m.mean}, {"std", m.std}}; };
  json runs = json::array();
  for (const auto& r : s.runs) {
    json classes = json::array();
    for (const auto& c : r.per_class) {
      classes.push_back({{"label", c.label},
                         {"support", c.support},
                         {"precision", c.precision},
                         {"recall", c.recall},
                         {"f1", c.f1},
                         {"auroc", c.auroc}});
    }
    runs.push_back({{"seed", r.split_seed},
                    {"accuracy", r.accuracy},
                    {"macro_f1", r.macro_f1},
                    {"auroc_ovr", r.auroc_ovr},
                    {"converged", r.converged},
                    {"gradient_norm", r.gradient_norm},
                    {"iterations", r.iterations},
                    {"per_class", classes}});
  }
  return {{"accuracy", ms(s.accuracy)},
          {"macro_f1", ms(s.macro_f1)},
          {"auroc_ovr", ms(s.auroc_ovr)},
          {"non_convergence", s.non_convergence},
          {"runs", runs}};
}

json probe_json(const ProbeSummary& s, const std::optional<std::string>& skipped) {
  if (skipped) return json{{"skipped", *skipped}};
  return summary_json(s);
}

json metrics_json(const PipelineConfig& cfg, const EvalReport& r,
                  const std::optional<ClusterResult>& clusters, std::size_t effective_k = 0) {
  json j;
  j["label"] = r.label;
  j["representations"] = {{"probe", probe_json(r.probe, r.probe_skipped)},
                          {"vendi", {{"score", r.vendi},
                                     {"kernel", kernel_name(cfg.vendi.kernel)},
                                     {"standardized", cfg.vendi_standardize}}}};
  if (r.baseline_probe) {
    j["baseline_raw_node_features"] = {
        {"probe", probe_json(*r.baseline_probe, r.baseline_skipped)},
        {"vendi", {{"score", r.baseline_vendi.value_or(0.0)},
                   {"kernel", kernel_name(cfg.vendi.kernel)},
                   {"standardized", cfg.vendi_standardize}}}};
  }
  if (clusters) {
    j["clustering"] = {{"n_clusters", cfg.n_clusters},
                       {"n_clusters_effective", effective_k},
                       {"inertia", clusters->inertia},
                       {"degenerate_fallback", clusters->degenerate_fallback}};
  }
  return j;
}

std::optional<fs::path> cache_root() {
  const char* env = std::getenv(kCacheEnvVar);
  if (env == nullptr || *env == '\0') return std::nullopt;
  return fs::path(env);
}

std::string cache_key(const PipelineConfig& cfg, const std::string& cells_sha,
                      const std::string& expr_sha) {
  json k;
  k["version"] = HYPERWAVE_VERSION;
  k["cells"] = cells_sha;
  k["expression"] = expr_sha;
  k["expression_format"] = format_name(cfg.expression_format);
  k["niche"] = niche_json(cfg);
  k["scales"] = cfg.scales.scales();
  return sha256_hex(k.dump());
}

struct CachedStage {
  Eigen::MatrixXd representations;
  std::vector<std::string> names;
  std::vector<JitterRecord> jitter;
  fs::path features_csv;
};

std::optional<CachedStage> cache_lookup(const fs::path& entry) {
  const auto meta_path = entry / "meta.json";
  const auto bin = entry / "representations.bin";
  const auto feats = entry / "niche_features.csv";
  if (!fs::exists(meta_path) || !fs::exists(bin) || !fs::exists(feats)) return std::nullopt;
  try {
    std::ifstream in(meta_path);
    const json meta = json::parse(in);
    CachedStage c;
    c.representations = read_matrix_file(bin.string());
    c.names = meta.at("names").get<std::vector<std::string>>();
    for (const auto& r : meta.at("jitter")) {
      c.jitter.push_back({r.at("index").get<std::size_t>(), r.at("dx").get<double>(),
                          r.at("dy").get<double>()});
    }
    if (c.names.size() != static_cast<std::size_t>(c.representations.cols())) return std::nullopt;
    c.features_csv = feats;
    return c;
  } catch (const std::exception&) {
    // A damaged entry is a miss; it gets rewritten.
    return std::nullopt;
  }
}

json jitter_json(const std::vector<JitterRecord>& jitter, const SpatialDataset* data) {
  json out = json::array();
  for (const auto& r : jitter) {
    json e{{"index", r.index}, {"dx", r.dx}, {"dy", r.dy}};
    if (data != nullptr) e["cell_id"] = data->cell_ids[r.index];
    out.push_back(std::move(e));
  }
  return out;
}

void cache_store(const fs::path& entry, const fs::path& staged_bin, const fs::path& staged_feats,
                 const NicheStageOutput& stage) {
  std::error_code ec;
  const fs::path tmp = entry.string() + ".tmp";
  fs::remove_all(tmp, ec);
  fs::create_directories(tmp, ec);
  if (ec) {
    std::cerr << "hyperwave: cache disabled, cannot create " << tmp << '\n';
    return;
  }
  json meta{{"names", stage.representation_names}, {"jitter", jitter_json(stage.jitter, nullptr)}};
  try {
    write_text(tmp / "meta.json", meta.dump(1));
  } catch (const Error&) {
    fs::remove_all(tmp, ec);
    return;
  }
  fs::copy_file(staged_bin, tmp / "representations.bin", ec);
  if (!ec) fs::copy_file(staged_feats, tmp / "niche_features.csv", ec);
  if (!ec) {
    fs::remove_all(entry, ec);
    fs::rename(tmp, entry, ec);
  }
  if (ec) fs::remove_all(tmp, ec);
}

void check_digest(const std::string& path, const std::string& expected, const std::string& got) {
  if (!expected.empty() && expected != got) {
    fail(ErrorCode::kFormatError, "input digest mismatch for " + path + ": manifest has " +
                                      expected + ", file has " + got);
  }
}

std::vector<std::size_t> iota_anchors(std::size_t n) {
  std::vector<std::size_t> a(n);
  std::iota(a.begin(), a.end(), std::size_t{0});
  return a;
}

Eigen::MatrixXd load_existing_representations(const PipelineConfig& cfg, const SpatialDataset& data) {
  const fs::path bin = fs::path(cfg.output_dir) / "representations.bin";
  Eigen::MatrixXd reps;
  if (fs::exists(bin)) {
    reps = read_matrix_file(bin.string());
  } else if (auto root = cache_root()) {
    const auto key = cache_key(cfg, sha256_file(cfg.cells_path), sha256_file(cfg.expression_path));
    auto hit = cache_lookup(*root / key);
    if (!hit) fail(ErrorCode::kIoError, "no representations.bin in " + cfg.output_dir + " or cache");
    reps = std::move(hit->representations);
  } else {
    fail(ErrorCode::kIoError, "no representations.bin in " + cfg.output_dir + "; run first");
  }
  if (static_cast<std::size_t>(reps.rows()) != data.num_cells()) {
    fail(ErrorCode::kFormatError, "representations.bin has " + std::to_string(reps.rows()) +
                                      " rows but the dataset has " +
                                      std::to_string(data.num_cells()) + " cells");
  }
  return reps;
}

std::size_t effective_clusters(const Eigen::MatrixXd& reps, const PipelineConfig& cfg) {
  const auto rows = static_cast<std::size_t>(reps.rows());
  return rows >= 3 ? std::min(cfg.n_clusters, rows - 1) : cfg.n_clusters;
}

// Clusters the representations as they are. z-scoring every column lets
// the many noisy correlation columns outvote the label and mean columns.
ClusterResult cluster_representations(const Eigen::MatrixXd& reps, const PipelineConfig& cfg) {
  return spectral_cluster(reps, effective_clusters(reps, cfg), cfg.cluster);
}

}  // namespace

// ---------------------------------------------------------------------------

const char* library_version() { return HYPERWAVE_VERSION; }

PipelineConfig load_pipeline_config(const std::string& path) {
  const fs::path p(path);
  if (!fs::exists(p)) config_error("config file not found: " + path);
  const fs::path base = fs::absolute(p).parent_path();
  PipelineConfig cfg;
  if (p.extension() == ".json") {
    std::ifstream in(p, std::ios::binary);
    json manifest;
    try {
      manifest = json::parse(in);
    } catch (const json::exception& e) {
      config_error(path + ": " + e.what());
    }
    if (!manifest.contains("config")) config_error(path + ": not a run manifest (no config)");
    cfg = config_from_json(manifest.at("config"));
    cfg.cells_path = resolve_path(base, cfg.cells_path);
    cfg.expression_path = resolve_path(base, cfg.expression_path);
    cfg.output_dir = resolve_path(base, cfg.output_dir);
    if (manifest.contains("inputs")) {
      const auto& in_j = manifest.at("inputs");
      cfg.expected_cells_sha256 = in_j.value("/cells/sha256"_json_pointer, std::string{});
      cfg.expected_expression_sha256 =
          in_j.value("/expression/sha256"_json_pointer, std::string{});
    }
  } else {
    auto doc = ConfigDocument::load(path);
    cfg = config_from_document(doc, base);
  }
  validate(cfg);
  return cfg;
}

void apply_overrides(PipelineConfig& cfg, const RunOverrides& o) {
  if (o.out_dir) cfg.output_dir = fs::absolute(*o.out_dir).lexically_normal().string();
  if (o.threads) {
    if (*o.threads < 1) config_error("--threads must be >= 1");
    cfg.threads = *o.threads;
  }
  if (o.seed) {
    cfg.seed = *o.seed;
    derive_seeds(cfg);
  }
}

std::vector<std::string> representation_column_names(const HyperedgeFeatureMatrix& z,
                                                      const ScaleSequence& scales) {
  std::vector<std::string> out;
  const std::size_t J = scales.J();
  for (std::size_t b = 0; b <= J; ++b) {
    const std::string prefix = (b < J ? "psi" : "phi") + std::to_string(b) + ":";
    for (const auto& c : z.column_schema) out.push_back(prefix + c.name);
  }
  return out;
}

NicheStageOutput compute_niche_stage(const SpatialDataset& data, const PipelineConfig& cfg) {
  NicheConfig niche = cfg.niche;
  niche.threads = cfg.threads;
  if (cfg.gene_pair_specs) niche.gene_pairs = parse_gene_pairs(*cfg.gene_pair_specs, data.gene_names);

  NicheStageOutput out;
  const Eigen::MatrixXd norm = lognormalize(data.expression);
  SpatialGraph spatial = build_spatial_graph(data.coords, niche);
  out.jitter = std::move(spatial.jitter);
  out.lifted = khop_lift(spatial.graph, niche.hop_k);
  DiffusionOperator op(*out.lifted);
  op.set_threads(cfg.threads);
  out.features = hyperedge_features(*out.lifted, norm, data, niche, op);
  out.representations = niche_representations(*out.lifted, out.features, cfg.scales, cfg.threads);
  out.representation_names = representation_column_names(out.features, cfg.scales);
  out.anchors = out.lifted->anchors().value_or(iota_anchors(out.lifted->m()));
  return out;
}

EvalReport evaluate(const SpatialDataset& data, const Eigen::MatrixXd& reps,
                    const std::vector<std::size_t>& anchors, const PipelineConfig& cfg) {
  if (anchors.size() != static_cast<std::size_t>(reps.rows())) {
    fail(ErrorCode::kDimensionMismatch, "one anchor per representation row is required");
  }
  const Categorical& cell_labels = label_column(data, cfg.label);
  auto by_anchor = [&](const Categorical& c) {
    std::vector<std::string> labels;
    labels.reserve(anchors.size());
    for (auto a : anchors) labels.push_back(c.label(a));
    return Categorical::from_labels(labels);
  };
  const Categorical labels = by_anchor(cell_labels);
  std::vector<std::size_t> groups;
  if (cfg.group_by) groups = by_anchor(label_column(data, *cfg.group_by)).codes;
  const std::vector<std::size_t>* gp = cfg.group_by ? &groups : nullptr;

  auto vendi_of = [&](const Eigen::MatrixXd& x) {
    return vendi_score(cfg.vendi_standardize ? Standardizer::fit(x).transform(x) : x, cfg.vendi);
  };

  EvalReport r;
  r.label = cfg.label;
  auto probe = [&](const Eigen::MatrixXd& x, ProbeSummary& out, std::optional<std::string>& skipped) {
    try {
      out = linear_probe(x, labels, cfg.eval, gp);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSingleClass && e.code() != ErrorCode::kClassTooSmall) throw;
      skipped = e.what();
    }
  };
  probe(reps, r.probe, r.probe_skipped);
  r.vendi = vendi_of(reps);
  if (cfg.baseline) {
    Eigen::MatrixXd raw(static_cast<Eigen::Index>(anchors.size()), data.expression.cols());
    const Eigen::MatrixXd norm = lognormalize(data.expression);
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      raw.row(static_cast<Eigen::Index>(i)) = norm.row(static_cast<Eigen::Index>(anchors[i]));
    }
    r.baseline_probe.emplace();
    probe(raw, *r.baseline_probe, r.baseline_skipped);
    r.baseline_vendi = vendi_of(raw);
  }
  return r;
}

RunSummary run_pipeline(const PipelineConfig& cfg) {
  validate(cfg);
  RunSummary summary;
  summary.output_dir = cfg.output_dir;
  auto& t = summary.timings;

  std::string cells_sha;
  std::string expr_sha;
  const SpatialDataset data = run_stage("ingest", t, [&] {
    cells_sha = sha256_file(cfg.cells_path);
    expr_sha = sha256_file(cfg.expression_path);
    check_digest(cfg.cells_path, cfg.expected_cells_sha256, cells_sha);
    check_digest(cfg.expression_path, cfg.expected_expression_sha256, expr_sha);
    return ingest(cfg.cells_path, cfg.expression_path, cfg.expression_format);
  });

  Staging staging(cfg.output_dir);
  const auto bin_path = staging.path("representations.bin");
  const auto feats_path = staging.path("niche_features.csv");

  const auto root = cache_root();
  const std::string key = cache_key(cfg, cells_sha, expr_sha);
  std::optional<CachedStage> hit;
  if (root) hit = cache_lookup(*root / key);

  Eigen::MatrixXd reps;
  std::vector<std::string> names;
  std::vector<JitterRecord> jitter;
  std::vector<std::size_t> anchors;
  if (hit) {
    summary.cache_hit = true;
    run_stage("cache", t, [&] {
      if (static_cast<std::size_t>(hit->representations.rows()) != data.num_cells()) {
        fail(ErrorCode::kFormatError, "cached representations do not match the dataset");
      }
      std::error_code ec;
      fs::copy_file(hit->features_csv, feats_path, fs::copy_options::overwrite_existing, ec);
      if (ec) fail(ErrorCode::kIoError, "cannot copy cached niche_features.csv");
      write_matrix_file(bin_path.string(), hit->representations);
    });
    reps = std::move(hit->representations);
    names = std::move(hit->names);
    jitter = std::move(hit->jitter);
    anchors = iota_anchors(data.num_cells());
  } else {
    NicheStageOutput stage = run_stage("niche", t, [&] { return compute_niche_stage(data, cfg); });
    run_stage("write_features", t, [&] {
      write_features_csv(feats_path, data, stage.anchors, stage.features);
      write_matrix_file(bin_path.string(), stage.representations);
    });
    if (root) cache_store(*root / key, bin_path, feats_path, stage);
    reps = std::move(stage.representations);
    names = std::move(stage.representation_names);
    jitter = std::move(stage.jitter);
    anchors = std::move(stage.anchors);
  }
  summary.rows = static_cast<std::size_t>(reps.rows());
  summary.cols = static_cast<std::size_t>(reps.cols());

  if (cfg.write_csv) {
    run_stage("write_representations_csv", t, [&] {
      write_representations_csv(staging.path("representations.csv"), data, anchors, reps, names);
    });
  }
  summary.eval = run_stage("eval", t, [&] { return evaluate(data, reps, anchors, cfg); });
  summary.clusters = run_stage("cluster", t, [&] { return cluster_representations(reps, cfg); });
  summary.effective_clusters = effective_clusters(reps, cfg);

  run_stage("write_reports", t, [&] {
    write_clusters_csv(staging.path("clusters.csv"), data, anchors, summary.clusters);
    write_text(staging.path("metrics.json"),
               metrics_json(cfg, summary.eval, summary.clusters, summary.effective_clusters).dump(2) + "\n");
  });

  json manifest;
  manifest["version"] = HYPERWAVE_VERSION;
  manifest["config"] = config_to_json(cfg);
  manifest["inputs"] = {{"cells", {{"path", cfg.cells_path}, {"sha256", cells_sha}}},
                        {"expression", {{"path", cfg.expression_path}, {"sha256", expr_sha}}}};
  manifest["seeds"] = {{"probe", cfg.eval.seeds}, {"cluster", cfg.cluster.seed}, {"run", cfg.seed}};
  manifest["threads"] = cfg.threads;
  manifest["jitter"] = jitter_json(jitter, &data);
  manifest["cache"] = {{"key", key}, {"enabled", root.has_value()}, {"hit", summary.cache_hit}};
  json outputs = json::object();
  for (const char* name : {"niche_features.csv", "representations.bin", "representations.csv",
                           "metrics.json", "clusters.csv"}) {
    const auto p = fs::path(cfg.output_dir) / ".hyperwave-staging" / name;
    if (fs::exists(p)) outputs[name] = sha256_file(p.string());
  }
  manifest["outputs"] = outputs;
  manifest["shape"] = {{"rows", summary.rows}, {"cols", summary.cols}};
  json timings = json::array();
  for (const auto& s : t) timings.push_back({{"stage", s.name}, {"seconds", s.seconds}});
  manifest["timings"] = timings;
  write_text(staging.path("manifest.json"), manifest.dump(2) + "\n");

  staging.commit();
  return summary;
}

EvalReport eval_only(const PipelineConfig& cfg) {
  validate(cfg);
  std::vector<StageTiming> t;
  const SpatialDataset data = run_stage("ingest", t, [&] {
    return ingest(cfg.cells_path, cfg.expression_path, cfg.expression_format);
  });
  const Eigen::MatrixXd reps =
      run_stage("load", t, [&] { return load_existing_representations(cfg, data); });
  const auto anchors = iota_anchors(data.num_cells());
  EvalReport r = run_stage("eval", t, [&] { return evaluate(data, reps, anchors, cfg); });
  Staging staging(cfg.output_dir);
  write_text(staging.path("metrics.json"), metrics_json(cfg, r, std::nullopt).dump(2) + "\n");
  staging.commit();
  return r;
}

ClusterResult cluster_only(const PipelineConfig& cfg) {
  validate(cfg);
  std::vector<StageTiming> t;
  const SpatialDataset data = run_stage("ingest", t, [&] {
    return ingest(cfg.cells_path, cfg.expression_path, cfg.expression_format);
  });
  const Eigen::MatrixXd reps =
      run_stage("load", t, [&] { return load_existing_representations(cfg, data); });
  ClusterResult r = run_stage("cluster", t, [&] { return cluster_representations(reps, cfg); });
  Staging staging(cfg.output_dir);
  write_clusters_csv(staging.path("clusters.csv"), data, iota_anchors(data.num_cells()), r);
  staging.commit();
  return r;
}

IngestSummary ingest_check(const PipelineConfig& cfg) {
  const SpatialDataset d = ingest(cfg.cells_path, cfg.expression_path, cfg.expression_format);
  IngestSummary s;
  s.cells = d.num_cells();
  s.genes = d.num_genes();
  s.cell_types = d.cell_types.vocabulary.size();
  s.subclasses = d.subclasses.vocabulary.size();
  s.supertypes = d.supertypes.vocabulary.size();
  s.conditions = d.condition.vocabulary.size();
  return s;
}

}  // namespace hyperwave
