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

#include "hyperwave/synth.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "hyperwave/csv.hpp"
#include "hyperwave/dataset_io.hpp"
#include "hyperwave/error.hpp"

namespace hyperwave {

namespace {

void invalid(const std::string& what) { fail(ErrorCode::kInvalidGeneratorConfig, what); }

std::vector<double> dirichlet(std::size_t k, double alpha, std::mt19937_64& rng) {
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> v(k);
  double sum = 0.0;
  for (double& x : v) {
    x = gamma(rng);
    sum += x;
  }
  if (sum <= 0.0) {
    v.assign(k, 1.0 / static_cast<double>(k));
    return v;
  }
  for (double& x : v) x /= sum;
  return v;
}

std::size_t draw(const std::vector<double>& probs, std::mt19937_64& rng) {
  std::discrete_distribution<std::size_t> dist(probs.begin(), probs.end());
  return dist(rng);
}

void check_rows(const std::vector<std::vector<double>>& rows, std::size_t count,
                std::size_t width, const char* what) {
  if (rows.size() != count) {
    invalid(std::string(what) + ": expected " + std::to_string(count) + " rows");
  }
  for (const auto& r : rows) {
    if (r.size() != width) {
      invalid(std::string(what) + ": every row needs " + std::to_string(width) + " entries");
    }
    double sum = 0.0;
    for (double x : r) {
      if (!(x >= 0.0) || !std::isfinite(x)) invalid(std::string(what) + ": negative entry");
      sum += x;
    }
    if (!(sum > 0.0)) invalid(std::string(what) + ": a row sums to zero");
  }
}

}  // namespace

GeneratorConfig GeneratorConfig::from_document(ConfigDocument& doc) {
  GeneratorConfig c;
  if (auto v = doc.get_size("synth.grid_rows")) c.grid_rows = *v;
  if (auto v = doc.get_size("synth.grid_cols")) c.grid_cols = *v;
  if (auto v = doc.get_double("synth.spacing")) c.spacing = *v;
  if (auto v = doc.get_double("synth.jitter")) c.jitter = *v;
  if (auto v = doc.get_size("synth.sections_per_condition")) c.sections_per_condition = *v;
  if (auto v = doc.get_size("synth.regions_per_section")) c.regions_per_section = *v;
  if (auto v = doc.get_size("synth.n_genes")) c.n_genes = *v;
  if (auto v = doc.get_size("synth.n_cell_types")) c.n_cell_types = *v;
  if (auto v = doc.get_size("synth.n_subclasses")) c.n_subclasses = *v;
  if (auto v = doc.get_size("synth.n_supertypes")) c.n_supertypes = *v;
  if (auto v = doc.get_size("synth.n_archetypes")) c.n_archetypes = *v;
  if (auto v = doc.get_size("synth.n_conditions")) c.n_conditions = *v;
  if (auto v = doc.get_double("synth.mixture_concentration")) c.mixture_concentration = *v;
  if (auto v = doc.get_double("synth.archetype_expression_shift")) c.archetype_expression_shift = *v;
  if (auto v = doc.get_double("synth.mean_library_size")) c.mean_library_size = *v;
  if (auto v = doc.get_size("synth.seed")) c.seed = *v;
  for (std::size_t a = 0;; ++a) {
    auto row = doc.get_double_list("synth.archetype_mixture." + std::to_string(a));
    if (!row) break;
    c.archetype_mixtures.push_back(*row);
  }
  for (std::size_t k = 0;; ++k) {
    auto row = doc.get_double_list("synth.condition_frequencies." + std::to_string(k));
    if (!row) break;
    c.condition_frequencies.push_back(*row);
  }
  return c;
}

void GeneratorConfig::resolve() {
  if (grid_rows < 2 || grid_cols < 2) invalid("grid must be at least 2 x 2");
  if (!(spacing > 0.0)) invalid("spacing must be positive");
  if (!(jitter >= 0.0 && jitter < 0.5)) invalid("jitter must lie in [0, 0.5)");
  if (sections_per_condition < 1) invalid("sections_per_condition must be >= 1");
  if (regions_per_section < 1) invalid("regions_per_section must be >= 1");
  if (n_genes < 1) invalid("n_genes must be >= 1");
  if (n_cell_types < 1 || n_subclasses < n_cell_types || n_supertypes < n_subclasses) {
    invalid("need 1 <= n_cell_types <= n_subclasses <= n_supertypes");
  }
  if (!(mixture_concentration > 0.0)) invalid("mixture_concentration must be positive");
  if (!(archetype_expression_shift >= 0.0)) invalid("archetype_expression_shift must be >= 0");
  if (!(mean_library_size > 0.0)) invalid("mean_library_size must be positive");
  if (!archetype_mixtures.empty()) n_archetypes = archetype_mixtures.size();
  if (!condition_frequencies.empty()) n_conditions = condition_frequencies.size();
  if (n_archetypes < 1) invalid("n_archetypes must be >= 1");
  if (n_conditions < 1) invalid("n_conditions must be >= 1");
  if (archetype_mixtures.empty()) {
    std::mt19937_64 rng(seed ^ 0x9E3779B97F4A7C15ULL);
    for (std::size_t a = 0; a < n_archetypes; ++a) {
      archetype_mixtures.push_back(dirichlet(n_supertypes, mixture_concentration, rng));
    }
  }
  if (condition_frequencies.empty()) {
    for (std::size_t c = 0; c < n_conditions; ++c) {
      std::vector<double> f(n_archetypes, n_archetypes > 1 ? 0.2 / static_cast<double>(n_archetypes - 1) : 0.0);
      f[c % n_archetypes] = n_archetypes > 1 ? 0.8 : 1.0;
      condition_frequencies.push_back(f);
    }
  }
  check_rows(archetype_mixtures, n_archetypes, n_supertypes, "archetype_mixture");
  check_rows(condition_frequencies, n_conditions, n_archetypes, "condition_frequencies");
}

SyntheticTissue generate_tissue(GeneratorConfig cfg) {
  cfg.resolve();
  std::mt19937_64 rng(cfg.seed);
  const std::size_t q = cfg.n_genes;

  // Supertype expression profiles (proportions over genes) and per-archetype
  // multiplicative shifts.
  std::vector<std::vector<double>> profile(cfg.n_supertypes);
  for (auto& p : profile) p = dirichlet(q, 0.6, rng);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<double>> shift(cfg.n_archetypes, std::vector<double>(q));
  for (auto& s : shift) {
    for (double& x : s) x = std::exp(cfg.archetype_expression_shift * gauss(rng));
  }

  SyntheticTissue out;
  SpatialDataset& data = out.dataset;
  for (std::size_t g = 0; g < q; ++g) data.gene_names.push_back("gene" + std::to_string(g));

  const std::size_t per_section = cfg.grid_rows * cfg.grid_cols;
  const std::size_t sections = cfg.n_conditions * cfg.sections_per_condition;
  const std::size_t n = per_section * sections;
  data.coords.resize(static_cast<Eigen::Index>(n), 2);
  data.expression.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(q));
  std::vector<std::string> types, subclasses, supertypes, conditions;
  const double width = static_cast<double>(cfg.grid_cols) * cfg.spacing;
  const double height = static_cast<double>(cfg.grid_rows) * cfg.spacing;
  const double gap = 10.0 * cfg.spacing;

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::lognormal_distribution<double> library(std::log(cfg.mean_library_size), 0.3);
  std::size_t cell = 0;
  for (std::size_t s = 0; s < sections; ++s) {
    const std::size_t cond = s / cfg.sections_per_condition;
    const double x0 = static_cast<double>(s) * (width + gap);
    std::vector<std::pair<double, double>> centers(cfg.regions_per_section);
    std::vector<std::size_t> region_archetype(cfg.regions_per_section);
    for (std::size_t r = 0; r < cfg.regions_per_section; ++r) {
      centers[r] = {unit(rng) * width, unit(rng) * height};
      region_archetype[r] = draw(cfg.condition_frequencies[cond], rng);
    }
    for (std::size_t gr = 0; gr < cfg.grid_rows; ++gr) {
      for (std::size_t gc = 0; gc < cfg.grid_cols; ++gc, ++cell) {
        const double lx = (static_cast<double>(gc) + 0.5 + cfg.jitter * (2 * unit(rng) - 1)) * cfg.spacing;
        const double ly = (static_cast<double>(gr) + 0.5 + cfg.jitter * (2 * unit(rng) - 1)) * cfg.spacing;
        std::size_t region = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < centers.size(); ++r) {
          const double d = std::hypot(lx - centers[r].first, ly - centers[r].second);
          if (d < best) {
            best = d;
            region = r;
          }
        }
        const std::size_t arch = region_archetype[region];
        const std::size_t st = draw(cfg.archetype_mixtures[arch], rng);
        const std::size_t sub = st * cfg.n_subclasses / cfg.n_supertypes;
        const std::size_t type = sub * cfg.n_cell_types / cfg.n_subclasses;

        const auto i = static_cast<Eigen::Index>(cell);
        data.coords(i, 0) = x0 + lx;
        data.coords(i, 1) = ly;
        const double lib = library(rng);
        std::vector<double> rate(q);
        double total = 0.0;
        for (std::size_t g = 0; g < q; ++g) {
          rate[g] = profile[st][g] * shift[arch][g];
          total += rate[g];
        }
        double counted = 0.0;
        for (std::size_t g = 0; g < q; ++g) {
          std::poisson_distribution<long> pois(lib * rate[g] / total);
          const auto v = static_cast<double>(pois(rng));
          data.expression(i, static_cast<Eigen::Index>(g)) = v;
          counted += v;
        }
        if (counted == 0.0) {
          // Keep every cell's library nonzero.
          Eigen::Index top = 0;
          Eigen::Map<const Eigen::VectorXd>(rate.data(), static_cast<Eigen::Index>(q)).maxCoeff(&top);
          data.expression(i, top) = 1.0;
        }

        char id[32];
        std::snprintf(id, sizeof(id), "cell%06zu", cell);
        data.cell_ids.emplace_back(id);
        types.push_back("T" + std::to_string(type));
        subclasses.push_back("S" + std::to_string(sub));
        supertypes.push_back("ST" + std::to_string(st));
        conditions.push_back("cond" + std::to_string(cond));
        out.archetype.push_back(arch);
        out.region.push_back(s * cfg.regions_per_section + region);
        out.section.push_back(s);
      }
    }
  }
  data.cell_types = Categorical::from_labels(types);
  data.subclasses = Categorical::from_labels(subclasses);
  data.supertypes = Categorical::from_labels(supertypes);
  data.condition = Categorical::from_labels(conditions);
  data.validate();
  return out;
}

void write_tissue(const SyntheticTissue& tissue, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(fs::path(dir) / name, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorCode::kIoError, "cannot create " + (fs::path(dir) / name).string());
    return f;
  };
  {
    auto f = open("cells.csv");
    write_cells_csv(f, tissue.dataset);
  }
  {
    auto f = open("expression.csv");
    write_dense_expression_csv(f, tissue.dataset);
  }
  {
    auto f = open("ground_truth.csv");
    f << "cell_id,section,region,archetype\n";
    for (std::size_t i = 0; i < tissue.archetype.size(); ++i) {
      write_csv_row(f, {tissue.dataset.cell_ids[i], std::to_string(tissue.section[i]),
                        std::to_string(tissue.region[i]), std::to_string(tissue.archetype[i])});
    }
  }
  {
    auto f = open("pipeline.toml");
    f << "[input]\ncells = \"cells.csv\"\nexpression = \"expression.csv\"\n\n"
         "[output]\ndir = \"out\"\n";
  }
}

}  // namespace hyperwave
