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

#include "hyperwave/dataset_io.hpp"

#include <ostream>
#include <unordered_map>

#include "hyperwave/csv.hpp"
#include "hyperwave/error.hpp"

namespace hyperwave {

namespace {

std::string at(const std::string& path, const CsvRow& row, std::size_t col) {
  return path + ":" + std::to_string(row.line) + ": column " + std::to_string(col + 1);
}

void expect_width(const std::string& path, const CsvRow& row, std::size_t width) {
  if (row.fields.size() != width) {
    fail(ErrorCode::kParseError, path + ":" + std::to_string(row.line) + ": expected " +
                                     std::to_string(width) + " fields, found " +
                                     std::to_string(row.fields.size()));
  }
}

}  // namespace

SpatialDataset ingest(const std::string& cells_path, const std::string& expression_path,
                      ExpressionFormat format) {
  const auto cell_rows = read_csv_file(cells_path);
  if (cell_rows.empty()) fail(ErrorCode::kParseError, cells_path + ": empty file");
  {
    std::string header;
    for (std::size_t i = 0; i < cell_rows[0].fields.size(); ++i) {
      header += (i ? "," : "") + cell_rows[0].fields[i];
    }
    if (header != kCellsHeader) {
      fail(ErrorCode::kParseError, cells_path + ":1: header must be '" +
                                       std::string(kCellsHeader) + "', found '" + header + "'");
    }
  }

  SpatialDataset data;
  const std::size_t n = cell_rows.size() - 1;
  data.coords.resize(static_cast<Eigen::Index>(n), 2);
  std::vector<std::string> types, subclasses, supertypes, conditions;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t r = 1; r < cell_rows.size(); ++r) {
    const CsvRow& row = cell_rows[r];
    expect_width(cells_path, row, 7);
    const std::string& id = row.fields[0];
    if (id.empty()) fail(ErrorCode::kParseError, at(cells_path, row, 0) + ": empty cell_id");
    if (!index.emplace(id, r - 1).second) {
      fail(ErrorCode::kDuplicateCell, cells_path + ":" + std::to_string(row.line) +
                                          ": duplicate cell_id '" + id + "'");
    }
    data.cell_ids.push_back(id);
    const auto i = static_cast<Eigen::Index>(r - 1);
    data.coords(i, 0) = parse_double(row.fields[1], at(cells_path, row, 1));
    data.coords(i, 1) = parse_double(row.fields[2], at(cells_path, row, 2));
    types.push_back(row.fields[3]);
    subclasses.push_back(row.fields[4]);
    supertypes.push_back(row.fields[5]);
    conditions.push_back(row.fields[6]);
  }
  data.cell_types = Categorical::from_labels(types);
  data.subclasses = Categorical::from_labels(subclasses);
  data.supertypes = Categorical::from_labels(supertypes);
  data.condition = Categorical::from_labels(conditions);

  const auto expr_rows = read_csv_file(expression_path);
  if (expr_rows.empty()) fail(ErrorCode::kParseError, expression_path + ": empty file");
  const auto& header = expr_rows[0].fields;
  if (header.empty() || header[0] != "cell_id") {
    fail(ErrorCode::kParseError, expression_path + ":1: first column must be cell_id");
  }
  const bool looks_sparse = header.size() == 3 && header[1] == "gene" && header[2] == "count";
  if (format == ExpressionFormat::kAuto) {
    format = looks_sparse ? ExpressionFormat::kSparse : ExpressionFormat::kDense;
  }

  auto lookup = [&](const CsvRow& row) {
    const auto it = index.find(row.fields[0]);
    if (it == index.end()) {
      fail(ErrorCode::kMissingCell, expression_path + ":" + std::to_string(row.line) +
                                        ": unknown cell_id '" + row.fields[0] + "'");
    }
    return it->second;
  };

  if (format == ExpressionFormat::kDense) {
    if (header.size() < 2) fail(ErrorCode::kParseError, expression_path + ":1: no gene columns");
    data.gene_names.assign(header.begin() + 1, header.end());
    const std::size_t q = data.gene_names.size();
    data.expression = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(q));
    std::vector<bool> seen(n, false);
    for (std::size_t r = 1; r < expr_rows.size(); ++r) {
      const CsvRow& row = expr_rows[r];
      expect_width(expression_path, row, q + 1);
      const std::size_t i = lookup(row);
      if (seen[i]) {
        fail(ErrorCode::kDuplicateCell, expression_path + ":" + std::to_string(row.line) +
                                            ": duplicate row for '" + row.fields[0] + "'");
      }
      seen[i] = true;
      for (std::size_t g = 0; g < q; ++g) {
        data.expression(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(g)) =
            parse_double(row.fields[g + 1], at(expression_path, row, g + 1));
      }
    }
  } else {
    if (!looks_sparse) {
      fail(ErrorCode::kParseError, expression_path + ":1: sparse header must be cell_id,gene,count");
    }
    std::unordered_map<std::string, std::size_t> gene_index;
    struct Triplet {
      std::size_t cell, gene;
      double count;
    };
    std::vector<Triplet> triplets;
    for (std::size_t r = 1; r < expr_rows.size(); ++r) {
      const CsvRow& row = expr_rows[r];
      expect_width(expression_path, row, 3);
      const std::size_t i = lookup(row);
      auto [it, inserted] = gene_index.emplace(row.fields[1], data.gene_names.size());
      if (inserted) data.gene_names.push_back(row.fields[1]);
      triplets.push_back({i, it->second, parse_double(row.fields[2], at(expression_path, row, 2))});
    }
    data.expression = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(data.gene_names.size()));
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> seen =
        Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(
            data.expression.rows(), data.expression.cols(), false);
    for (const auto& t : triplets) {
      const auto i = static_cast<Eigen::Index>(t.cell);
      const auto g = static_cast<Eigen::Index>(t.gene);
      if (seen(i, g)) {
        fail(ErrorCode::kDuplicateCell, expression_path + ": repeated entry for cell '" +
                                            data.cell_ids[t.cell] + "', gene '" +
                                            data.gene_names[t.gene] + "'");
      }
      seen(i, g) = true;
      data.expression(i, g) = t.count;
    }
  }
  data.validate();
  return data;
}

void write_cells_csv(std::ostream& out, const SpatialDataset& data) {
  out << kCellsHeader << '\n';
  for (std::size_t i = 0; i < data.num_cells(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    write_csv_row(out, {data.cell_ids[i], format_double(data.coords(r, 0)),
                        format_double(data.coords(r, 1)), data.cell_types.label(i),
                        data.subclasses.label(i), data.supertypes.label(i),
                        data.condition.label(i)});
  }
}

void write_dense_expression_csv(std::ostream& out, const SpatialDataset& data) {
  std::vector<std::string> fields{"cell_id"};
  fields.insert(fields.end(), data.gene_names.begin(), data.gene_names.end());
  write_csv_row(out, fields);
  for (std::size_t i = 0; i < data.num_cells(); ++i) {
    fields.assign(1, data.cell_ids[i]);
    for (Eigen::Index g = 0; g < data.expression.cols(); ++g) {
      fields.push_back(format_double(data.expression(static_cast<Eigen::Index>(i), g)));
    }
    write_csv_row(out, fields);
  }
}

void write_sparse_expression_csv(std::ostream& out, const SpatialDataset& data) {
  out << "cell_id,gene,count\n";
  for (std::size_t i = 0; i < data.num_cells(); ++i) {
    for (Eigen::Index g = 0; g < data.expression.cols(); ++g) {
      const double v = data.expression(static_cast<Eigen::Index>(i), g);
      // The first cell lists every gene so gene order survives the round trip.
      if (v == 0.0 && i != 0) continue;
      write_csv_row(out, {data.cell_ids[i], data.gene_names[static_cast<std::size_t>(g)],
                          format_double(v)});
    }
  }
}

}  // namespace hyperwave
