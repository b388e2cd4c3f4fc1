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
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hyperwave {

/// Labels drawn from a closed vocabulary; codes index into `vocabulary`.
struct Categorical {
  std::vector<std::string> vocabulary;
  std::vector<std::size_t> codes;

  std::size_t size() const { return codes.size(); }
  const std::string& label(std::size_t i) const { return vocabulary[codes[i]]; }

  /// Encodes labels with vocabulary in first-appearance order.
  static Categorical from_labels(const std::vector<std::string>& labels);

  bool operator==(const Categorical&) const = default;
};

/// Spatial transcriptomics sample: positions, raw counts and labels per cell.
struct SpatialDataset {
  std::vector<std::string> cell_ids;
  Eigen::MatrixXd coords;      // n x 2
  Eigen::MatrixXd expression;  // n x q raw counts
  std::vector<std::string> gene_names;
  Categorical cell_types;
  Categorical subclasses;
  Categorical supertypes;
  Categorical condition;

  std::size_t num_cells() const { return cell_ids.size(); }
  std::size_t num_genes() const { return gene_names.size(); }

  /// Throws DimensionMismatch, NonFinite, InvalidArgument or UnknownLabel.
  void validate() const;
};

}  // namespace hyperwave
