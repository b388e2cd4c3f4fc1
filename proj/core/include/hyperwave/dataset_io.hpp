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

#include <iosfwd>
#include <string>

#include "hyperwave/dataset.hpp"

namespace hyperwave {

enum class ExpressionFormat { kAuto, kDense, kSparse };

inline constexpr const char* kCellsHeader =
    "cell_id,x,y,cell_type,subclass,supertype,condition";

/// Reads the cells table and an expression table (dense `cell_id,<gene>...`
/// or sparse triplets `cell_id,gene,count`) into one dataset ordered as the
/// cells file. Vocabularies are frozen in first-appearance order. Cells with
/// no expression entries get all-zero counts.
///
/// Throws ParseError (with line/column), MissingCell, DuplicateCell, IoError.
SpatialDataset ingest(const std::string& cells_path, const std::string& expression_path,
                      ExpressionFormat format = ExpressionFormat::kAuto);

/// Writers used by the synthetic generator and tests.
void write_cells_csv(std::ostream& out, const SpatialDataset& data);
void write_dense_expression_csv(std::ostream& out, const SpatialDataset& data);
void write_sparse_expression_csv(std::ostream& out, const SpatialDataset& data);

}  // namespace hyperwave
