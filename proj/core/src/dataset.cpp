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

#include "hyperwave/dataset.hpp"

#include <string>
#include <unordered_map>

#include "hyperwave/error.hpp"

namespace hyperwave {

Categorical Categorical::from_labels(const std::vector<std::string>& labels) {
  Categorical c;
  std::unordered_map<std::string, std::size_t> index;
  c.codes.reserve(labels.size());
  for (const auto& l : labels) {
    auto [it, inserted] = index.emplace(l, c.vocabulary.size());
    if (inserted) c.vocabulary.push_back(l);
    c.codes.push_back(it->second);
  }
  return c;
}

namespace {

void check_categorical(const Categorical& c, std::size_t n, const char* what) {
  if (c.codes.size() != n) {
    fail(ErrorCode::kDimensionMismatch,
         std::string(what) + " has " + std::to_string(c.codes.size()) +
             " labels for " + std::to_string(n) + " cells");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (c.codes[i] >= c.vocabulary.size()) {
      fail(ErrorCode::kUnknownLabel, std::string(what) + " label code " +
                                         std::to_string(c.codes[i]) +
                                         " at cell " + std::to_string(i) +
                                         " is outside the vocabulary");
    }
  }
}

}  // namespace

void SpatialDataset::validate() const {
  const std::size_t n = cell_ids.size();
  if (static_cast<std::size_t>(coords.rows()) != n || coords.cols() != 2) {
    fail(ErrorCode::kDimensionMismatch, "coords must be n x 2");
  }
  if (static_cast<std::size_t>(expression.rows()) != n ||
      static_cast<std::size_t>(expression.cols()) != gene_names.size()) {
    fail(ErrorCode::kDimensionMismatch, "expression must be n x q");
  }
  if (!coords.allFinite()) fail(ErrorCode::kNonFinite, "coordinates not finite");
  if (!expression.allFinite()) fail(ErrorCode::kNonFinite, "expression not finite");
  if ((expression.array() < 0.0).any()) {
    fail(ErrorCode::kInvalidArgument, "expression counts must be nonnegative");
  }
  check_categorical(cell_types, n, "cell_type");
  check_categorical(subclasses, n, "subclass");
  check_categorical(supertypes, n, "supertype");
  check_categorical(condition, n, "condition");
}

}  // namespace hyperwave
