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

#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperwave {

enum class ErrorCode {
  kEmptyEdge,
  kIsolatedVertex,
  kIndexOutOfRange,
  kDimensionMismatch,
  kNonFinite,
  kSizeCapExceeded,
  kEigenSolverFailure,
  kNotTwoUniform,
  kInvalidScales,
  kInvalidJ,
  kDegenerateGeometry,
  kTooFewPoints,
  kZeroLibraryCell,
  kUnknownLabel,
  kZeroRow,
  kSingleClass,
  kClassTooSmall,
  kNonConvergence,
  kDegenerateEigenspace,
  kInvalidArgument,
  kParseError,
  kMissingCell,
  kDuplicateCell,
  kFormatError,
  kConfigError,
  kIoError,
  kInvalidGeneratorConfig,
};

// Coarse grouping used to pick process exit codes.
enum class ErrorCategory { kConfig, kData, kNumerical };

std::string_view error_code_name(ErrorCode code);
ErrorCategory error_category(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return error_category(code_); }
  /// The message without the code name prefix that what() carries.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace hyperwave
