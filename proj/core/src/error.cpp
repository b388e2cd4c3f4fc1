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

#include "hyperwave/error.hpp"

namespace hyperwave {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyEdge: return "EmptyEdge";
    case ErrorCode::kIsolatedVertex: return "IsolatedVertex";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kSizeCapExceeded: return "SizeCapExceeded";
    case ErrorCode::kEigenSolverFailure: return "EigenSolverFailure";
    case ErrorCode::kNotTwoUniform: return "NotTwoUniform";
    case ErrorCode::kInvalidScales: return "InvalidScales";
    case ErrorCode::kInvalidJ: return "InvalidJ";
    case ErrorCode::kDegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::kTooFewPoints: return "TooFewPoints";
    case ErrorCode::kZeroLibraryCell: return "ZeroLibraryCell";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kZeroRow: return "ZeroRow";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kClassTooSmall: return "ClassTooSmall";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kDegenerateEigenspace: return "DegenerateEigenspace";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kMissingCell: return "MissingCell";
    case ErrorCode::kDuplicateCell: return "DuplicateCell";
    case ErrorCode::kFormatError: return "FormatError";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidGeneratorConfig: return "InvalidGeneratorConfig";
  }
  return "Unknown";
}

ErrorCategory error_category(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigError:
    case ErrorCode::kInvalidGeneratorConfig:
    case ErrorCode::kInvalidJ:
    case ErrorCode::kInvalidScales:
    case ErrorCode::kInvalidArgument:
      return ErrorCategory::kConfig;
    case ErrorCode::kEigenSolverFailure:
    case ErrorCode::kNonConvergence:
    case ErrorCode::kDegenerateEigenspace:
    case ErrorCode::kNonFinite:
    case ErrorCode::kSizeCapExceeded:
      return ErrorCategory::kNumerical;
    default:
      return ErrorCategory::kData;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code),
      message_(message) {}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace hyperwave
