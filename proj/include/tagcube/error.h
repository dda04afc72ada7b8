// Copyright 2026 The Tagcube Authors.
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

namespace tagcube {

enum class ErrorCode {
  // ingest / schema
  kEmptyInput,
  kRaggedRows,
  kDuplicateColumnName,
  kNonNumericMeasure,
  kUnknownColumn,
  kOverlappingRoles,
  kEmptyDimensionSet,
  kEmptyMeasureSet,
  kIncompleteMapping,
  kUnknownDimension,
  kUnknownMeasure,
  // cube operations
  kEmptyValueSet,
  kHierarchyMismatch,
  kNoFinerLevel,
  kMissingProvenance,
  // clouds and metrics
  kNegativeWeight,
  kAllZeroWeights,
  kSingletonCloud,
  kEmptyCloud,
  kNonPositiveBaseline,
  kDimensionNotInIceberg,
  // clustering and layout
  kOverlappingDims,
  kZeroVector,
  kBothEmpty,
  kPermutationMismatch,
  kTooLarge,
  // generic
  kInvalidArgument,
  kNotFound,
  kBusy,
  kIo,
};

/// Stable identifier used on the wire, e.g. "RaggedRows".
std::string_view error_name(ErrorCode code);

/// The single exception type thrown by the engine. `code()` is what callers
/// branch on; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace tagcube
