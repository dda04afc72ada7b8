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

#include "tagcube/error.h"

namespace tagcube {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kRaggedRows: return "RaggedRows";
    case ErrorCode::kDuplicateColumnName: return "DuplicateColumnName";
    case ErrorCode::kNonNumericMeasure: return "NonNumericMeasure";
    case ErrorCode::kUnknownColumn: return "UnknownColumn";
    case ErrorCode::kOverlappingRoles: return "OverlappingRoles";
    case ErrorCode::kEmptyDimensionSet: return "EmptyDimensionSet";
    case ErrorCode::kEmptyMeasureSet: return "EmptyMeasureSet";
    case ErrorCode::kIncompleteMapping: return "IncompleteMapping";
    case ErrorCode::kUnknownDimension: return "UnknownDimension";
    case ErrorCode::kUnknownMeasure: return "UnknownMeasure";
    case ErrorCode::kEmptyValueSet: return "EmptyValueSet";
    case ErrorCode::kHierarchyMismatch: return "HierarchyMismatch";
    case ErrorCode::kNoFinerLevel: return "NoFinerLevel";
    case ErrorCode::kMissingProvenance: return "MissingProvenance";
    case ErrorCode::kNegativeWeight: return "NegativeWeight";
    case ErrorCode::kAllZeroWeights: return "AllZeroWeights";
    case ErrorCode::kSingletonCloud: return "SingletonCloud";
    case ErrorCode::kEmptyCloud: return "EmptyCloud";
    case ErrorCode::kNonPositiveBaseline: return "NonPositiveBaseline";
    case ErrorCode::kDimensionNotInIceberg: return "DimensionNotInIceberg";
    case ErrorCode::kOverlappingDims: return "OverlappingDims";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kBothEmpty: return "BothEmpty";
    case ErrorCode::kPermutationMismatch: return "PermutationMismatch";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kBusy: return "Busy";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace tagcube
