/*
 * Copyright 2026 The orthofactor Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ORTHOFACTOR_ERROR_HPP_
#define ORTHOFACTOR_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace orthofactor {

enum class ErrorCode {
  kNonUnit,
  kDescriptorMismatch,
  kDimensionMismatch,
  kNonUnitDeterminant,
  kInvalidRing,
  kNotSymmetric,
  kNotIsotropic,
  kNotOrthogonalPair,
  kNotUnimodular,
  kUnsupportedRing,
  kNoSolution,
  kSearchExhausted,
  kBadIndices,
  kNotAlternating,
  kNotOrthogonal,
  kNotStandardForm,
  kInternalInconsistency,
  kConventionMismatch,
  kUnsupportedShape,
  kDetNotOne,
  kFormMismatch,
  kUnsupportedToken,
  kCapExceeded,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonUnit: return "NonUnit";
    case ErrorCode::kDescriptorMismatch: return "DescriptorMismatch";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonUnitDeterminant: return "NonUnitDeterminant";
    case ErrorCode::kInvalidRing: return "InvalidRing";
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kNotIsotropic: return "NotIsotropic";
    case ErrorCode::kNotOrthogonalPair: return "NotOrthogonalPair";
    case ErrorCode::kNotUnimodular: return "NotUnimodular";
    case ErrorCode::kUnsupportedRing: return "UnsupportedRing";
    case ErrorCode::kNoSolution: return "NoSolution";
    case ErrorCode::kSearchExhausted: return "SearchExhausted";
    case ErrorCode::kBadIndices: return "BadIndices";
    case ErrorCode::kNotAlternating: return "NotAlternating";
    case ErrorCode::kNotOrthogonal: return "NotOrthogonal";
    case ErrorCode::kNotStandardForm: return "NotStandardForm";
    case ErrorCode::kInternalInconsistency: return "InternalInconsistency";
    case ErrorCode::kConventionMismatch: return "ConventionMismatch";
    case ErrorCode::kUnsupportedShape: return "UnsupportedShape";
    case ErrorCode::kDetNotOne: return "DetNotOne";
    case ErrorCode::kFormMismatch: return "FormMismatch";
    case ErrorCode::kUnsupportedToken: return "UnsupportedToken";
    case ErrorCode::kCapExceeded: return "CapExceeded";
  }
  return "Unknown";
}

/// Every failure raised by the library. `code()` names the failure class;
/// `what()` carries a human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace orthofactor

#endif  // ORTHOFACTOR_ERROR_HPP_
