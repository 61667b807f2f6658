/*
 * Copyright 2026 The Abide Authors.
 *
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
#ifndef ABIDE_ERRORS_HPP_
#define ABIDE_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace abide {

enum class ErrorCode {
  // Dataset validation.
  kMissingOutcome,
  kPhantomOutcome,
  kArityMismatch,
  kEmptyArm,
  kNoRespondentsInArm,
  kInvalidArgument,
  // Model fitting.
  kSeparation,
  kSingularSystem,
  kRankDeficient,
  // Balancing.
  kOutOfRangePropensity,
  kInfeasible,
  kSingularHessian,
  kDegenerateWeights,
  kDiscriminatorFailure,
  // Numerics.
  kQuadratureNotConverged,
  kEmptyVector,
  // I/O.
  kIoFailure,
};

// Coarse grouping used by the CLI to pick an exit code: validation problems
// exit 1, numerical failures exit 2, I/O failures exit 3.
enum class ErrorCategory { kValidation = 1, kNumerical = 2, kIo = 3 };

inline ErrorCategory error_category(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingOutcome:
    case ErrorCode::kPhantomOutcome:
    case ErrorCode::kArityMismatch:
    case ErrorCode::kEmptyArm:
    case ErrorCode::kNoRespondentsInArm:
    case ErrorCode::kInvalidArgument:
      return ErrorCategory::kValidation;
    case ErrorCode::kIoFailure:
      return ErrorCategory::kIo;
    default:
      return ErrorCategory::kNumerical;
  }
}

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingOutcome: return "MissingOutcome";
    case ErrorCode::kPhantomOutcome: return "PhantomOutcome";
    case ErrorCode::kArityMismatch: return "ArityMismatch";
    case ErrorCode::kEmptyArm: return "EmptyArm";
    case ErrorCode::kNoRespondentsInArm: return "NoRespondentsInArm";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kSeparation: return "Separation";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kOutOfRangePropensity: return "OutOfRangePropensity";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kSingularHessian: return "SingularHessian";
    case ErrorCode::kDegenerateWeights: return "DegenerateWeights";
    case ErrorCode::kDiscriminatorFailure: return "DiscriminatorFailure";
    case ErrorCode::kQuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::kEmptyVector: return "EmptyVector";
    case ErrorCode::kIoFailure: return "IoFailure";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " +
                           message),
        code_(code) {}

  ErrorCode code() const { return code_; }
  ErrorCategory category() const { return error_category(code_); }

 private:
  ErrorCode code_;
};

}  // namespace abide

#endif  // ABIDE_ERRORS_HPP_
