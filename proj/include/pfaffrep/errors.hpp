/*
 * Copyright 2026 The pfaffrep Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pfaffrep {

enum class ErrorCode {
  // usage / schema
  Usage,
  SchemaError,
  SkewSymmetryViolation,
  InvalidTolerance,
  // preconditions
  DegreeMismatch,
  ZeroPoint,
  PointAtInfinity,
  NotOnCurve,
  IndexOutOfRange,
  NonGenericLine,
  SingularTransform,
  NotInCanonicalForm,
  NotUnimodular,
  VectorNotInKernel,
  DegenerateDenominator,
  SamePoint,
  NotAdmissible,
  NoAdmissiblePartner,
  SampleOnExceptionalLine,
  NotOnBaseLocus,
  Unsupported,
  // numerical
  RepeatedRoots,
  RankDeficiency,
  SpanFailure,
  SingularGamma,
  NotConverged,
  InconsistentPolarData,
  DegenerateHessian,
  NotAProductOfLines,
  CorankNotOne,
  NoMatch,
  MultipleMatches,
};

/// Coarse classification used for process exit codes.
enum class ErrorClass { Usage = 1, Schema = 2, Numerical = 3, Precondition = 4 };

std::string_view to_string(ErrorCode code);
ErrorClass classify(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }
  ErrorClass error_class() const noexcept { return classify(code_); }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace pfaffrep
