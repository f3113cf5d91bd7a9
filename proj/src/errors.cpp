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

#include "pfaffrep/errors.hpp"

namespace pfaffrep {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage: return "Usage";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::SkewSymmetryViolation: return "SkewSymmetryViolation";
    case ErrorCode::InvalidTolerance: return "InvalidTolerance";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::ZeroPoint: return "ZeroPoint";
    case ErrorCode::PointAtInfinity: return "PointAtInfinity";
    case ErrorCode::NotOnCurve: return "NotOnCurve";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NonGenericLine: return "NonGenericLine";
    case ErrorCode::SingularTransform: return "SingularTransform";
    case ErrorCode::NotInCanonicalForm: return "NotInCanonicalForm";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::VectorNotInKernel: return "VectorNotInKernel";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::SamePoint: return "SamePoint";
    case ErrorCode::NotAdmissible: return "NotAdmissible";
    case ErrorCode::NoAdmissiblePartner: return "NoAdmissiblePartner";
    case ErrorCode::SampleOnExceptionalLine: return "SampleOnExceptionalLine";
    case ErrorCode::NotOnBaseLocus: return "NotOnBaseLocus";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::RepeatedRoots: return "RepeatedRoots";
    case ErrorCode::RankDeficiency: return "RankDeficiency";
    case ErrorCode::SpanFailure: return "SpanFailure";
    case ErrorCode::SingularGamma: return "SingularGamma";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::InconsistentPolarData: return "InconsistentPolarData";
    case ErrorCode::DegenerateHessian: return "DegenerateHessian";
    case ErrorCode::NotAProductOfLines: return "NotAProductOfLines";
    case ErrorCode::CorankNotOne: return "CorankNotOne";
    case ErrorCode::NoMatch: return "NoMatch";
    case ErrorCode::MultipleMatches: return "MultipleMatches";
  }
  return "Unknown";
}

ErrorClass classify(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage:
      return ErrorClass::Usage;
    case ErrorCode::SchemaError:
    case ErrorCode::SkewSymmetryViolation:
    case ErrorCode::InvalidTolerance:
      return ErrorClass::Schema;
    case ErrorCode::RepeatedRoots:
    case ErrorCode::RankDeficiency:
    case ErrorCode::SpanFailure:
    case ErrorCode::SingularGamma:
    case ErrorCode::NotConverged:
    case ErrorCode::InconsistentPolarData:
    case ErrorCode::DegenerateHessian:
    case ErrorCode::NotAProductOfLines:
    case ErrorCode::CorankNotOne:
    case ErrorCode::NoMatch:
    case ErrorCode::MultipleMatches:
      return ErrorClass::Numerical;
    default:
      return ErrorClass::Precondition;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace pfaffrep
