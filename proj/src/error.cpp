// Copyright 2026 The prostar Authors
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

#include "prostar/error.hpp"

namespace prostar {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyPoset: return "EmptyPoset";
    case ErrorCode::DuplicateElement: return "DuplicateElement";
    case ErrorCode::UnknownElement: return "UnknownElement";
    case ErrorCode::NotDirected: return "NotDirected";
    case ErrorCode::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotIsometric: return "NotIsometric";
    case ErrorCode::NotNested: return "NotNested";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::PosetMismatch: return "PosetMismatch";
    case ErrorCode::CoherenceViolation: return "CoherenceViolation";
    case ErrorCode::AdjointCoherenceViolation: return "AdjointCoherenceViolation";
    case ErrorCode::NotEndomorphism: return "NotEndomorphism";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::ClosureTooLarge: return "ClosureTooLarge";
    case ErrorCode::NotInSpan: return "NotInSpan";
    case ErrorCode::NotMultiplicative: return "NotMultiplicative";
    case ErrorCode::NotStarPreserving: return "NotStarPreserving";
    case ErrorCode::NotCoherent: return "NotCoherent";
    case ErrorCode::InvalidSystem: return "InvalidSystem";
    case ErrorCode::InvalidSemigroup: return "InvalidSemigroup";
    case ErrorCode::InvalidAction: return "InvalidAction";
    case ErrorCode::KernelNotPSD: return "KernelNotPSD";
    case ErrorCode::NotInvariant: return "NotInvariant";
    case ErrorCode::BoundednessFails: return "BoundednessFails";
    case ErrorCode::PointsNotSpanning: return "PointsNotSpanning";
    case ErrorCode::ProductOutsideSpan: return "ProductOutsideSpan";
    case ErrorCode::NotMinimal: return "NotMinimal";
    case ErrorCode::NotEquivalent: return "NotEquivalent";
    case ErrorCode::NotUnital: return "NotUnital";
    case ErrorCode::NotCompletelyPositive: return "NotCompletelyPositive";
    case ErrorCode::GramianNotHermitian: return "GramianNotHermitian";
    case ErrorCode::GramianNotPositive: return "GramianNotPositive";
    case ErrorCode::ActionIncompatible: return "ActionIncompatible";
    case ErrorCode::GramianOutsideAlgebra: return "GramianOutsideAlgebra";
    case ErrorCode::NotAModule: return "NotAModule";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ReferenceError: return "ReferenceError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message,
             std::vector<std::string> where, double residual)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      where_(std::move(where)),
      residual_(residual) {}

}  // namespace prostar
