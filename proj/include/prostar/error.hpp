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

#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace prostar {

enum class ErrorCode {
  // poset
  EmptyPoset,
  DuplicateElement,
  UnknownElement,
  NotDirected,
  NotAntisymmetric,
  // spaces and operators
  DimensionMismatch,
  NotIsometric,
  NotNested,
  ShapeMismatch,
  PosetMismatch,
  CoherenceViolation,
  AdjointCoherenceViolation,
  NotEndomorphism,
  NotPositive,
  // algebras
  ClosureTooLarge,
  NotInSpan,
  NotMultiplicative,
  NotStarPreserving,
  NotCoherent,
  InvalidSystem,
  // kernels and semigroups
  InvalidSemigroup,
  InvalidAction,
  KernelNotPSD,
  NotInvariant,
  BoundednessFails,
  PointsNotSpanning,
  ProductOutsideSpan,
  // dilations
  NotMinimal,
  NotEquivalent,
  NotUnital,
  NotCompletelyPositive,
  // modules
  GramianNotHermitian,
  GramianNotPositive,
  ActionIncompatible,
  GramianOutsideAlgebra,
  NotAModule,
  // front-end
  ParseError,
  ReferenceError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Construction or validation failure. Carries the offending poset labels
/// (or semigroup elements), the measured residual and, for boundedness
/// failures, a witness vector.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::vector<std::string> where = {},
        double residual = std::numeric_limits<double>::quiet_NaN());

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::string>& where() const noexcept { return where_; }
  double residual() const noexcept { return residual_; }
  const Eigen::VectorXcd& witness() const noexcept { return witness_; }

  Error& with_witness(Eigen::VectorXcd w) {
    witness_ = std::move(w);
    return *this;
  }

 private:
  ErrorCode code_;
  std::vector<std::string> where_;
  double residual_;
  Eigen::VectorXcd witness_;
};

}  // namespace prostar
