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

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "prostar/dilation.hpp"
#include "prostar/linalg.hpp"
#include "prostar/localg.hpp"
#include "prostar/locop.hpp"

namespace prostar {

/// A finitely presented Hilbert module over a concrete algebra A. Module
/// elements are complex combinations Σ c_i e_i of the generators; the
/// gramian is conjugate-linear in its first and linear in its second slot.
struct AbstractHilbertModule {
  ConcreteLocallyCStarAlgebra algebra;
  std::vector<std::string> generators;
  /// e_i · a = Σ result_j e_j for one algebra element a.
  struct ActionEntry {
    std::size_t generator = 0;
    Vec element;  // over A's basis
    Vec result;   // over the generators
  };

  std::vector<std::vector<Vec>> gramian;  // [i][j] = [e_i, e_j] over A's basis
  std::vector<ActionEntry> action;        // partial right action

  std::size_t size() const { return generators.size(); }
  // [e, f] for coefficient vectors over the generators.
  Vec bracket(const Vec& e, const Vec& f) const;
  // Block Gram matrix at a level: block (i, j) = [e_i, e_j]_λ.
  Mat gram(std::size_t level) const;
};

struct ModuleReport {
  double hermitian_residual = 0.0;
  std::vector<double> min_eigenvalues;  // per level
  double compatibility_residual = 0.0;  // worst ‖[e_i, e_j·a] − [e_i, e_j] a‖
  bool definite = false;
  // (generator, basis index) pairs whose action the table does not determine.
  std::vector<std::pair<std::size_t, std::size_t>> undefined_actions;
};

// Throws GramianNotHermitian, GramianNotPositive or ActionIncompatible.
ModuleReport check_module(const AbstractHilbertModule& m, Tolerance tol = {});

// p̄_μ(e) = p_μ([e, e])^{1/2}.
double module_seminorm(const AbstractHilbertModule& m, const Vec& e, std::size_t mu);
double module_seminorm(const AbstractHilbertModule& m, const Vec& e, std::string_view mu);

struct OperatorModel {
  KolmogorovDecomposition decomposition;
  std::vector<LocallyBoundedOperator> phi;  // Φ(e_i) : H -> K
  ModuleReport module;
  double gramian_residual = 0.0;  // worst ‖Φ(e)*Φ(f) − [e, f]‖
  double action_residual = 0.0;   // worst ‖Φ(e·b) − Φ(e) b‖ over defined entries
  int gram_rank = 0;              // rank of the abstract block Gram at the top
  int image_rank = 0;             // rank of the Φ-image Gram at the top
};

OperatorModel operator_model(const AbstractHilbertModule& m, Tolerance tol = {});

/// A module of locally bounded operators H -> K closed under T*S ∈ A and
/// under right multiplication by A.
class ConcreteHilbertModule {
 public:
  // Throws GramianOutsideAlgebra or NotAModule.
  ConcreteHilbertModule(ConcreteLocallyCStarAlgebra algebra, SpacePtr codomain,
                        std::vector<LocallyBoundedOperator> elements, Tolerance tol = {});

  const ConcreteLocallyCStarAlgebra& algebra() const { return algebra_; }
  const SpacePtr& domain() const { return algebra_.carrier(); }
  const SpacePtr& codomain() const { return codomain_; }
  const std::vector<LocallyBoundedOperator>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  // [T_i, T_j] = T_i* T_j over A's basis.
  const Vec& gramian(std::size_t i, std::size_t j) const { return gramian_[i][j]; }
  // T_i b_k over the elements.
  const Vec& right_action(std::size_t i, std::size_t k) const { return action_[i][k]; }
  AbstractHilbertModule abstract(std::vector<std::string> labels = {}) const;

 private:
  ConcreteLocallyCStarAlgebra algebra_;
  SpacePtr codomain_;
  std::vector<LocallyBoundedOperator> elements_;
  std::vector<std::vector<Vec>> gramian_;
  std::vector<std::vector<Vec>> action_;
};

struct ExteriorTensor {
  ConcreteHilbertModule module;  // elements e_i ⊗ f_j, i-major
  double gramian_residual = 0.0;  // worst ‖(e⊗f)*(e'⊗f') − (e*e')⊗(f*f')‖
};

ExteriorTensor exterior_tensor(const ConcreteHilbertModule& e, const ConcreteHilbertModule& f,
                               Tolerance tol = {});

// ‖(e⊗f)(a⊗b) − (ea)⊗(fb)‖ for operators e : H -> K, f : G -> N, a on H, b on G.
double right_action_residual(const LocallyBoundedOperator& e, const LocallyBoundedOperator& f,
                             const LocallyBoundedOperator& a, const LocallyBoundedOperator& b);

}  // namespace prostar
