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

#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "prostar/linalg.hpp"
#include "prostar/lochilbert.hpp"
#include "prostar/locop.hpp"

namespace prostar {

/// Multiplication and involution of a finite-dimensional *-algebra in a
/// fixed basis. Elements are coefficient vectors.
struct AlgebraStructure {
  std::size_t dim = 0;
  std::vector<std::vector<Vec>> product;  // product[i][j] = b_i b_j
  std::vector<Vec> star;                  // star[i] = b_i*

  Vec multiply(const Vec& a, const Vec& b) const;
  // Conjugate-linear: (Σ a_i b_i)* = Σ conj(a_i) b_i*.
  Vec adjoint(const Vec& a) const;
  Vec unit_vector(std::size_t i) const;
};

/// A *-subalgebra of B_loc(H) spanned by a Frobenius-orthonormal basis of
/// top-level matrices, produced by closing a generating set under products,
/// adjoints and linear combinations.
class ConcreteLocallyCStarAlgebra {
 public:
  // Zero algebra on no carrier; assign from make_algebra before use.
  ConcreteLocallyCStarAlgebra() = default;

  const SpacePtr& carrier() const { return carrier_; }
  const DirectedPoset& poset() const { return carrier_->poset(); }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<LocallyBoundedOperator>& basis() const { return basis_; }
  const std::vector<LocallyBoundedOperator>& generators() const { return generators_; }
  const AlgebraStructure& structure() const { return structure_; }

  LocallyBoundedOperator element(const Vec& coeffs) const;
  Mat element_at(const Vec& coeffs, std::size_t level) const;

  // Coefficients of `top` in the basis when it lies in the span, within
  // 1e-8 * (1 + norm).
  std::optional<Vec> try_express(const Mat& top) const;
  // Throws NotInSpan.
  Vec express(const Mat& top) const;
  Vec express(const LocallyBoundedOperator& t) const { return express(t.top()); }

  Vec multiply(const Vec& a, const Vec& b) const { return structure_.multiply(a, b); }
  Vec adjoint(const Vec& a) const { return structure_.adjoint(a); }

  // Coefficients of the identity of B_loc(H) when A contains it.
  std::optional<Vec> unit() const;

  // Worst ‖b_i b_j − Σ_k c_ij^k b_k‖ and ‖b_i* − Σ s_i^k b_k‖ at the top level.
  double structure_residual() const;

 private:
  friend ConcreteLocallyCStarAlgebra make_algebra(const SpacePtr&,
                                                  std::vector<LocallyBoundedOperator>, Tolerance);

  SpacePtr carrier_;
  std::vector<LocallyBoundedOperator> generators_;
  std::vector<LocallyBoundedOperator> basis_;
  std::vector<Vec> flat_;  // flattened top-level matrices of the basis
  AlgebraStructure structure_;
};

// Closes `generators` (endomorphisms of H) to a *-algebra.
ConcreteLocallyCStarAlgebra make_algebra(const SpacePtr& carrier,
                                         std::vector<LocallyBoundedOperator> generators,
                                         Tolerance tol = {});

// p_μ(a) = ‖a_μ‖.
double algebra_seminorm(const ConcreteLocallyCStarAlgebra& a, const Vec& coeffs, std::size_t mu);
double algebra_seminorm(const ConcreteLocallyCStarAlgebra& a, const Vec& coeffs,
                        std::string_view mu);

// sup over the poset of p_μ(a).
double bounded_norm(const ConcreteLocallyCStarAlgebra& a, const Vec& coeffs);

struct MorphismReport {
  double multiplicativity = 0.0;  // worst ‖ρ(b_i b_j)_λ − ρ(b_i)_λ ρ(b_j)_λ‖
  double star = 0.0;              // worst ‖ρ(b_i*)_λ − ρ(b_i)_λ*‖
  double coherence = 0.0;         // worst ‖ρ(a)_λ‖ over unit a with a_λ = 0
  std::vector<bool> faithful;     // per level

  bool all_faithful() const;
};

// Verifies that b_i ↦ images[i] extends to a coherent *-morphism A -> B.
// `images` are coefficient vectors over B's basis.
MorphismReport check_coherent_morphism(const ConcreteLocallyCStarAlgebra& a,
                                       const ConcreteLocallyCStarAlgebra& b,
                                       const std::vector<Vec>& images, Tolerance tol = {});
// Same with images given as operators on B's carrier.
MorphismReport check_coherent_morphism(const ConcreteLocallyCStarAlgebra& a,
                                       const ConcreteLocallyCStarAlgebra& b,
                                       const std::vector<LocallyBoundedOperator>& images,
                                       Tolerance tol = {});

/// A projective system of finite-dimensional *-subalgebras A_λ of
/// n_λ x n_λ matrices with *-epimorphisms π_{λ,μ} : A_μ -> A_λ given as
/// matrices on coefficient vectors. Pairs missing from `connecting` are
/// derived by composition where possible.
struct MatrixProjectiveSystem {
  DirectedPoset poset;
  std::vector<std::vector<Mat>> bases;                       // per level
  std::map<std::pair<std::size_t, std::size_t>, Mat> connecting;  // (λ, μ), λ < μ
};

struct GelfandNaimarkRep {
  SpacePtr space;
  // π(b_i) for the basis b_i of the top algebra A_top ≅ A.
  std::vector<LocallyBoundedOperator> images;
  ConcreteLocallyCStarAlgebra algebra;  // generated by `images`
  MorphismReport report;
};

// H_λ = ⊕_{μ≤λ} C^{n_μ}, π_λ(a) = ⊕_{μ≤λ} a_μ. Throws InvalidSystem.
GelfandNaimarkRep gelfand_naimark_rep(const MatrixProjectiveSystem& sys, Tolerance tol = {});

// Spatial tensor product on tensor_space(H, G), generated by a_i ⊗ b_j.
ConcreteLocallyCStarAlgebra spatial_tensor(const ConcreteLocallyCStarAlgebra& a,
                                           const ConcreteLocallyCStarAlgebra& b,
                                           Tolerance tol = {});

// max over (λ, α) of |p_{(λ,α)}(a ⊗ b) − p_λ(a) p_α(b)|.
double cross_seminorm_residual(const ConcreteLocallyCStarAlgebra& a,
                               const ConcreteLocallyCStarAlgebra& b, const Vec& x,
                               const Vec& y);

}  // namespace prostar
