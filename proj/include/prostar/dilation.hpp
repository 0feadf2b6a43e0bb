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

#include <optional>
#include <string>
#include <vector>

#include "prostar/kernel.hpp"
#include "prostar/linalg.hpp"
#include "prostar/localg.hpp"
#include "prostar/lochilbert.hpp"
#include "prostar/locop.hpp"

namespace prostar {

struct KolmogorovOptions {
  // Take eigenpairs in ascending order instead of descending. Yields a second,
  // independently ordered minimal decomposition of the same kernel.
  bool reversed = false;
};

/// k(x, y) = V(x)* V(y) with V(x) : H -> K locally bounded.
struct KolmogorovDecomposition {
  std::vector<std::string> points;
  SpacePtr space;           // H
  SpacePtr dilation_space;  // K
  std::vector<LocallyBoundedOperator> V;
  bool minimal = false;
  double residual = 0.0;  // worst ‖V_λ(x)* V_λ(y) − k_λ(x, y)‖
  double gram_norm = 0.0;  // ‖G_top‖

  // [V_λ(x_1) ... V_λ(x_m)] : ⊕ H_λ -> K_λ.
  Mat columns(std::size_t level) const;
  // rank of columns(level) after cutoff, per level.
  std::vector<int> spanning_ranks() const;
};

KolmogorovDecomposition kolmogorov(const OperatorKernel& k, KolmogorovOptions options = {},
                                   Tolerance tol = {});

// Compresses K onto the span of V(X)H at every level.
KolmogorovDecomposition minimalize(const KolmogorovDecomposition& d, Tolerance tol = {});

// Worst ‖V_λ(x)* V_λ(y) − k_λ(x, y)‖.
double factorization_residual(const KolmogorovDecomposition& d, const OperatorKernel& k);

// π(s) on K determined by V(x)h ↦ Σ_y A(y, x) V(y)h, zero off the span.
// `action` is the m x m coefficient matrix of s on the points.
LocallyBoundedOperator represent_action(const KolmogorovDecomposition& d, const Mat& action,
                                        Tolerance tol = {});

struct InvariantDilation {
  KolmogorovDecomposition decomposition;
  std::vector<LocallyBoundedOperator> pi;  // per semigroup element
  std::vector<std::vector<double>> certificates;  // [s][λ] = least c_λ(s)
  double representation_residual = 0.0;  // worst ‖π(st) − π(s)π(t)‖
  double star_residual = 0.0;            // worst ‖π(s*) − π(s)*‖
  double intertwining_residual = 0.0;    // worst ‖π(s)V(x) − V(s·x)‖
  double coherence_residual = 0.0;       // worst over V and π
};

// Throws KernelNotPSD, NotInvariant (s, x, y) or BoundednessFails (s, λ)
// carrying the witness vector.
InvariantDilation invariant_dilation(const OperatorKernel& k, const SemigroupAction& action,
                                     KolmogorovOptions options = {}, Tolerance tol = {});

/// Function view of a minimal decomposition: w ∈ K_λ ↦ f_w(x) = V_λ(x)* w.
class ReproducingKernelSpace {
 public:
  // Throws NotMinimal.
  explicit ReproducingKernelSpace(KolmogorovDecomposition d);

  const KolmogorovDecomposition& decomposition() const { return d_; }
  LocalVector evaluate(const LocalVector& w, std::size_t x) const;
  // k_x h = V(x) h.
  LocalVector section(std::size_t x, const LocalVector& h) const;
  // ⟨f, g⟩ in the function space, transported from K.
  cplx inner(const LocalVector& w, const LocalVector& v) const;
  // |⟨f_w, k_x h⟩ − ⟨f_w(x), h⟩_H|.
  double reproducing_residual(const LocalVector& w, std::size_t x, const LocalVector& h) const;

 private:
  KolmogorovDecomposition d_;
};

struct Equivalence {
  LocallyBoundedOperator U;
  double unitary_residual = 0.0;
  double intertwining_residual = 0.0;  // worst ‖U V₁(x) − V₂(x)‖ and ‖U π₁(s) − π₂(s) U‖
};

// U with U V₁(x) = V₂(x). Throws NotMinimal or NotEquivalent.
Equivalence unitary_equivalence(const KolmogorovDecomposition& d1,
                                const KolmogorovDecomposition& d2, Tolerance tol = {});
Equivalence unitary_equivalence(const InvariantDilation& d1, const InvariantDilation& d2,
                                Tolerance tol = {});

struct StinespringDilation {
  SpacePtr space;  // K
  std::vector<LocallyBoundedOperator> pi_basis;  // π(b_i)
  LocallyBoundedOperator W;                      // H -> K, W = V(1)
  KolmogorovDecomposition decomposition;
  std::vector<std::vector<double>> certificates;  // [i][λ] for left multiplication by b_i
  double reproduction_residual = 0.0;    // worst ‖φ(b_i) − W* π(b_i) W‖
  double multiplicativity_residual = 0.0;  // basis pairs and orbit pairs
  double star_residual = 0.0;
  double unit_residual = 0.0;  // ‖π(1) − I‖
  double invariance_residual = 0.0;
  double coherence_residual = 0.0;
  std::size_t orbit_size = 0;
  bool orbit_complete = false;

  LocallyBoundedOperator pi(const Vec& a) const;
};

// Throws NotUnital, NotCompletelyPositive or BoundednessFails.
StinespringDilation stinespring(const ConcreteLocallyCStarAlgebra& a, const CpMap& phi,
                                KolmogorovOptions options = {}, Tolerance tol = {});

}  // namespace prostar
