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

#include <string_view>
#include <vector>

#include "prostar/linalg.hpp"
#include "prostar/lochilbert.hpp"

namespace prostar {

/// Worst residuals of the two coherence axioms over all comparable pairs.
struct CoherenceReport {
  double coherence = 0.0;          // ‖T_μ J_{μ,λ} − J_{μ,λ} T_λ‖
  double adjoint_coherence = 0.0;  // ‖T_μ* J_{μ,λ} − J_{μ,λ} T_λ*‖

  double worst() const { return std::max(coherence, adjoint_coherence); }
};

/// A coherent net {T_λ} of matrices H_λ -> K_λ, closed under adjoint
/// coherence. Every level is stored; construction always validates.
class LocallyBoundedOperator {
 public:
  LocallyBoundedOperator(SpacePtr domain, SpacePtr codomain, std::vector<Mat> levels,
                         Tolerance tol = {});

  static LocallyBoundedOperator identity(const SpacePtr& space);
  static LocallyBoundedOperator zero(const SpacePtr& domain, const SpacePtr& codomain);
  // Compresses a top-level matrix onto every level, then validates.
  static LocallyBoundedOperator from_top(const SpacePtr& domain, const SpacePtr& codomain,
                                         const Mat& top, Tolerance tol = {});

  const SpacePtr& domain() const { return domain_; }
  const SpacePtr& codomain() const { return codomain_; }
  const DirectedPoset& poset() const { return domain_->poset(); }
  const std::vector<Mat>& levels() const { return levels_; }
  const Mat& level(std::size_t i) const { return levels_[i]; }
  const Mat& top() const { return levels_[poset().top()]; }
  const CoherenceReport& coherence() const { return report_; }
  bool is_endomorphism() const { return same_space(domain_, codomain_); }

 private:
  struct Unchecked {};
  LocallyBoundedOperator(Unchecked, SpacePtr domain, SpacePtr codomain, std::vector<Mat> levels);
  friend LocallyBoundedOperator adjoint(const LocallyBoundedOperator&);

  SpacePtr domain_;
  SpacePtr codomain_;
  std::vector<Mat> levels_;
  CoherenceReport report_;
};

// Residuals of both coherence conditions without throwing. Shapes must already match.
CoherenceReport coherence_residuals(const LocallyHilbertSpace& domain,
                                    const LocallyHilbertSpace& codomain,
                                    const std::vector<Mat>& levels);

// Validating constructor; throws on any coherence violation.
LocallyBoundedOperator check_locally_bounded(const SpacePtr& domain, const SpacePtr& codomain,
                                             std::vector<Mat> levels, Tolerance tol = {});

// T ∘ S (S applied first).
LocallyBoundedOperator compose(const LocallyBoundedOperator& t, const LocallyBoundedOperator& s);
LocallyBoundedOperator adjoint(const LocallyBoundedOperator& t);
LocallyBoundedOperator add(const LocallyBoundedOperator& t, const LocallyBoundedOperator& s);
LocallyBoundedOperator scale(cplx c, const LocallyBoundedOperator& t);

LocalVector apply(const LocallyBoundedOperator& t, const LocalVector& v);

// q_μ(T) = ‖T_μ‖.
double seminorm(const LocallyBoundedOperator& t, std::size_t mu);
double seminorm(const LocallyBoundedOperator& t, std::string_view mu);

bool is_locally_selfadjoint(const LocallyBoundedOperator& t, Tolerance tol = {});
bool is_locally_positive(const LocallyBoundedOperator& t, Tolerance tol = {});
bool is_locally_unitary(const LocallyBoundedOperator& t, Tolerance tol = {});

// Levelwise positive square root R with T = R* R. Requires T locally positive.
LocallyBoundedOperator positive_root(const LocallyBoundedOperator& t, Tolerance tol = {});

// Kronecker net T_λ ⊗ S_α on the product poset.
LocallyBoundedOperator tensor_op(const LocallyBoundedOperator& t, const LocallyBoundedOperator& s);
// Same, reusing already-built tensor spaces.
LocallyBoundedOperator tensor_op(const LocallyBoundedOperator& t, const LocallyBoundedOperator& s,
                                 const SpacePtr& domain, const SpacePtr& codomain);

// max over levels of the entrywise distance; operators must share shapes.
double distance(const LocallyBoundedOperator& t, const LocallyBoundedOperator& s);

// Frobenius-orthonormal basis of top-level matrices of all locally bounded
// operators domain -> codomain. Matrix units grouped by level membership for
// coordinate spaces, a null-space basis otherwise.
std::vector<Mat> coherent_operator_basis(const LocallyHilbertSpace& domain,
                                         const LocallyHilbertSpace& codomain);

}  // namespace prostar
