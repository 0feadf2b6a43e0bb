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

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prostar/linalg.hpp"
#include "prostar/localg.hpp"
#include "prostar/lochilbert.hpp"
#include "prostar/locop.hpp"

namespace prostar {

/// A kernel k : X × X -> B_loc(H) on a finite ordered point set.
class OperatorKernel {
 public:
  // `values` is the full m x m table in row-major order: values[i * m + j] = k(x_i, x_j).
  OperatorKernel(std::vector<std::string> points, SpacePtr space,
                 std::vector<LocallyBoundedOperator> values);

  static OperatorKernel from_function(
      std::vector<std::string> points, SpacePtr space,
      const std::function<LocallyBoundedOperator(std::size_t, std::size_t)>& k);

  std::size_t size() const { return points_.size(); }
  const std::vector<std::string>& points() const { return points_; }
  std::size_t point_index(std::string_view label) const;
  const SpacePtr& space() const { return space_; }
  const DirectedPoset& poset() const { return space_->poset(); }
  const LocallyBoundedOperator& operator()(std::size_t i, std::size_t j) const {
    return values_[i * size() + j];
  }

  // Block Gram matrix at a level: block (i, j) = k_λ(x_i, x_j).
  Mat gram(std::size_t level) const;

 private:
  std::vector<std::string> points_;
  SpacePtr space_;
  std::vector<LocallyBoundedOperator> values_;
};

bool is_hermitian(const OperatorKernel& k, Tolerance tol = {});

// Every n-tuple (repetitions allowed) gives a PSD block Gram, at every level.
bool is_n_positive(const OperatorKernel& k, std::size_t n, Tolerance tol = {});
bool is_positive_semidefinite(const OperatorKernel& k, Tolerance tol = {});

/// A finite *-semigroup given by its multiplication and involution tables.
class StarSemigroup {
 public:
  // mult[s][t] = index of s t; star[s] = index of s*.
  StarSemigroup(std::vector<std::string> elements, std::vector<std::vector<std::size_t>> mult,
                std::vector<std::size_t> star, std::optional<std::size_t> unit = std::nullopt);

  static StarSemigroup trivial();
  // Z/n with g* = g^{-1}; element i is g^i.
  static StarSemigroup cyclic(std::size_t n);
  // Z/2 × Z/2; element 2a + b is (a, b).
  static StarSemigroup klein_four();

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& elements() const { return labels_; }
  const std::string& label(std::size_t s) const { return labels_.at(s); }
  std::size_t index_of(std::string_view label) const;
  std::size_t mult(std::size_t s, std::size_t t) const { return mult_[s][t]; }
  std::size_t star(std::size_t s) const { return star_[s]; }
  const std::optional<std::size_t>& unit() const { return unit_; }
  // Every s has s s* = s* s = unit.
  bool is_group() const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<std::size_t>> mult_;
  std::vector<std::size_t> star_;
  std::optional<std::size_t> unit_;
};

/// Left action S × X -> X with (st)·x = s·(t·x).
class SemigroupAction {
 public:
  // table[s][x] = index of s·x.
  SemigroupAction(StarSemigroup semigroup, std::size_t points,
                  std::vector<std::vector<std::size_t>> table);

  const StarSemigroup& semigroup() const { return semigroup_; }
  std::size_t points() const { return points_; }
  std::size_t apply(std::size_t s, std::size_t x) const { return table_[s][x]; }
  // m x m matrix sending e_x to e_{s·x}.
  Mat matrix(std::size_t s) const;

 private:
  StarSemigroup semigroup_;
  std::size_t points_;
  std::vector<std::vector<std::size_t>> table_;
};

// Worst ‖k_λ(s·x, y) − k_λ(x, s*·y)‖ over all (s, x, y, λ).
double invariance_residual(const OperatorKernel& k, const SemigroupAction& action);
bool is_invariant(const OperatorKernel& k, const SemigroupAction& action, Tolerance tol = {});

/// Least c with G^s_λ ≼ c G_λ, or +inf with a witness vector h satisfying
/// h* G_λ h = 0 < h* G^s_λ h.
struct BoundCertificate {
  double value = 0.0;
  Vec witness;

  bool finite() const { return value < std::numeric_limits<double>::infinity(); }
};

// Linear form: the shifted Gram is (A ⊗ I)* G_λ (A ⊗ I) where column x of
// `action` holds the coefficients of s·x over the points.
BoundCertificate sznagy_bound(const OperatorKernel& k, const Mat& action, std::size_t level,
                              Tolerance tol = {});
BoundCertificate sznagy_bound(const OperatorKernel& k, const SemigroupAction& action,
                              std::size_t s, std::size_t level, Tolerance tol = {});

// Worst ‖(A_s ⊗ I)* G_λ − G_λ (A_{s*} ⊗ I)‖ over levels: invariance for a
// linear action.
double linear_invariance_residual(const OperatorKernel& k, const Mat& action,
                                  const Mat& star_action);

/// A linear map φ : A -> B_loc(H) given by its values on the algebra basis.
struct CpMap {
  SpacePtr target;
  std::vector<LocallyBoundedOperator> images;  // φ(b_i)
};

LocallyBoundedOperator apply_map(const CpMap& phi, const Vec& a);

// φ from a Kraus family: a ↦ Σ C_i* a C_i with C_i : target -> carrier.
CpMap kraus_map(const ConcreteLocallyCStarAlgebra& a, const SpacePtr& target,
                const std::vector<LocallyBoundedOperator>& kraus);

struct CpKernel {
  OperatorKernel kernel;
  // Left multiplication by each algebra basis element on span(X): column j
  // holds coefficients of b_i x_j over the points.
  std::vector<Mat> left_action;
  // Set-theoretic left-regular action when X is closed under products and
  // adjoints; empty otherwise.
  std::optional<SemigroupAction> stable_action;
};

// k(a, b) = φ(a* b) on X = points (coefficient vectors over A's basis).
// Throws PointsNotSpanning for empty or malformed X, ProductOutsideSpan when
// `require_action` is set and some b_i x_j leaves span(X).
CpKernel kernel_from_cp_map(const ConcreteLocallyCStarAlgebra& a, const CpMap& phi,
                            const std::vector<Vec>& points,
                            const std::vector<std::string>& labels, bool require_action = false);

}  // namespace prostar
