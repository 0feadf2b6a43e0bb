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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "prostar/linalg.hpp"
#include "prostar/poset.hpp"

namespace prostar {

/// A strictly inductive system of finite-dimensional Hilbert spaces {H_λ}
/// over a finite directed poset. Every level is stored as an isometry J_λ
/// into the ambient space H_top at the maximum element; the connecting maps
/// J_{μ,λ} = J_μ* J_λ are derived on demand.
class LocallyHilbertSpace {
 public:
  // H_λ = span of the first d_λ standard basis vectors of H_top.
  static LocallyHilbertSpace coordinate(DirectedPoset poset, std::vector<int> dims,
                                        Tolerance tol = {});

  // Explicit ambient isometries, one per element in poset order. The entry
  // for the maximum element must be the identity.
  static LocallyHilbertSpace from_embeddings(DirectedPoset poset, std::vector<Mat> isometries,
                                             Tolerance tol = {});

  const DirectedPoset& poset() const { return poset_; }
  std::size_t levels() const { return poset_.size(); }
  int dim(std::size_t level) const { return static_cast<int>(isometries_[level].cols()); }
  int ambient_dim() const { return dim(poset_.top()); }
  std::vector<int> dims() const;

  // J_λ : H_λ -> H_top.
  const Mat& embedding(std::size_t level) const { return isometries_[level]; }
  // J_{μ,λ} : H_λ -> H_μ for λ ≤ μ.
  Mat embedding(std::size_t mu, std::size_t lambda) const;
  // Orthogonal projection of H_μ onto the copy of H_λ.
  Mat projection(std::size_t lambda, std::size_t mu) const;

  // True when every J_λ selects a prefix of the standard basis.
  bool is_coordinate() const;

  // max over λ ≤ μ ≤ ν of ‖J_{ν,λ} − J_{ν,μ} J_{μ,λ}‖.
  double transitivity_residual() const;

 private:
  LocallyHilbertSpace(DirectedPoset poset, std::vector<Mat> isometries)
      : poset_(std::move(poset)), isometries_(std::move(isometries)) {}
  void validate(Tolerance tol) const;

  DirectedPoset poset_;
  std::vector<Mat> isometries_;
};

using SpacePtr = std::shared_ptr<const LocallyHilbertSpace>;

// Spec-level constructor: dims keyed by label; `embeddings` empty means the
// coordinate model, otherwise one matrix per label.
SpacePtr make_space(const DirectedPoset& poset, const std::map<std::string, int>& dims,
                    const std::map<std::string, Mat>& embeddings = {}, Tolerance tol = {});

// Structural equality: same poset, dims and ambient embeddings within tol.
bool same_space(const LocallyHilbertSpace& a, const LocallyHilbertSpace& b, Tolerance tol = {});
bool same_space(const SpacePtr& a, const SpacePtr& b, Tolerance tol = {});

/// A vector living in a chosen level H_λ.
struct LocalVector {
  std::size_t level = 0;
  Vec coords;
};

// Image of v in H_target; requires v.level ≤ target.
Vec embed(const LocallyHilbertSpace& space, const LocalVector& v, std::size_t target);

// Canonical inner product ⟨u, v⟩, linear in u and conjugate-linear in v,
// evaluated at the first common upper bound of the two levels.
cplx inner_product(const LocallyHilbertSpace& space, const LocalVector& u, const LocalVector& v);

// Same, evaluated at an explicitly chosen common upper level.
cplx inner_product_at(const LocallyHilbertSpace& space, const LocalVector& u,
                      const LocalVector& v, std::size_t level);

// H ⊗ K over the product poset, embeddings J^H_λ ⊗ J^K_α.
SpacePtr tensor_space(const LocallyHilbertSpace& h, const LocallyHilbertSpace& k);

}  // namespace prostar
