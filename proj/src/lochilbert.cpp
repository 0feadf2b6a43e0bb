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

#include "prostar/lochilbert.hpp"

#include "prostar/error.hpp"

namespace prostar {

LocallyHilbertSpace LocallyHilbertSpace::coordinate(DirectedPoset poset, std::vector<int> dims,
                                                    Tolerance tol) {
  if (dims.size() != poset.size())
    throw Error(ErrorCode::DimensionMismatch, "one dimension per poset element required");
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (dims[i] < 0)
      throw Error(ErrorCode::DimensionMismatch, "negative dimension", {poset.label(i)});
  const int top = dims[poset.top()];
  for (auto [l, m] : poset.strict_pairs())
    if (dims[l] > dims[m])
      throw Error(ErrorCode::DimensionMismatch,
                  "dim(" + poset.label(l) + ") exceeds dim(" + poset.label(m) + ")",
                  {poset.label(l), poset.label(m)});
  std::vector<Mat> iso;
  iso.reserve(dims.size());
  for (int d : dims) iso.push_back(Mat::Identity(top, d));
  LocallyHilbertSpace s(std::move(poset), std::move(iso));
  s.validate(tol);
  return s;
}

LocallyHilbertSpace LocallyHilbertSpace::from_embeddings(DirectedPoset poset,
                                                         std::vector<Mat> isometries,
                                                         Tolerance tol) {
  if (isometries.size() != poset.size())
    throw Error(ErrorCode::DimensionMismatch, "one embedding per poset element required");
  const Eigen::Index top = isometries[poset.top()].cols();
  for (std::size_t i = 0; i < isometries.size(); ++i)
    if (isometries[i].rows() != top)
      throw Error(ErrorCode::DimensionMismatch,
                  "embedding rows must equal the ambient dimension", {poset.label(i)});
  for (auto [l, m] : poset.strict_pairs())
    if (isometries[l].cols() > isometries[m].cols())
      throw Error(ErrorCode::DimensionMismatch,
                  "dim(" + poset.label(l) + ") exceeds dim(" + poset.label(m) + ")",
                  {poset.label(l), poset.label(m)});
  LocallyHilbertSpace s(std::move(poset), std::move(isometries));
  s.validate(tol);
  return s;
}

void LocallyHilbertSpace::validate(Tolerance tol) const {
  const std::size_t top = poset_.top();
  for (std::size_t i = 0; i < levels(); ++i) {
    const Mat& j = isometries_[i];
    const double res = max_abs(j.adjoint() * j - Mat::Identity(j.cols(), j.cols()));
    if (res > tol.of(max_abs(j)))
      throw Error(ErrorCode::NotIsometric, "J_" + poset_.label(i) + " is not isometric",
                  {poset_.label(i)}, res);
  }
  {
    const Mat& j = isometries_[top];
    const double res = max_abs(j - Mat::Identity(j.rows(), j.cols()));
    if (res > tol.of(1.0))
      throw Error(ErrorCode::NotIsometric, "embedding of the maximum element must be identity",
                  {poset_.label(top)}, res);
  }
  for (auto [l, m] : poset_.strict_pairs()) {
    const Mat& jl = isometries_[l];
    const Mat& jm = isometries_[m];
    const double res = max_abs(jl - jm * (jm.adjoint() * jl));
    if (res > tol.of(1.0))
      throw Error(ErrorCode::NotNested,
                  "range of J_" + poset_.label(l) + " is not inside range of J_" + poset_.label(m),
                  {poset_.label(l), poset_.label(m)}, res);
  }
}

std::vector<int> LocallyHilbertSpace::dims() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < levels(); ++i) out.push_back(dim(i));
  return out;
}

Mat LocallyHilbertSpace::embedding(std::size_t mu, std::size_t lambda) const {
  return isometries_[mu].adjoint() * isometries_[lambda];
}

Mat LocallyHilbertSpace::projection(std::size_t lambda, std::size_t mu) const {
  const Mat j = embedding(mu, lambda);
  return j * j.adjoint();
}

bool LocallyHilbertSpace::is_coordinate() const {
  for (std::size_t i = 0; i < levels(); ++i) {
    const Mat& j = isometries_[i];
    if (max_abs(j - Mat::Identity(j.rows(), j.cols())) > 1e-12) return false;
  }
  return true;
}

double LocallyHilbertSpace::transitivity_residual() const {
  double worst = 0.0;
  const std::size_t n = levels();
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t v = 0; v < n; ++v)
        if (poset_.leq(l, m) && poset_.leq(m, v))
          worst = std::max(worst, max_abs(embedding(v, l) - embedding(v, m) * embedding(m, l)));
  return worst;
}

SpacePtr make_space(const DirectedPoset& poset, const std::map<std::string, int>& dims,
                    const std::map<std::string, Mat>& embeddings, Tolerance tol) {
  std::vector<int> d(poset.size(), -1);
  for (const auto& [label, value] : dims) d[poset.index_of(label)] = value;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] < 0)
      throw Error(ErrorCode::DimensionMismatch, "missing dimension", {poset.label(i)});
  if (embeddings.empty())
    return std::make_shared<const LocallyHilbertSpace>(
        LocallyHilbertSpace::coordinate(poset, std::move(d), tol));

  std::vector<Mat> iso(poset.size());
  std::vector<bool> given(poset.size(), false);
  for (const auto& [label, m] : embeddings) {
    const std::size_t i = poset.index_of(label);
    iso[i] = m;
    given[i] = true;
  }
  for (std::size_t i = 0; i < iso.size(); ++i) {
    if (!given[i])
      throw Error(ErrorCode::DimensionMismatch, "missing embedding", {poset.label(i)});
    if (iso[i].cols() != d[i])
      throw Error(ErrorCode::DimensionMismatch, "embedding width differs from dimension",
                  {poset.label(i)});
  }
  return std::make_shared<const LocallyHilbertSpace>(
      LocallyHilbertSpace::from_embeddings(poset, std::move(iso), tol));
}

bool same_space(const LocallyHilbertSpace& a, const LocallyHilbertSpace& b, Tolerance tol) {
  if (&a == &b) return true;
  if (!(a.poset() == b.poset()) || a.dims() != b.dims()) return false;
  for (std::size_t i = 0; i < a.levels(); ++i)
    if (max_abs(a.embedding(i) - b.embedding(i)) > tol.of(1.0)) return false;
  return true;
}

bool same_space(const SpacePtr& a, const SpacePtr& b, Tolerance tol) {
  return a == b || same_space(*a, *b, tol);
}

Vec embed(const LocallyHilbertSpace& space, const LocalVector& v, std::size_t target) {
  if (v.coords.size() != space.dim(v.level))
    throw Error(ErrorCode::ShapeMismatch, "vector length differs from level dimension",
                {space.poset().label(v.level)});
  if (!space.poset().leq(v.level, target))
    throw Error(ErrorCode::ShapeMismatch, "target level is not above the vector's level",
                {space.poset().label(v.level), space.poset().label(target)});
  return space.embedding(target, v.level) * v.coords;
}

cplx inner_product_at(const LocallyHilbertSpace& space, const LocalVector& u,
                      const LocalVector& v, std::size_t level) {
  const Vec a = embed(space, u, level);
  const Vec b = embed(space, v, level);
  return b.dot(a);  // conjugates b
}

cplx inner_product(const LocallyHilbertSpace& space, const LocalVector& u, const LocalVector& v) {
  return inner_product_at(space, u, v, space.poset().upper_bound(u.level, v.level));
}

SpacePtr tensor_space(const LocallyHilbertSpace& h, const LocallyHilbertSpace& k) {
  DirectedPoset poset = product_poset(h.poset(), k.poset());
  std::vector<Mat> iso;
  iso.reserve(poset.size());
  for (std::size_t i = 0; i < h.levels(); ++i)
    for (std::size_t j = 0; j < k.levels(); ++j)
      iso.push_back(kron(h.embedding(i), k.embedding(j)));
  return std::make_shared<const LocallyHilbertSpace>(
      LocallyHilbertSpace::from_embeddings(std::move(poset), std::move(iso)));
}

}  // namespace prostar
