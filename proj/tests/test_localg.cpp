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


#include <doctest.h>

#include <cmath>

#include "prostar/error.hpp"
#include "prostar/localg.hpp"
#include "support/oracles.hpp"

using namespace prostar;
using namespace prostar::testing;

namespace {

SpacePtr single(int d) { return make_space(singleton_poset(), {{"a", d}}); }

Mat diag(std::initializer_list<cplx> v) {
  Mat m = Mat::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (cplx x : v) m(i, i) = x, ++i;
  return m;
}

}  // namespace

TEST_CASE("the identity generates a one-dimensional algebra") {
  const auto h = single(3);
  const auto a = make_algebra(h, {LocallyBoundedOperator::identity(h)});
  CHECK(a.dim() == 1);
  REQUIRE(a.unit().has_value());
  CHECK(algebra_seminorm(a, *a.unit(), "a") == doctest::Approx(1.0));
  CHECK(algebra_seminorm(a, 2.0 * *a.unit(), "a") == doctest::Approx(2.0));
  CHECK(bounded_norm(a, *a.unit()) == doctest::Approx(1.0));
}

TEST_CASE("matrix units of an equal-dimension chain generate the full matrix algebra") {
  const auto h = make_space(chain_poset(2), {{"c0", 3}, {"c1", 3}});
  std::vector<LocallyBoundedOperator> gens;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gens.push_back(LocallyBoundedOperator::from_top(h, h, matrix_unit(3, i, j)));
  const auto a = make_algebra(h, gens);
  CHECK(a.dim() == 9);
  CHECK(a.structure_residual() < 1e-12);
}

TEST_CASE("a nilpotent generates M_2") {
  const auto h = single(2);
  const auto a = make_algebra(h, {LocallyBoundedOperator::from_top(h, h, matrix_unit(2, 0, 1))});
  CHECK(a.dim() == 4);
  CHECK(a.unit().has_value());
  // Frobenius-orthonormal basis.
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      const cplx ip = (a.basis()[i].top().adjoint() * a.basis()[j].top()).trace();
      CHECK(std::abs(ip - cplx(i == j ? 1.0 : 0.0)) < 1e-12);
    }
  CHECK(error_code_of([&] { make_algebra(single(3), {LocallyBoundedOperator::identity(h)}); }) ==
        ErrorCode::ShapeMismatch);
}

TEST_CASE("bounded norm of a diagonal net") {
  const auto h = make_space(validate_poset({"a", "b"}, {{"a", "b"}}), {{"a", 1}, {"b", 2}});
  const auto t = LocallyBoundedOperator::from_top(h, h, diag({2.0, 3.0}));
  const auto a = make_algebra(h, {t});
  const Vec c = a.express(t);
  CHECK(bounded_norm(a, c) == doctest::Approx(3.0));
  CHECK(algebra_seminorm(a, c, "a") == doctest::Approx(2.0));
  CHECK(error_code_of([&] { a.express(matrix_unit(2, 0, 1)); }) == ErrorCode::NotInSpan);
}

TEST_CASE("morphism checks") {
  const auto h = single(2);
  const auto a = make_algebra(h, {LocallyBoundedOperator::from_top(h, h, matrix_unit(2, 0, 1))});

  const MorphismReport id = check_coherent_morphism(a, a, a.basis());
  CHECK(id.multiplicativity < 1e-12);
  CHECK(id.star < 1e-12);
  CHECK(id.all_faithful());

  // a ↦ a ⊕ a on the doubled space.
  const SpacePtr hh = amplified_space(*h, 2);
  std::vector<LocallyBoundedOperator> amp;
  for (const auto& b : a.basis())
    amp.push_back(LocallyBoundedOperator::from_top(hh, hh, kron(Mat::Identity(2, 2), b.top())));
  const auto b = make_algebra(hh, amp);
  const MorphismReport r = check_coherent_morphism(a, b, amp);
  CHECK(r.multiplicativity < 1e-12);
  CHECK(r.star < 1e-12);
  CHECK(r.coherence < 1e-12);
  CHECK(r.all_faithful());

  std::vector<LocallyBoundedOperator> zero(a.dim(), LocallyBoundedOperator::zero(hh, hh));
  const MorphismReport z = check_coherent_morphism(a, b, zero);
  CHECK(z.multiplicativity < 1e-12);
  CHECK(z.coherence < 1e-12);
  CHECK_FALSE(z.all_faithful());
}

TEST_CASE("Gelfand-Naimark representation of a single M_2") {
  const GelfandNaimarkRep rep = matrix_algebra_over_chain(2, 1);
  CHECK(rep.space->dims() == std::vector<int>{2});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(entry_max(rep.images[static_cast<std::size_t>(2 * i + j)].top() - matrix_unit(2, i, j)) < 1e-15);
  CHECK(rep.report.all_faithful());
}

TEST_CASE("Gelfand-Naimark representation of a two-level diagonal system") {
  MatrixProjectiveSystem sys{validate_poset({"a", "b"}, {{"a", "b"}}), {}, {}};
  sys.bases = {{Mat::Identity(1, 1)}, {matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)}};
  Mat first(1, 2);
  first << 1.0, 0.0;
  sys.connecting[{0, 1}] = first;
  const GelfandNaimarkRep rep = gelfand_naimark_rep(sys);
  CHECK(rep.space->dims() == std::vector<int>{1, 3});
  // π_b(x, y) = x ⊕ diag(x, y).
  const cplx x(0.3, 1.2), y(-2.0, 0.5);
  Vec c(2);
  c << x, y;
  Mat pb = Mat::Zero(3, 3);
  for (std::size_t i = 0; i < 2; ++i) pb += c(static_cast<Eigen::Index>(i)) * rep.images[i].top();
  CHECK(entry_max(pb - diag({x, x, y})) < 1e-15);
  Mat pa = Mat::Zero(1, 1);
  for (std::size_t i = 0; i < 2; ++i) pa += c(static_cast<Eigen::Index>(i)) * rep.images[i].level(0);
  CHECK(std::abs(pa(0, 0) - x) < 1e-15);
  CHECK(rep.report.multiplicativity < 1e-12);
  CHECK(rep.report.star < 1e-12);
  CHECK(rep.report.all_faithful());
}

TEST_CASE("invalid projective systems") {
  MatrixProjectiveSystem sys{validate_poset({"a", "b"}, {{"a", "b"}}), {}, {}};
  sys.bases = {{Mat::Identity(1, 1)}, {matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)}};
  CHECK(error_code_of([&] { gelfand_naimark_rep(sys); }) == ErrorCode::InvalidSystem);
  Mat twice(1, 2);
  twice << 2.0, 0.0;  // not multiplicative
  sys.connecting[{0, 1}] = twice;
  CHECK(error_code_of([&] { gelfand_naimark_rep(sys); }) == ErrorCode::InvalidSystem);
}

TEST_CASE("spatial tensor products") {
  const auto h = single(2);
  const auto m2 = make_algebra(h, {LocallyBoundedOperator::from_top(h, h, matrix_unit(2, 0, 1))});
  const auto g = single(3);
  const auto scalars = make_algebra(g, {LocallyBoundedOperator::identity(g)});
  CHECK(spatial_tensor(scalars, m2).dim() == m2.dim());
  CHECK(spatial_tensor(m2, m2).dim() == 16);
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec x = rng.gaussian_vector(4);
    const Vec y = rng.gaussian_vector(4);
    CHECK(cross_seminorm_residual(m2, m2, x, y) < 1e-9 * (1.0 + x.norm() * y.norm()));
  }
}

TEST_CASE("property: seminorm laws and structure constants on matrix algebras over chains") {
  Rng rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.integer(1, 3);
    const std::size_t levels = static_cast<std::size_t>(rng.integer(1, 3));
    const GelfandNaimarkRep rep = matrix_algebra_over_chain(n, levels);
    const auto& a = rep.algebra;
    CHECK(rep.report.all_faithful());
    CHECK(a.dim() == static_cast<std::size_t>(n * n));
    CHECK(a.structure_residual() < 1e-10);
    const Vec x = rng.gaussian_vector(static_cast<Eigen::Index>(a.dim()));
    const Vec y = rng.gaussian_vector(static_cast<Eigen::Index>(a.dim()));
    // Products computed from structure constants match matrix products.
    CHECK(entry_max(algebra_top(a, a.multiply(x, y)) - algebra_top(a, x) * algebra_top(a, y)) < 1e-10);
    CHECK(entry_max(algebra_top(a, a.adjoint(x)) - algebra_top(a, x).adjoint()) < 1e-12);
    for (std::size_t l = 0; l < levels; ++l) {
      const double px = algebra_seminorm(a, x, l);
      CHECK(px == doctest::Approx(op_norm(a.element_at(x, l))).epsilon(1e-10));
      CHECK(std::abs(algebra_seminorm(a, a.multiply(a.adjoint(x), x), l) - px * px) <= 1e-8 * (1 + px * px));
      CHECK(std::abs(algebra_seminorm(a, a.adjoint(x), l) - px) <= 1e-8 * (1 + px));
      CHECK(algebra_seminorm(a, a.multiply(x, y), l) <= px * algebra_seminorm(a, y, l) * (1 + 1e-8) + 1e-12);
    }
  }
}
