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
#include "prostar/lochilbert.hpp"
#include "support/oracles.hpp"

using namespace prostar;
using namespace prostar::testing;

TEST_CASE("coordinate chain space") {
  const auto h = make_space(validate_poset({"a", "b"}, {{"a", "b"}}), {{"a", 1}, {"b", 2}});
  CHECK(h->dims() == std::vector<int>{1, 2});
  CHECK(h->is_coordinate());
  CHECK(h->embedding(1, 0).isApprox(Mat::Identity(2, 1)));
}

TEST_CASE("non-monotone dims are rejected") {
  const DirectedPoset p = validate_poset({"a", "b"}, {{"a", "b"}});
  CHECK(error_code_of([&] { make_space(p, {{"a", 2}, {"b", 1}}); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("diamond coordinate space embeds by leading columns") {
  const auto h = make_space(diamond_poset(), {{"a", 1}, {"b", 2}, {"c", 2}, {"d", 3}});
  const Mat jdb = h->embedding(3, 1);
  Mat expect = Mat::Zero(3, 2);
  expect(0, 0) = 1.0;
  expect(1, 1) = 1.0;
  CHECK(entry_max(jdb - expect) == 0.0);
  for (std::size_t l = 0; l < 4; ++l) {
    const Mat& j = h->embedding(l);
    CHECK(entry_max(j.adjoint() * j - Mat::Identity(j.cols(), j.cols())) < 1e-15);
  }
  CHECK(h->transitivity_residual() < 1e-15);
}

TEST_CASE("explicit embeddings must be isometric and nested") {
  const DirectedPoset p = validate_poset({"a", "b"}, {{"a", "b"}});
  Mat bad(2, 1);
  bad << 2.0, 0.0;
  CHECK(error_code_of([&] {
          LocallyHilbertSpace::from_embeddings(p, {bad, Mat::Identity(2, 2)});
        }) == ErrorCode::NotIsometric);
}

TEST_CASE("inner product examples") {
  const auto h = make_space(validate_poset({"a", "b"}, {{"a", "b"}}), {{"a", 1}, {"b", 2}});
  Vec e1(1);
  e1 << 1.0;
  Vec e1b(2), e2b(2);
  e1b << 1.0, 0.0;
  e2b << 0.0, 1.0;
  CHECK(std::abs(inner_product(*h, {0, e1}, {0, e1}) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(inner_product(*h, {1, e1b}, {1, e1b}) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(inner_product(*h, {0, e1}, {1, e2b})) < 1e-15);
  Vec u(2), v(2);
  u << 1.0, cplx(0, 1);
  v << 1.0, cplx(0, -1);
  u /= std::sqrt(2.0);
  v /= std::sqrt(2.0);
  CHECK(std::abs(inner_product(*h, {1, u}, {1, v})) < 1e-15);
}

TEST_CASE("tensor spaces") {
  const auto a = make_space(singleton_poset(), {{"a", 2}});
  const auto b = make_space(singleton_poset(), {{"a", 3}});
  CHECK(tensor_space(*a, *b)->dims() == std::vector<int>{6});

  const DirectedPoset c2 = chain_poset(2);
  const auto h = make_space(c2, {{"c0", 1}, {"c1", 2}});
  const auto t = tensor_space(*h, *h);
  CHECK(t->dims() == std::vector<int>{1, 2, 2, 4});
  CHECK(maximum(t->poset()) == product_label("c1", "c1"));
  CHECK(t->transitivity_residual() < 1e-15);
}

TEST_CASE("property: random spaces are transitive and inner products are sane") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const DirectedPoset p = random_poset(rng);
    const TestSpace t = random_space(rng, p, 4);
    const LocallyHilbertSpace& h = *t.space;
    CHECK(h.transitivity_residual() < 1e-12);
    for (std::size_t l = 0; l < h.levels(); ++l) {
      const Mat& j = h.embedding(l);
      CHECK(entry_max(j.adjoint() * j - Mat::Identity(j.cols(), j.cols())) < 1e-12);
    }
    for (std::size_t l = 0; l < h.levels(); ++l)
      for (std::size_t m = 0; m < h.levels(); ++m) {
        const LocalVector u{l, rng.gaussian_vector(h.dim(l))};
        const LocalVector v{m, rng.gaussian_vector(h.dim(m))};
        const cplx uv = inner_product(h, u, v);
        CHECK(std::abs(uv - std::conj(inner_product(h, v, u))) < 1e-12);
        CHECK(inner_product(h, u, u).real() >= 0.0);
        // Independent of the common upper level used.
        for (std::size_t w = 0; w < h.levels(); ++w)
          if (p.leq(l, w) && p.leq(m, w)) CHECK(std::abs(inner_product_at(h, u, v, w) - uv) < 1e-12);
        // Oracle: ambient vectors.
        const Vec ua = h.embedding(l) * u.coords;
        const Vec va = h.embedding(m) * v.coords;
        CHECK(std::abs(uv - va.dot(ua)) < 1e-12);
      }
  }
}

TEST_CASE("property: tensor spaces multiply dims and stay isometric") {
  Rng rng(22);
  for (int trial = 0; trial < 40; ++trial) {
    const TestSpace a = random_space(rng, random_poset(rng), 3);
    const TestSpace b = random_space(rng, chain_poset(static_cast<std::size_t>(rng.integer(1, 2))), 2);
    const auto t = tensor_space(*a.space, *b.space);
    for (std::size_t i = 0; i < a.space->levels(); ++i)
      for (std::size_t j = 0; j < b.space->levels(); ++j)
        CHECK(t->dim(i * b.space->levels() + j) == a.space->dim(i) * b.space->dim(j));
    CHECK(t->transitivity_residual() < 1e-12);
  }
}
