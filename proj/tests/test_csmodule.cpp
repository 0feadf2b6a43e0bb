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

#include "prostar/csmodule.hpp"
#include "prostar/error.hpp"
#include "support/oracles.hpp"

using namespace prostar;
using namespace prostar::testing;

namespace {

ConcreteLocallyCStarAlgebra scalars(const SpacePtr& h) {
  return make_algebra(h, {LocallyBoundedOperator::identity(h)});
}

// C^n over C with gramian given by a scalar matrix.
AbstractHilbertModule scalar_module(const Mat& gram) {
  AbstractHilbertModule m;
  m.algebra = scalars(singleton_space(1));
  const double unit = std::abs(m.algebra.basis()[0].top()(0, 0));
  for (Eigen::Index i = 0; i < gram.rows(); ++i) m.generators.push_back("e" + std::to_string(i + 1));
  m.gramian.assign(static_cast<std::size_t>(gram.rows()), std::vector<Vec>(static_cast<std::size_t>(gram.rows())));
  for (Eigen::Index i = 0; i < gram.rows(); ++i)
    for (Eigen::Index j = 0; j < gram.rows(); ++j)
      m.gramian[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Vec::Constant(1, gram(i, j) / unit);
  return m;
}

// C^n as column vectors C -> C^n over the scalars.
ConcreteHilbertModule column_module(int n) {
  const SpacePtr h = singleton_space(1);
  const SpacePtr k = singleton_space(n);
  std::vector<LocallyBoundedOperator> cols;
  for (int i = 0; i < n; ++i)
    cols.push_back(LocallyBoundedOperator::from_top(h, k, Mat::Identity(n, n).col(i)));
  return ConcreteHilbertModule(scalars(h), k, cols);
}

ConcreteHilbertModule self_module(const GelfandNaimarkRep& rep) {
  return ConcreteHilbertModule(rep.algebra, rep.space, rep.algebra.basis());
}

}  // namespace

TEST_CASE("an algebra is a module over itself") {
  const GelfandNaimarkRep rep = matrix_algebra_over_chain(2, 1);
  const ConcreteHilbertModule e = self_module(rep);
  const AbstractHilbertModule m = e.abstract();
  const ModuleReport r = check_module(m);
  CHECK(r.hermitian_residual < 1e-12);
  CHECK(r.compatibility_residual < 1e-10);
  CHECK(r.definite);
  CHECK(r.undefined_actions.empty());

  const OperatorModel om = operator_model(m);
  CHECK(om.gramian_residual < 1e-8);
  CHECK(om.action_residual < 1e-8);
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = 0; j < e.size(); ++j) {
      const Mat lhs = om.phi[i].top().adjoint() * om.phi[j].top();
      const Mat rhs = e.elements()[i].top().adjoint() * e.elements()[j].top();
      CHECK(entry_max(lhs - rhs) < 1e-8);
    }
}

TEST_CASE("scalar module examples") {
  Mat bad(2, 2);
  bad << 1.0, 0.0, 0.0, -1.0;
  CHECK(error_code_of([&] { check_module(scalar_module(bad)); }) == ErrorCode::GramianNotPositive);
  Mat skew(2, 2);
  skew << 1.0, 1.0, 0.0, 1.0;
  CHECK(error_code_of([&] { check_module(scalar_module(skew)); }) == ErrorCode::GramianNotHermitian);

  const ModuleReport std2 = check_module(scalar_module(Mat::Identity(2, 2)));
  CHECK(std2.definite);

  const AbstractHilbertModule one = scalar_module(Mat::Identity(1, 1));
  const OperatorModel om = operator_model(one);
  CHECK(om.decomposition.dilation_space->ambient_dim() == 1);
  CHECK(std::abs(om.phi[0].top()(0, 0)) == doctest::Approx(1.0));

  const AbstractHilbertModule deficient = scalar_module(Mat::Ones(2, 2));
  CHECK_FALSE(check_module(deficient).definite);
  const OperatorModel od = operator_model(deficient);
  CHECK(od.decomposition.dilation_space->ambient_dim() == 1);
  CHECK(entry_max(od.phi[0].top() - od.phi[1].top()) < 1e-12);
  CHECK(od.gram_rank == 1);
}

TEST_CASE("incompatible action tables are rejected") {
  AbstractHilbertModule m = scalar_module(Mat::Identity(2, 2));
  Vec two = Vec::Constant(1, 2.0 / std::abs(m.algebra.basis()[0].top()(0, 0)));
  Vec result(2);
  result << 1.0, 0.0;  // claims e1 · 2 = e1
  m.action.push_back({0, two, result});
  CHECK(error_code_of([&] { check_module(m); }) == ErrorCode::ActionIncompatible);
}

TEST_CASE("module seminorms") {
  const AbstractHilbertModule one = scalar_module(Mat::Identity(1, 1));
  Vec e(1);
  e << 1.0;
  CHECK(module_seminorm(one, e, "a") == doctest::Approx(1.0));
  CHECK(module_seminorm(one, Vec(2.0 * e), "a") == doctest::Approx(2.0));

  const GelfandNaimarkRep rep = matrix_algebra_over_chain(2, 1);
  const ConcreteHilbertModule self = self_module(rep);
  const AbstractHilbertModule m = self.abstract();
  Rng rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec c = rng.gaussian_vector(4);
    CHECK(module_seminorm(m, c, "c0") == doctest::Approx(op_norm(algebra_top(rep.algebra, c))).epsilon(1e-10));
  }
}

TEST_CASE("concrete module construction errors") {
  const SpacePtr h = singleton_space(2);
  const auto corner = make_algebra(h, {LocallyBoundedOperator::from_top(h, h, matrix_unit(2, 0, 0))});
  const auto t = LocallyBoundedOperator::identity(h);
  CHECK(error_code_of([&] { ConcreteHilbertModule(corner, h, {t}); }) == ErrorCode::GramianOutsideAlgebra);
  const GelfandNaimarkRep rep = matrix_algebra_over_chain(2, 1);
  const auto e11 = LocallyBoundedOperator::from_top(rep.space, rep.space, matrix_unit(2, 0, 0));
  // span{E11} is not closed under right multiplication by M_2.
  CHECK(error_code_of([&] { ConcreteHilbertModule(rep.algebra, rep.space, {e11}); }) == ErrorCode::NotAModule);
}

TEST_CASE("exterior tensor of scalar modules") {
  const ConcreteHilbertModule c = column_module(1);
  const ExteriorTensor t = exterior_tensor(c, c);
  CHECK(t.module.size() == 1);
  CHECK(std::abs(t.module.elements()[0].top()(0, 0)) == doctest::Approx(1.0));
  CHECK(t.gramian_residual < 1e-12);
}

TEST_CASE("exterior tensor gramian is the Kronecker product of gramians") {
  const GelfandNaimarkRep rep = matrix_algebra_over_chain(2, 1);
  const ConcreteHilbertModule e = self_module(rep);
  const ConcreteHilbertModule f = column_module(2);
  const ExteriorTensor t = exterior_tensor(e, f);
  REQUIRE(t.module.size() == e.size() * f.size());
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = 0; j < f.size(); ++j)
      for (std::size_t k = 0; k < e.size(); ++k)
        for (std::size_t l = 0; l < f.size(); ++l) {
          const Mat& ef = t.module.elements()[i * f.size() + j].top();
          const Mat& ef2 = t.module.elements()[k * f.size() + l].top();
          const Mat expect = kron(e.elements()[i].top().adjoint() * e.elements()[k].top(),
                                  f.elements()[j].top().adjoint() * f.elements()[l].top());
          CHECK(entry_max(ef.adjoint() * ef2 - expect) < 1e-10);
        }
  // (e ⊗ f)(a ⊗ b) = (ea) ⊗ (fb) on random samples.
  Rng rng(72);
  const auto& a = rep.algebra;
  const auto scal = f.algebra();
  for (int trial = 0; trial < 10; ++trial) {
    const auto ea = e.elements()[static_cast<std::size_t>(rng.integer(0, 3))];
    const auto fb = f.elements()[static_cast<std::size_t>(rng.integer(0, 1))];
    const auto x = a.element(rng.gaussian_vector(4));
    const auto y = scal.element(rng.gaussian_vector(1));
    CHECK(right_action_residual(ea, fb, x, y) < 1e-10);
    const Mat lhs = kron(ea.top(), fb.top()) * kron(x.top(), y.top());
    const Mat rhs = kron(ea.top() * x.top(), fb.top() * y.top());
    CHECK(entry_max(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("property: operator models of random modules") {
  Rng rng(73);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.integer(1, 2);
    const ModuleCase mc = random_module_case(rng, n, static_cast<std::size_t>(rng.integer(1, 2)), rng.integer(1, 2));
    const ConcreteHilbertModule e(mc.rep.algebra, mc.codomain, mc.elements);
    const AbstractHilbertModule m = e.abstract();
    const ModuleReport r = check_module(m);
    const OperatorModel om = operator_model(m);
    CHECK(om.gramian_residual <= 1e-8 * (1.0 + entry_max(m.gram(m.algebra.poset().top()))));
    CHECK(om.action_residual <= 1e-8 * (1.0 + entry_max(m.gram(m.algebra.poset().top()))));
    for (const auto& p : om.phi) CHECK(p.coherence().worst() < 1e-8);
    if (r.definite) CHECK(om.gram_rank == om.image_rank);
    // p̄(e·a) ≤ p̄(e) p(a).
    const auto& alg = m.algebra;
    const Vec c = rng.gaussian_vector(static_cast<Eigen::Index>(m.size()));
    const Vec av = rng.gaussian_vector(static_cast<Eigen::Index>(alg.dim()));
    Vec ea = Vec::Zero(static_cast<Eigen::Index>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t k = 0; k < alg.dim(); ++k)
        ea += c(static_cast<Eigen::Index>(i)) * av(static_cast<Eigen::Index>(k)) * e.right_action(i, k);
    for (std::size_t l = 0; l < alg.poset().size(); ++l)
      CHECK(module_seminorm(m, ea, l) <= module_seminorm(m, c, l) * algebra_seminorm(alg, av, l) * (1 + 1e-8) + 1e-10);
  }
}
