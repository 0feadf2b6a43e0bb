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

#include "prostar/csmodule.hpp"

#include <cmath>

#include "prostar/error.hpp"
#include "prostar/kernel.hpp"

namespace prostar {
namespace {

std::string generator_label(const AbstractHilbertModule& m, std::size_t i) {
  return i < m.generators.size() ? m.generators[i] : "e" + std::to_string(i);
}

// Number of eigenvalues above the relative cutoff.
int psd_rank(const Mat& g) {
  if (g.size() == 0) return 0;
  const HermitianEigen e = hermitian_eigen(g);
  const double top = std::max(0.0, e.values(0));
  int r = 0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) > kRankCutoff * top && e.values(i) > 0.0) ++r;
  return r;
}

Vec flatten(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

void require_shapes(const AbstractHilbertModule& m) {
  const std::size_t n = m.size();
  const auto dim = static_cast<Eigen::Index>(m.algebra.dim());
  if (m.gramian.size() != n)
    throw Error(ErrorCode::ShapeMismatch, "gramian needs one row per generator");
  for (std::size_t i = 0; i < n; ++i) {
    if (m.gramian[i].size() != n)
      throw Error(ErrorCode::ShapeMismatch, "gramian is not square", {generator_label(m, i)});
    for (const auto& v : m.gramian[i])
      if (v.size() != dim)
        throw Error(ErrorCode::ShapeMismatch, "gramian entry is not an algebra element",
                    {generator_label(m, i)});
  }
  for (const auto& a : m.action)
    if (a.generator >= n || a.element.size() != dim || static_cast<std::size_t>(a.result.size()) != n)
      throw Error(ErrorCode::ShapeMismatch, "malformed action table entry");
}

double gramian_scale(const AbstractHilbertModule& m) {
  double s = 0.0;
  for (const auto& row : m.gramian)
    for (const auto& v : row) s = std::max(s, v.cwiseAbs().maxCoeff());
  return s;
}

}  // namespace

Vec AbstractHilbertModule::bracket(const Vec& e, const Vec& f) const {
  if (static_cast<std::size_t>(e.size()) != size() || static_cast<std::size_t>(f.size()) != size())
    throw Error(ErrorCode::ShapeMismatch, "module element length differs from generator count");
  Vec out = Vec::Zero(static_cast<Eigen::Index>(algebra.dim()));
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j) out += std::conj(e(i)) * f(j) * gramian[i][j];
  return out;
}

Mat AbstractHilbertModule::gram(std::size_t level) const {
  const Eigen::Index d = algebra.carrier()->dim(level);
  const auto n = static_cast<Eigen::Index>(size());
  Mat g(n * d, n * d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      g.block(i * d, j * d, d, d) = algebra.element_at(gramian[i][j], level);
  return g;
}

ModuleReport check_module(const AbstractHilbertModule& m, Tolerance tol) {
  require_shapes(m);
  const std::size_t n = m.size();
  const double limit = tol.of(gramian_scale(m));
  ModuleReport r;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double res = (m.gramian[j][i] - m.algebra.adjoint(m.gramian[i][j])).cwiseAbs().maxCoeff();
      r.hermitian_residual = std::max(r.hermitian_residual, res);
      if (res > limit)
        throw Error(ErrorCode::GramianNotHermitian, "[e_j, e_i] != [e_i, e_j]*",
                    {generator_label(m, i), generator_label(m, j)}, res);
    }
  const DirectedPoset& poset = m.algebra.poset();
  for (std::size_t l = 0; l < poset.size(); ++l) {
    const Mat g = m.gram(l);
    const double low = min_eigenvalue(g);
    r.min_eigenvalues.push_back(g.size() == 0 ? 0.0 : low);
    if (g.size() > 0 && low < -tol.of(spectral_norm(g)))
      throw Error(ErrorCode::GramianNotPositive, "block Gram matrix has a negative eigenvalue",
                  {poset.label(l)}, -low);
  }
  for (const auto& a : m.action) {
    const std::size_t j = a.generator;
    for (std::size_t i = 0; i < n; ++i) {
      Vec lhs = Vec::Zero(static_cast<Eigen::Index>(m.algebra.dim()));
      for (std::size_t l = 0; l < n; ++l) lhs += a.result(l) * m.gramian[i][l];
      const Vec rhs = m.algebra.multiply(m.gramian[i][j], a.element);
      const double res = (lhs - rhs).cwiseAbs().maxCoeff();
      r.compatibility_residual = std::max(r.compatibility_residual, res);
      if (res > limit)
        throw Error(ErrorCode::ActionIncompatible, "[e_i, e_j a] != [e_i, e_j] a",
                    {generator_label(m, i), generator_label(m, j)}, res);
    }
  }
  // b_k is determined for e_j when it lies in the span of the elements given for e_j.
  const auto dim = static_cast<Eigen::Index>(m.algebra.dim());
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Vec> given;
    for (const auto& a : m.action)
      if (a.generator == j) given.push_back(a.element);
    Mat span(dim, static_cast<Eigen::Index>(given.size()));
    for (std::size_t c = 0; c < given.size(); ++c) span.col(static_cast<Eigen::Index>(c)) = given[c];
    const Mat q = orthonormal_range(span, kRankCutoff * std::max(1.0, spectral_norm(span)));
    for (Eigen::Index k = 0; k < dim; ++k) {
      const Vec b = m.algebra.structure().unit_vector(static_cast<std::size_t>(k));
      if ((b - q * (q.adjoint() * b)).norm() > 1e-8)
        r.undefined_actions.emplace_back(j, static_cast<std::size_t>(k));
    }
  }
  // Definite iff no nonzero c has G (c ⊗ I) = 0 at the top level.
  const std::size_t top = poset.top();
  const Mat g = m.gram(top);
  const Eigen::Index d = m.algebra.carrier()->dim(top);
  Mat cols(g.rows() * d, static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j)
    cols.col(j) = flatten(g.middleCols(j * d, d));
  r.definite = n == 0 || (cols.size() > 0 &&
                          numerical_rank(cols, kRankCutoff * spectral_norm(cols)) ==
                              static_cast<int>(n) &&
                          spectral_norm(cols) > 0.0);
  return r;
}

double module_seminorm(const AbstractHilbertModule& m, const Vec& e, std::size_t mu) {
  return std::sqrt(algebra_seminorm(m.algebra, m.bracket(e, e), mu));
}

double module_seminorm(const AbstractHilbertModule& m, const Vec& e, std::string_view mu) {
  return module_seminorm(m, e, m.algebra.poset().index_of(mu));
}

OperatorModel operator_model(const AbstractHilbertModule& m, Tolerance tol) {
  OperatorModel out;
  out.module = check_module(m, tol);
  const std::size_t n = m.size();
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(generator_label(m, i));
  const OperatorKernel k = OperatorKernel::from_function(
      labels, m.algebra.carrier(),
      [&](std::size_t i, std::size_t j) { return m.algebra.element(m.gramian[i][j]); });
  out.decomposition = kolmogorov(k, {}, tol);
  out.phi = out.decomposition.V;
  out.gramian_residual = out.decomposition.residual;

  const double limit = tol.of(std::max(gramian_scale(m), out.decomposition.gram_norm));
  for (const auto& a : m.action) {
    const LocallyBoundedOperator element = m.algebra.element(a.element);
    for (std::size_t l = 0; l < m.algebra.poset().size(); ++l) {
      Mat diff = -out.phi[a.generator].level(l) * element.level(l);
      for (std::size_t j = 0; j < n; ++j) diff += a.result(j) * out.phi[j].level(l);
      out.action_residual = std::max(out.action_residual, max_abs(diff));
    }
  }
  if (out.action_residual > limit)
    throw Error(ErrorCode::ActionIncompatible, "Phi(e b) != Phi(e) b", {}, out.action_residual);

  const std::size_t top = m.algebra.poset().top();
  out.gram_rank = psd_rank(m.gram(top));
  const Mat c = out.decomposition.columns(top);
  out.image_rank = psd_rank(c.adjoint() * c);
  return out;
}

ConcreteHilbertModule::ConcreteHilbertModule(ConcreteLocallyCStarAlgebra algebra,
                                             SpacePtr codomain,
                                             std::vector<LocallyBoundedOperator> elements,
                                             Tolerance tol)
    : algebra_(std::move(algebra)), codomain_(std::move(codomain)), elements_(std::move(elements)) {
  (void)tol;
  const std::size_t n = elements_.size();
  for (std::size_t i = 0; i < n; ++i)
    if (!same_space(elements_[i].domain(), algebra_.carrier()) ||
        !same_space(elements_[i].codomain(), codomain_))
      throw Error(ErrorCode::ShapeMismatch, "module element must map the carrier into K",
                  {"e" + std::to_string(i)});
  gramian_.assign(n, std::vector<Vec>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Mat ts = elements_[i].top().adjoint() * elements_[j].top();
      auto c = algebra_.try_express(ts);
      if (!c)
        throw Error(ErrorCode::GramianOutsideAlgebra, "T_i* T_j is not in the algebra",
                    {"e" + std::to_string(i), "e" + std::to_string(j)});
      gramian_[i][j] = *c;
    }
  if (n == 0) return;
  const Mat& t0 = elements_[0].top();
  Mat span(t0.size(), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) span.col(static_cast<Eigen::Index>(i)) = flatten(elements_[i].top());
  const Mat span_pinv = pinv(span, kRankCutoff * std::max(1.0, spectral_norm(span)));
  action_.assign(n, std::vector<Vec>(algebra_.dim()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < algebra_.dim(); ++k) {
      const Vec v = flatten(elements_[i].top() * algebra_.basis()[k].top());
      const Vec c = span_pinv * v;
      if ((span * c - v).norm() > 1e-8 * (1.0 + v.norm()))
        throw Error(ErrorCode::NotAModule, "T_i b_k leaves the span of the elements",
                    {"e" + std::to_string(i), "b" + std::to_string(k)});
      action_[i][k] = c;
    }
}

AbstractHilbertModule ConcreteHilbertModule::abstract(std::vector<std::string> labels) const {
  if (labels.empty())
    for (std::size_t i = 0; i < size(); ++i) labels.push_back("e" + std::to_string(i));
  if (labels.size() != size())
    throw Error(ErrorCode::ShapeMismatch, "one label per module element required");
  AbstractHilbertModule m{algebra_, std::move(labels), gramian_, {}};
  for (std::size_t i = 0; i < action_.size(); ++i)
    for (std::size_t k = 0; k < action_[i].size(); ++k)
      m.action.push_back({i, algebra_.structure().unit_vector(k), action_[i][k]});
  return m;
}

ExteriorTensor exterior_tensor(const ConcreteHilbertModule& e, const ConcreteHilbertModule& f,
                               Tolerance tol) {
  ConcreteLocallyCStarAlgebra c = spatial_tensor(e.algebra(), f.algebra(), tol);
  const SpacePtr domain = c.carrier();
  const SpacePtr codomain = tensor_space(*e.codomain(), *f.codomain());
  std::vector<LocallyBoundedOperator> elements;
  for (const auto& x : e.elements())
    for (const auto& y : f.elements()) elements.push_back(tensor_op(x, y, domain, codomain));

  double residual = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = 0; j < f.size(); ++j)
      for (std::size_t i2 = 0; i2 < e.size(); ++i2)
        for (std::size_t j2 = 0; j2 < f.size(); ++j2) {
          const auto& lhs_l = elements[i * f.size() + j];
          const auto& lhs_r = elements[i2 * f.size() + j2];
          const LocallyBoundedOperator lhs = compose(adjoint(lhs_l), lhs_r);
          const LocallyBoundedOperator rhs =
              tensor_op(compose(adjoint(e.elements()[i]), e.elements()[i2]),
                        compose(adjoint(f.elements()[j]), f.elements()[j2]), domain, domain);
          residual = std::max(residual, distance(lhs, rhs));
        }
  ConcreteHilbertModule module(std::move(c), codomain, std::move(elements), tol);
  return ExteriorTensor{std::move(module), residual};
}

double right_action_residual(const LocallyBoundedOperator& e, const LocallyBoundedOperator& f,
                             const LocallyBoundedOperator& a, const LocallyBoundedOperator& b) {
  const LocallyBoundedOperator lhs = compose(tensor_op(e, f), tensor_op(a, b));
  const LocallyBoundedOperator rhs = tensor_op(compose(e, a), compose(f, b));
  return distance(lhs, rhs);
}

}  // namespace prostar
