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

#include "prostar/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "prostar/error.hpp"

namespace prostar {
namespace {

// Relative singular-value cutoff matching the eigenvalue cutoff on Gram matrices.
double singular_cutoff(double sigma_max) { return std::sqrt(kRankCutoff) * sigma_max; }

void require_psd(const OperatorKernel& k, Tolerance tol, ErrorCode code = ErrorCode::KernelNotPSD) {
  for (std::size_t l = 0; l < k.poset().size(); ++l) {
    const Mat g = k.gram(l);
    if (g.size() == 0) continue;
    const double low = min_eigenvalue(g);
    if (low < -tol.of(spectral_norm(g)))
      throw Error(code, "block Gram matrix has a negative eigenvalue", {k.poset().label(l)}, -low);
  }
}

LocallyBoundedOperator combine(const std::vector<LocallyBoundedOperator>& ops, const Vec& c,
                               const SpacePtr& domain, const SpacePtr& codomain) {
  std::vector<Mat> levels(domain->levels());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    levels[l] = Mat::Zero(codomain->dim(l), domain->dim(l));
    for (std::size_t i = 0; i < ops.size(); ++i)
      if (c(i) != cplx(0.0)) levels[l] += c(i) * ops[i].level(l);
  }
  return LocallyBoundedOperator(domain, codomain, std::move(levels), Tolerance{1e-7});
}

// Builds K and V from a full-row-rank factor W (r x m·d_top) of G_top.
KolmogorovDecomposition from_factor(const SpacePtr& h, std::vector<std::string> points,
                                    const Mat& w, Tolerance tol) {
  const DirectedPoset& poset = h->poset();
  const std::size_t top = poset.top();
  const Eigen::Index m = static_cast<Eigen::Index>(points.size());
  const Eigen::Index r = w.rows();
  const double cut = singular_cutoff(spectral_norm(w));

  std::vector<Mat> blocks(poset.size());  // W (I ⊗ J_λ)
  std::vector<Mat> bases(poset.size());
  for (std::size_t l = 0; l < poset.size(); ++l) {
    blocks[l] = w * kron(Mat::Identity(m, m), h->embedding(l));
    bases[l] = l == top ? Mat(Mat::Identity(r, r)) : orthonormal_range(blocks[l], cut);
  }
  auto k_space = std::make_shared<const LocallyHilbertSpace>(
      LocallyHilbertSpace::from_embeddings(poset, bases, Tolerance{std::max(tol.scale, 1e-8)}));

  KolmogorovDecomposition d;
  d.points = std::move(points);
  d.space = h;
  d.dilation_space = k_space;
  for (Eigen::Index x = 0; x < m; ++x) {
    std::vector<Mat> levels(poset.size());
    for (std::size_t l = 0; l < poset.size(); ++l) {
      const Eigen::Index dl = h->dim(l);
      levels[l] = bases[l].adjoint() * blocks[l].middleCols(x * dl, dl);
    }
    d.V.emplace_back(h, k_space, std::move(levels), Tolerance{std::max(tol.scale, 1e-8)});
  }
  const std::vector<int> ranks = d.spanning_ranks();
  d.minimal = ranks == k_space->dims();
  return d;
}

}  // namespace

Mat KolmogorovDecomposition::columns(std::size_t level) const {
  const Eigen::Index dl = space->dim(level);
  Mat c(dilation_space->dim(level), static_cast<Eigen::Index>(V.size()) * dl);
  for (std::size_t x = 0; x < V.size(); ++x)
    c.middleCols(static_cast<Eigen::Index>(x) * dl, dl) = V[x].level(level);
  return c;
}

std::vector<int> KolmogorovDecomposition::spanning_ranks() const {
  const double cut = singular_cutoff(spectral_norm(columns(space->poset().top())));
  std::vector<int> ranks;
  for (std::size_t l = 0; l < space->levels(); ++l) ranks.push_back(numerical_rank(columns(l), cut));
  return ranks;
}

double factorization_residual(const KolmogorovDecomposition& d, const OperatorKernel& k) {
  double worst = 0.0;
  for (std::size_t x = 0; x < d.V.size(); ++x)
    for (std::size_t y = 0; y < d.V.size(); ++y)
      for (std::size_t l = 0; l < k.poset().size(); ++l)
        worst = std::max(worst, max_abs(d.V[x].level(l).adjoint() * d.V[y].level(l) -
                                        k(x, y).level(l)));
  return worst;
}

KolmogorovDecomposition kolmogorov(const OperatorKernel& k, KolmogorovOptions options,
                                   Tolerance tol) {
  require_psd(k, tol);
  const std::size_t top = k.poset().top();
  const Mat g = k.gram(top);
  Mat w(0, g.cols());
  double gnorm = 0.0;
  if (g.size() > 0) {
    const HermitianEigen e = hermitian_eigen(g, options.reversed);
    gnorm = std::max(0.0, e.values.maxCoeff());
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < e.values.size(); ++i)
      if (e.values(i) > kRankCutoff * gnorm && e.values(i) > 0.0) keep.push_back(i);
    w.resize(static_cast<Eigen::Index>(keep.size()), g.cols());
    for (std::size_t i = 0; i < keep.size(); ++i)
      w.row(static_cast<Eigen::Index>(i)) =
          std::sqrt(e.values(keep[i])) * e.vectors.col(keep[i]).adjoint();
  }
  KolmogorovDecomposition d = from_factor(k.space(), k.points(), w, tol);
  d.residual = factorization_residual(d, k);
  d.gram_norm = gnorm;
  return d;
}

KolmogorovDecomposition minimalize(const KolmogorovDecomposition& d, Tolerance tol) {
  const std::size_t top = d.space->poset().top();
  const Mat w = d.columns(top);
  const Mat q = orthonormal_range(w, singular_cutoff(spectral_norm(w)));
  KolmogorovDecomposition out = from_factor(d.space, d.points, q.adjoint() * w, tol);
  double drift = 0.0;
  for (std::size_t x = 0; x < d.V.size(); ++x)
    for (std::size_t y = 0; y < d.V.size(); ++y)
      for (std::size_t l = 0; l < d.space->levels(); ++l)
        drift = std::max(drift, max_abs(out.V[x].level(l).adjoint() * out.V[y].level(l) -
                                        d.V[x].level(l).adjoint() * d.V[y].level(l)));
  out.residual = d.residual + drift;
  out.gram_norm = d.gram_norm;
  return out;
}

LocallyBoundedOperator represent_action(const KolmogorovDecomposition& d, const Mat& action,
                                        Tolerance tol) {
  const auto m = static_cast<Eigen::Index>(d.V.size());
  if (action.rows() != m || action.cols() != m)
    throw Error(ErrorCode::InvalidAction, "action matrix must be m x m");
  const double cut = singular_cutoff(spectral_norm(d.columns(d.space->poset().top())));
  std::vector<Mat> levels(d.space->levels());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const Mat c = d.columns(l);
    const Eigen::Index dl = d.space->dim(l);
    levels[l] = c * kron(action, Mat::Identity(dl, dl)) * pinv(c, cut);
  }
  return LocallyBoundedOperator(d.dilation_space, d.dilation_space, std::move(levels),
                                Tolerance{std::max(tol.scale, 1e-8)});
}

InvariantDilation invariant_dilation(const OperatorKernel& k, const SemigroupAction& action,
                                     KolmogorovOptions options, Tolerance tol) {
  if (action.points() != k.size())
    throw Error(ErrorCode::InvalidAction, "action and kernel have different point sets");
  require_psd(k, tol);
  const StarSemigroup& sg = action.semigroup();
  const DirectedPoset& poset = k.poset();

  InvariantDilation out;
  out.certificates.assign(sg.size(), std::vector<double>(poset.size(), 0.0));
  for (std::size_t s = 0; s < sg.size(); ++s)
    for (std::size_t l = 0; l < poset.size(); ++l) {
      BoundCertificate c = sznagy_bound(k, action, s, l, tol);
      if (!c.finite())
        throw Error(ErrorCode::BoundednessFails,
                    "no c with G^s <= c G for " + sg.label(s) + " at " + poset.label(l),
                    {sg.label(s), poset.label(l)}, c.value)
            .with_witness(c.witness);
      out.certificates[s][l] = c.value;
    }

  double scale = 0.0;
  for (std::size_t x = 0; x < k.size(); ++x)
    for (std::size_t y = 0; y < k.size(); ++y) scale = std::max(scale, max_abs(k(x, y).top()));
  for (std::size_t s = 0; s < sg.size(); ++s)
    for (std::size_t x = 0; x < k.size(); ++x)
      for (std::size_t y = 0; y < k.size(); ++y) {
        double res = 0.0;
        for (std::size_t l = 0; l < poset.size(); ++l)
          res = std::max(res, max_abs(k(action.apply(s, x), y).level(l) -
                                      k(x, action.apply(sg.star(s), y)).level(l)));
        if (res > tol.of(scale))
          throw Error(ErrorCode::NotInvariant, "k(s.x, y) != k(x, s*.y)",
                      {sg.label(s), k.points()[x], k.points()[y]}, res);
      }

  out.decomposition = kolmogorov(k, options, tol);
  const KolmogorovDecomposition& d = out.decomposition;
  for (std::size_t s = 0; s < sg.size(); ++s)
    out.pi.push_back(represent_action(d, action.matrix(s), tol));

  for (std::size_t s = 0; s < sg.size(); ++s) {
    for (std::size_t t = 0; t < sg.size(); ++t)
      out.representation_residual = std::max(
          out.representation_residual, distance(out.pi[sg.mult(s, t)], compose(out.pi[s], out.pi[t])));
    out.star_residual = std::max(out.star_residual, distance(out.pi[sg.star(s)], adjoint(out.pi[s])));
    for (std::size_t x = 0; x < k.size(); ++x)
      out.intertwining_residual = std::max(
          out.intertwining_residual, distance(compose(out.pi[s], d.V[x]), d.V[action.apply(s, x)]));
    out.coherence_residual = std::max(out.coherence_residual, out.pi[s].coherence().worst());
  }
  for (const auto& v : d.V)
    out.coherence_residual = std::max(out.coherence_residual, v.coherence().worst());
  return out;
}

namespace {

// Both the flag and the spanning ranks must certify minimality.
void require_minimal(const KolmogorovDecomposition& d) {
  if (!d.minimal) throw Error(ErrorCode::NotMinimal, "decomposition is not marked minimal");
  if (d.spanning_ranks() != d.dilation_space->dims())
    throw Error(ErrorCode::NotMinimal, "V(X)H does not span K");
}

}  // namespace

ReproducingKernelSpace::ReproducingKernelSpace(KolmogorovDecomposition d) : d_(std::move(d)) {
  require_minimal(d_);
}

LocalVector ReproducingKernelSpace::evaluate(const LocalVector& w, std::size_t x) const {
  if (w.coords.size() != d_.dilation_space->dim(w.level))
    throw Error(ErrorCode::ShapeMismatch, "vector length differs from dim K_λ");
  return {w.level, d_.V.at(x).level(w.level).adjoint() * w.coords};
}

LocalVector ReproducingKernelSpace::section(std::size_t x, const LocalVector& h) const {
  if (h.coords.size() != d_.space->dim(h.level))
    throw Error(ErrorCode::ShapeMismatch, "vector length differs from dim H_λ");
  return {h.level, d_.V.at(x).level(h.level) * h.coords};
}

cplx ReproducingKernelSpace::inner(const LocalVector& w, const LocalVector& v) const {
  return inner_product(*d_.dilation_space, w, v);
}

double ReproducingKernelSpace::reproducing_residual(const LocalVector& w, std::size_t x,
                                                    const LocalVector& h) const {
  const std::size_t level = d_.space->poset().upper_bound(w.level, h.level);
  const LocalVector wl{level, d_.dilation_space->embedding(level, w.level) * w.coords};
  const cplx lhs = inner(wl, section(x, {level, d_.space->embedding(level, h.level) * h.coords}));
  const cplx rhs = inner_product(*d_.space, evaluate(wl, x), h);
  return std::abs(lhs - rhs);
}

namespace {

Equivalence equivalence_core(const KolmogorovDecomposition& d1, const KolmogorovDecomposition& d2,
                             Tolerance tol) {
  require_minimal(d1);
  require_minimal(d2);
  if (d1.V.size() != d2.V.size() || !same_space(d1.space, d2.space))
    throw Error(ErrorCode::NotEquivalent, "decompositions factor kernels on different data");
  const DirectedPoset& poset = d1.space->poset();
  if (d1.dilation_space->dims() != d2.dilation_space->dims())
    throw Error(ErrorCode::NotEquivalent, "dilation spaces have different dimensions");
  const double cut = singular_cutoff(spectral_norm(d1.columns(poset.top())));
  std::vector<Mat> levels(poset.size());
  for (std::size_t l = 0; l < poset.size(); ++l)
    levels[l] = d2.columns(l) * pinv(d1.columns(l), cut);
  std::optional<LocallyBoundedOperator> u;
  try {
    u.emplace(d1.dilation_space, d2.dilation_space, std::move(levels),
              Tolerance{std::max(tol.scale, 1e-8)});
  } catch (const Error& e) {
    throw Error(ErrorCode::NotEquivalent, std::string("intertwiner is not coherent: ") + e.what(),
                e.where(), e.residual());
  }
  Equivalence eq{*u, 0.0, 0.0};
  for (std::size_t l = 0; l < poset.size(); ++l) {
    const Mat& ul = u->level(l);
    const Mat id = Mat::Identity(ul.rows(), ul.cols());
    eq.unitary_residual = std::max({eq.unitary_residual, max_abs(ul.adjoint() * ul - id),
                                    max_abs(ul * ul.adjoint() - id)});
  }
  for (std::size_t x = 0; x < d1.V.size(); ++x)
    eq.intertwining_residual =
        std::max(eq.intertwining_residual, distance(compose(*u, d1.V[x]), d2.V[x]));
  return eq;
}

void require_equivalent(const Equivalence& eq, double gram_norm, Tolerance tol) {
  const double limit = tol.of(gram_norm);
  if (eq.unitary_residual > limit)
    throw Error(ErrorCode::NotEquivalent, "intertwiner is not locally unitary", {},
                eq.unitary_residual);
  if (eq.intertwining_residual > limit)
    throw Error(ErrorCode::NotEquivalent, "intertwiner does not map V1 to V2", {},
                eq.intertwining_residual);
}

}  // namespace

Equivalence unitary_equivalence(const KolmogorovDecomposition& d1,
                                const KolmogorovDecomposition& d2, Tolerance tol) {
  Equivalence eq = equivalence_core(d1, d2, tol);
  require_equivalent(eq, std::max(d1.gram_norm, d2.gram_norm), tol);
  return eq;
}

Equivalence unitary_equivalence(const InvariantDilation& d1, const InvariantDilation& d2,
                                Tolerance tol) {
  Equivalence eq = equivalence_core(d1.decomposition, d2.decomposition, tol);
  if (d1.pi.size() != d2.pi.size())
    throw Error(ErrorCode::NotEquivalent, "representations of different semigroups");
  for (std::size_t s = 0; s < d1.pi.size(); ++s)
    eq.intertwining_residual = std::max(
        eq.intertwining_residual, distance(compose(eq.U, d1.pi[s]), compose(d2.pi[s], eq.U)));
  require_equivalent(eq, std::max(d1.decomposition.gram_norm, d2.decomposition.gram_norm), tol);
  return eq;
}

LocallyBoundedOperator StinespringDilation::pi(const Vec& a) const {
  if (static_cast<std::size_t>(a.size()) != pi_basis.size())
    throw Error(ErrorCode::ShapeMismatch, "coefficient vector length differs from algebra dimension");
  return combine(pi_basis, a, space, space);
}

StinespringDilation stinespring(const ConcreteLocallyCStarAlgebra& a, const CpMap& phi,
                                KolmogorovOptions options, Tolerance tol) {
  if (!(phi.target->poset() == a.poset()))
    throw Error(ErrorCode::PosetMismatch, "map target and algebra carrier use different posets");
  if (phi.images.size() != a.dim())
    throw Error(ErrorCode::ShapeMismatch, "map must give one image per algebra basis element");
  const std::optional<Vec> unit = a.unit();
  if (!unit) throw Error(ErrorCode::NotUnital, "algebra does not contain the identity");
  const DirectedPoset& poset = a.poset();
  const std::size_t n = a.dim();

  std::vector<Vec> points;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    points.push_back(a.structure().unit_vector(i));
    labels.push_back("b" + std::to_string(i));
  }
  points.push_back(*unit);
  labels.push_back("1");
  CpKernel cp = kernel_from_cp_map(a, phi, points, labels, true);
  require_psd(cp.kernel, tol, ErrorCode::NotCompletelyPositive);

  std::vector<std::vector<double>> certificates(n, std::vector<double>(poset.size(), 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < poset.size(); ++l) {
      BoundCertificate c = sznagy_bound(cp.kernel, cp.left_action[i], l, tol);
      if (!c.finite())
        throw Error(ErrorCode::BoundednessFails, "left multiplication by b" + std::to_string(i) +
                                                     " is unbounded at " + poset.label(l),
                    {labels[i], poset.label(l)}, c.value)
            .with_witness(c.witness);
      certificates[i][l] = c.value;
    }

  auto action_of = [&](const Vec& c) {
    const auto m = static_cast<Eigen::Index>(points.size());
    Mat act = Mat::Zero(m, m);
    for (std::size_t i = 0; i < n; ++i) act += c(i) * cp.left_action[i];
    return act;
  };
  double invariance = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    invariance = std::max(invariance, linear_invariance_residual(cp.kernel, cp.left_action[i],
                                                                 action_of(a.structure().star[i])));

  KolmogorovDecomposition d = kolmogorov(cp.kernel, options, tol);
  std::vector<LocallyBoundedOperator> pis;
  for (std::size_t i = 0; i < n; ++i) pis.push_back(represent_action(d, cp.left_action[i], tol));
  LocallyBoundedOperator w = d.V.back();
  StinespringDilation out{d.dilation_space, std::move(pis), std::move(w), std::move(d),
                          std::move(certificates)};
  out.invariance_residual = invariance;

  const auto& st = a.structure();
  for (std::size_t i = 0; i < n; ++i) {
    out.reproduction_residual =
        std::max(out.reproduction_residual,
                 distance(phi.images[i], compose(adjoint(out.W), compose(out.pi_basis[i], out.W))));
    for (std::size_t j = 0; j < n; ++j)
      out.multiplicativity_residual =
          std::max(out.multiplicativity_residual,
                   distance(out.pi(st.product[i][j]), compose(out.pi_basis[i], out.pi_basis[j])));
    out.star_residual =
        std::max(out.star_residual, distance(out.pi(st.star[i]), adjoint(out.pi_basis[i])));
    out.coherence_residual = std::max(out.coherence_residual, out.pi_basis[i].coherence().worst());
  }
  for (const auto& v : out.decomposition.V)
    out.coherence_residual = std::max(out.coherence_residual, v.coherence().worst());
  out.unit_residual = distance(out.pi(*unit), LocallyBoundedOperator::identity(out.space));

  // Multiplicative *-semigroup generated by the algebra generators.
  constexpr std::size_t kOrbitCap = 64;
  std::vector<Vec> orbit;
  auto add_element = [&](const Vec& v) {
    for (const auto& o : orbit)
      if ((o - v).norm() <= 1e-8 * (1.0 + v.norm())) return;
    orbit.push_back(v);
  };
  for (const auto& g : a.generators()) add_element(a.express(g));
  bool complete = true;
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    if (orbit.size() > kOrbitCap) {
      complete = false;
      break;
    }
    add_element(a.adjoint(orbit[i]));
    for (std::size_t j = 0; j <= i && orbit.size() <= kOrbitCap; ++j) {
      add_element(a.multiply(orbit[i], orbit[j]));
      add_element(a.multiply(orbit[j], orbit[i]));
    }
  }
  if (orbit.size() > kOrbitCap) {
    complete = false;
    orbit.resize(kOrbitCap);
  }
  std::vector<LocallyBoundedOperator> orbit_pi;
  for (const auto& o : orbit) orbit_pi.push_back(out.pi(o));
  for (std::size_t i = 0; i < orbit.size(); ++i)
    for (std::size_t j = 0; j < orbit.size(); ++j)
      out.multiplicativity_residual = std::max(
          out.multiplicativity_residual,
          distance(out.pi(a.multiply(orbit[i], orbit[j])), compose(orbit_pi[i], orbit_pi[j])));
  out.orbit_size = orbit.size();
  out.orbit_complete = complete;
  return out;
}

}  // namespace prostar
