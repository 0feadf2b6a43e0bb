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

#include "prostar/localg.hpp"

#include <algorithm>

#include "prostar/error.hpp"

namespace prostar {
namespace {

Vec flatten(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

Mat unflatten(const Vec& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

// Columns vec(m_i).
Mat stack_columns(const std::vector<Mat>& ms, Eigen::Index rows) {
  Mat out(rows, static_cast<Eigen::Index>(ms.size()));
  for (std::size_t i = 0; i < ms.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = flatten(ms[i]);
  return out;
}

// Orthonormal basis of the null space of `m`, relative cutoff 1e-9.
Mat null_space(const Mat& m) {
  const Eigen::Index n = m.cols();
  if (n == 0) return Mat(0, 0);
  if (m.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cutoff = 1e-9 * (1.0 + s(0));
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

int rank_rel(const Mat& m) {
  if (m.size() == 0) return 0;
  const Eigen::VectorXd s = singular_values(m);
  return static_cast<int>((s.array() > 1e-9 * (1.0 + s(0))).count());
}

MorphismReport check_morphism_impl(const DirectedPoset& poset, const AlgebraStructure& s,
                                   const std::vector<Mat>& source_maps,
                                   const std::vector<std::vector<Mat>>& image_levels,
                                   Tolerance tol) {
  MorphismReport r;
  r.faithful.assign(poset.size(), true);
  const std::size_t n = s.dim;
  double m = 0.0;
  for (const auto& img : image_levels)
    for (const auto& l : img) m = std::max(m, max_abs(l));
  const double limit = tol.of(m * m + m);

  for (std::size_t lev = 0; lev < poset.size(); ++lev) {
    const std::string& label = poset.label(lev);
    if (n == 0) continue;
    const Eigen::Index rows = image_levels[0][lev].rows();
    const Eigen::Index cols = image_levels[0][lev].cols();
    auto combine = [&](const Vec& c) {
      Mat out = Mat::Zero(rows, cols);
      for (std::size_t k = 0; k < n; ++k) out += c(static_cast<Eigen::Index>(k)) * image_levels[k][lev];
      return out;
    };
    for (std::size_t i = 0; i < n; ++i) {
      const Mat& ri = image_levels[i][lev];
      for (std::size_t j = 0; j < n; ++j) {
        const double res = max_abs(combine(s.product[i][j]) - ri * image_levels[j][lev]);
        r.multiplicativity = std::max(r.multiplicativity, res);
        if (res > limit)
          throw Error(ErrorCode::NotMultiplicative, "rho(ab) != rho(a)rho(b) at level " + label,
                      {label}, res);
      }
      const double res = max_abs(combine(s.star[i]) - ri.adjoint());
      r.star = std::max(r.star, res);
      if (res > limit)
        throw Error(ErrorCode::NotStarPreserving, "rho(a*) != rho(a)* at level " + label, {label},
                    res);
    }
    std::vector<Mat> cols_at;
    for (std::size_t i = 0; i < n; ++i) cols_at.push_back(image_levels[i][lev]);
    const Mat image_map = stack_columns(cols_at, rows * cols);
    const Mat kernel = null_space(source_maps[lev]);
    const double coh = kernel.cols() ? max_abs(image_map * kernel) : 0.0;
    r.coherence = std::max(r.coherence, coh);
    if (coh > tol.of(m))
      throw Error(ErrorCode::NotCoherent,
                  "image does not factor through the level-" + label + " quotient", {label, label},
                  coh);
    r.faithful[lev] = rank_rel(image_map) == rank_rel(source_maps[lev]);
  }
  return r;
}

}  // namespace

Vec AlgebraStructure::unit_vector(std::size_t i) const {
  Vec e = Vec::Zero(static_cast<Eigen::Index>(dim));
  e(static_cast<Eigen::Index>(i)) = 1.0;
  return e;
}

Vec AlgebraStructure::multiply(const Vec& a, const Vec& b) const {
  Vec out = Vec::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    const cplx ai = a(static_cast<Eigen::Index>(i));
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < dim; ++j) {
      const cplx bj = b(static_cast<Eigen::Index>(j));
      if (bj != 0.0) out += (ai * bj) * product[i][j];
    }
  }
  return out;
}

Vec AlgebraStructure::adjoint(const Vec& a) const {
  Vec out = Vec::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) out += std::conj(a(static_cast<Eigen::Index>(i))) * star[i];
  return out;
}

LocallyBoundedOperator ConcreteLocallyCStarAlgebra::element(const Vec& coeffs) const {
  std::vector<Mat> levels;
  for (std::size_t l = 0; l < carrier_->levels(); ++l) levels.push_back(element_at(coeffs, l));
  return LocallyBoundedOperator(carrier_, carrier_, std::move(levels), Tolerance{1e-7});
}

Mat ConcreteLocallyCStarAlgebra::element_at(const Vec& coeffs, std::size_t level) const {
  if (static_cast<std::size_t>(coeffs.size()) != dim())
    throw Error(ErrorCode::ShapeMismatch, "coefficient vector length differs from algebra dimension");
  const int d = carrier_->dim(level);
  Mat out = Mat::Zero(d, d);
  for (std::size_t i = 0; i < dim(); ++i) out += coeffs(static_cast<Eigen::Index>(i)) * basis_[i].level(level);
  return out;
}

std::optional<Vec> ConcreteLocallyCStarAlgebra::try_express(const Mat& top) const {
  const int d = carrier_->ambient_dim();
  if (top.rows() != d || top.cols() != d)
    throw Error(ErrorCode::ShapeMismatch, "matrix does not act on the carrier");
  const Vec v = flatten(top);
  Vec c(static_cast<Eigen::Index>(dim()));
  Vec rest = v;
  for (std::size_t i = 0; i < dim(); ++i) {
    c(static_cast<Eigen::Index>(i)) = flat_[i].dot(v);
    rest -= c(static_cast<Eigen::Index>(i)) * flat_[i];
  }
  if (max_abs(rest) > 1e-8 * (1.0 + v.norm())) return std::nullopt;
  return c;
}

Vec ConcreteLocallyCStarAlgebra::express(const Mat& top) const {
  if (auto c = try_express(top)) return *c;
  throw Error(ErrorCode::NotInSpan, "operator is not in the algebra");
}

std::optional<Vec> ConcreteLocallyCStarAlgebra::unit() const {
  const int d = carrier_->ambient_dim();
  return try_express(Mat::Identity(d, d));
}

double ConcreteLocallyCStarAlgebra::structure_residual() const {
  double worst = 0.0;
  const int d = carrier_->ambient_dim();
  auto at_top = [&](const Vec& c) {
    Mat out = Mat::Zero(d, d);
    for (std::size_t k = 0; k < dim(); ++k) out += c(static_cast<Eigen::Index>(k)) * unflatten(flat_[k], d, d);
    return out;
  };
  for (std::size_t i = 0; i < dim(); ++i) {
    const Mat bi = unflatten(flat_[i], d, d);
    for (std::size_t j = 0; j < dim(); ++j)
      worst = std::max(worst, max_abs(bi * unflatten(flat_[j], d, d) - at_top(structure_.product[i][j])));
    worst = std::max(worst, max_abs(bi.adjoint() - at_top(structure_.star[i])));
  }
  return worst;
}

ConcreteLocallyCStarAlgebra make_algebra(const SpacePtr& carrier,
                                         std::vector<LocallyBoundedOperator> generators,
                                         Tolerance tol) {
  for (const auto& g : generators)
    if (!same_space(g.domain(), carrier) || !same_space(g.codomain(), carrier))
      throw Error(ErrorCode::ShapeMismatch, "generator does not act on the carrier");

  const int d = carrier->ambient_dim();
  const std::size_t limit = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
  std::vector<Vec> flat;

  auto try_add = [&](const Mat& m) {
    Vec v = flatten(m);
    const double n0 = v.norm();
    if (n0 == 0.0) return false;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : flat) v -= b.dot(v) * b;
    if (v.norm() <= 1e-8 * (1.0 + n0)) return false;
    if (flat.size() >= limit)
      throw Error(ErrorCode::ClosureTooLarge, "span exceeds the full matrix algebra");
    flat.push_back(v / v.norm());
    return true;
  };

  for (const auto& g : generators) try_add(g.top());
  for (const auto& g : generators) try_add(g.top().adjoint());

  // Each sweep only forms products involving elements added since the last one.
  std::size_t done = 0;
  while (done < flat.size()) {
    const std::size_t n = flat.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Mat bi = unflatten(flat[i], d, d);
      for (std::size_t j = done; j < n; ++j) {
        const Mat bj = unflatten(flat[j], d, d);
        try_add(bi * bj);
        if (i < done) try_add(bj * bi);
      }
      if (i >= done) try_add(bi.adjoint());
    }
    done = n;
  }

  ConcreteLocallyCStarAlgebra a;
  a.carrier_ = carrier;
  a.generators_ = std::move(generators);
  a.flat_ = flat;
  for (const auto& v : flat)
    a.basis_.push_back(LocallyBoundedOperator::from_top(carrier, carrier, unflatten(v, d, d), Tolerance{std::max(tol.scale, 1e-7)}));

  AlgebraStructure& s = a.structure_;
  s.dim = flat.size();
  auto coords = [&](const Mat& m) {
    const Vec v = flatten(m);
    Vec c(static_cast<Eigen::Index>(flat.size()));
    for (std::size_t k = 0; k < flat.size(); ++k) c(static_cast<Eigen::Index>(k)) = flat[k].dot(v);
    return c;
  };
  s.product.assign(s.dim, std::vector<Vec>(s.dim));
  for (std::size_t i = 0; i < s.dim; ++i) {
    const Mat bi = unflatten(flat[i], d, d);
    for (std::size_t j = 0; j < s.dim; ++j) s.product[i][j] = coords(bi * unflatten(flat[j], d, d));
    s.star.push_back(coords(bi.adjoint()));
  }
  return a;
}

double algebra_seminorm(const ConcreteLocallyCStarAlgebra& a, const Vec& coeffs, std::size_t mu) {
  return spectral_norm(a.element_at(coeffs, mu));
}

double algebra_seminorm(const ConcreteLocallyCStarAlgebra& a, const Vec& coeffs,
                        std::string_view mu) {
  return algebra_seminorm(a, coeffs, a.poset().index_of(mu));
}

double bounded_norm(const ConcreteLocallyCStarAlgebra& a, const Vec& coeffs) {
  double best = 0.0;
  for (std::size_t l = 0; l < a.poset().size(); ++l)
    best = std::max(best, algebra_seminorm(a, coeffs, l));
  return best;
}

bool MorphismReport::all_faithful() const {
  return std::all_of(faithful.begin(), faithful.end(), [](bool f) { return f; });
}

MorphismReport check_coherent_morphism(const ConcreteLocallyCStarAlgebra& a,
                                       const ConcreteLocallyCStarAlgebra& b,
                                       const std::vector<Vec>& images, Tolerance tol) {
  std::vector<LocallyBoundedOperator> ops;
  for (const auto& c : images) ops.push_back(b.element(c));
  return check_coherent_morphism(a, b, ops, tol);
}

MorphismReport check_coherent_morphism(const ConcreteLocallyCStarAlgebra& a,
                                       const ConcreteLocallyCStarAlgebra& b,
                                       const std::vector<LocallyBoundedOperator>& images,
                                       Tolerance tol) {
  if (!(a.poset() == b.poset()))
    throw Error(ErrorCode::PosetMismatch, "algebras live over different posets");
  if (images.size() != a.dim())
    throw Error(ErrorCode::ShapeMismatch, "one image per basis element required");
  for (const auto& img : images) {
    if (!same_space(img.domain(), b.carrier()) || !same_space(img.codomain(), b.carrier()))
      throw Error(ErrorCode::ShapeMismatch, "image does not act on the target carrier");
    b.express(img);
  }
  std::vector<Mat> source_maps;
  for (std::size_t l = 0; l < a.poset().size(); ++l) {
    std::vector<Mat> cols;
    for (const auto& bi : a.basis()) cols.push_back(bi.level(l));
    const Eigen::Index rows = static_cast<Eigen::Index>(a.carrier()->dim(l)) * a.carrier()->dim(l);
    source_maps.push_back(stack_columns(cols, rows));
  }
  std::vector<std::vector<Mat>> image_levels;
  for (const auto& img : images) image_levels.push_back(img.levels());
  return check_morphism_impl(a.poset(), a.structure(), source_maps, image_levels, tol);
}

namespace {

struct LevelAlgebra {
  int n = 0;
  std::vector<Mat> basis;
  Mat flat;         // n² x dim
  Mat coordinates;  // pinv(flat)
  AlgebraStructure structure;

  Vec coords(const Mat& m, const std::string& label) const {
    const Vec v = flatten(m);
    Vec c = coordinates * v;
    if (max_abs(flat * c - v) > 1e-8 * (1.0 + v.norm()))
      throw Error(ErrorCode::InvalidSystem, "level algebra is not closed", {label});
    return c;
  }
  Mat at(const Vec& c) const {
    Mat out = Mat::Zero(n, n);
    for (std::size_t k = 0; k < basis.size(); ++k) out += c(static_cast<Eigen::Index>(k)) * basis[k];
    return out;
  }
};

LevelAlgebra make_level(const std::vector<Mat>& basis, const std::string& label) {
  LevelAlgebra la;
  la.basis = basis;
  la.n = basis.empty() ? 0 : static_cast<int>(basis[0].rows());
  for (const auto& b : basis)
    if (b.rows() != la.n || b.cols() != la.n)
      throw Error(ErrorCode::InvalidSystem, "basis matrices must be square of equal size", {label});
  la.flat = stack_columns(basis, static_cast<Eigen::Index>(la.n) * la.n);
  if (rank_rel(la.flat) != static_cast<int>(basis.size()))
    throw Error(ErrorCode::InvalidSystem, "level basis is linearly dependent", {label});
  la.coordinates = pinv(la.flat, 1e-12);
  AlgebraStructure& s = la.structure;
  s.dim = basis.size();
  s.product.assign(s.dim, std::vector<Vec>(s.dim));
  for (std::size_t i = 0; i < s.dim; ++i) {
    for (std::size_t j = 0; j < s.dim; ++j) s.product[i][j] = la.coords(basis[i] * basis[j], label);
    s.star.push_back(la.coords(basis[i].adjoint(), label));
  }
  return la;
}

}  // namespace

GelfandNaimarkRep gelfand_naimark_rep(const MatrixProjectiveSystem& sys, Tolerance tol) {
  const DirectedPoset& p = sys.poset;
  if (sys.bases.size() != p.size())
    throw Error(ErrorCode::InvalidSystem, "one basis per poset element required");
  std::vector<LevelAlgebra> levels;
  for (std::size_t l = 0; l < p.size(); ++l) levels.push_back(make_level(sys.bases[l], p.label(l)));

  auto conn = sys.connecting;
  for (const auto& [key, m] : conn) {
    const auto [l, u] = key;
    if (l >= p.size() || u >= p.size() || l == u || !p.leq(l, u))
      throw Error(ErrorCode::InvalidSystem, "connecting map between non-comparable levels");
    if (m.rows() != static_cast<Eigen::Index>(levels[l].basis.size()) ||
        m.cols() != static_cast<Eigen::Index>(levels[u].basis.size()))
      throw Error(ErrorCode::InvalidSystem, "connecting map has the wrong shape",
                  {p.label(l), p.label(u)});
  }
  for (bool grew = true; grew;) {
    grew = false;
    for (auto [l, v] : p.strict_pairs()) {
      if (conn.count({l, v})) continue;
      for (std::size_t m = 0; m < p.size(); ++m)
        if (m != l && m != v && p.leq(l, m) && p.leq(m, v) && conn.count({l, m}) && conn.count({m, v})) {
          conn[{l, v}] = conn[{l, m}] * conn[{m, v}];
          grew = true;
          break;
        }
    }
  }
  for (auto [l, v] : p.strict_pairs())
    if (!conn.count({l, v}))
      throw Error(ErrorCode::InvalidSystem, "connecting map missing", {p.label(l), p.label(v)});

  for (auto [l, u] : p.strict_pairs()) {
    const Mat& c = conn.at({l, u});
    const std::vector<std::string> where{p.label(l), p.label(u)};
    if (rank_rel(c) != static_cast<int>(levels[l].basis.size()))
      throw Error(ErrorCode::InvalidSystem, "connecting map is not onto", where);
    const auto& su = levels[u].structure;
    const auto& sl = levels[l].structure;
    double worst = 0.0;
    for (std::size_t i = 0; i < su.dim; ++i) {
      const Vec ci = c.col(static_cast<Eigen::Index>(i));
      for (std::size_t j = 0; j < su.dim; ++j)
        worst = std::max(worst, max_abs(c * su.product[i][j] - sl.multiply(ci, c.col(static_cast<Eigen::Index>(j)))));
      worst = std::max(worst, max_abs(c * su.star[i] - sl.adjoint(ci)));
    }
    if (worst > tol.of(max_abs(c) * max_abs(c)) * 10)
      throw Error(ErrorCode::InvalidSystem, "connecting map is not a *-morphism", where, worst);
    for (std::size_t m = 0; m < p.size(); ++m)
      if (m != l && m != u && p.leq(l, m) && p.leq(m, u)) {
        const double res = max_abs(c - conn.at({l, m}) * conn.at({m, u}));
        if (res > tol.of(max_abs(c)) * 10)
          throw Error(ErrorCode::InvalidSystem, "connecting maps are not transitive", where, res);
      }
  }

  const std::size_t top = p.top();
  auto to_level = [&](std::size_t l) -> Mat {
    if (l == top) return Mat::Identity(levels[top].structure.dim, levels[top].structure.dim);
    return conn.at({l, top});
  };

  std::vector<int> offset(p.size(), 0);
  int total = 0;
  for (std::size_t m = 0; m < p.size(); ++m) {
    offset[m] = total;
    total += levels[m].n;
  }
  std::vector<Mat> iso;
  for (std::size_t l = 0; l < p.size(); ++l) {
    int width = 0;
    for (std::size_t m : p.lower_set(l)) width += levels[m].n;
    Mat j = Mat::Zero(total, width);
    int local = 0;
    for (std::size_t m : p.lower_set(l)) {
      j.block(offset[m], local, levels[m].n, levels[m].n).setIdentity();
      local += levels[m].n;
    }
    iso.push_back(std::move(j));
  }
  GelfandNaimarkRep rep{std::make_shared<const LocallyHilbertSpace>(
                            LocallyHilbertSpace::from_embeddings(p, std::move(iso), tol)),
                        {}, {}, {}};

  const std::size_t n = levels[top].structure.dim;
  for (std::size_t i = 0; i < n; ++i) {
    Mat block = Mat::Zero(total, total);
    for (std::size_t m = 0; m < p.size(); ++m)
      block.block(offset[m], offset[m], levels[m].n, levels[m].n) =
          levels[m].at(to_level(m).col(static_cast<Eigen::Index>(i)));
    rep.images.push_back(LocallyBoundedOperator::from_top(rep.space, rep.space, block, tol));
  }
  rep.algebra = make_algebra(rep.space, rep.images, tol);

  std::vector<Mat> source_maps;
  for (std::size_t l = 0; l < p.size(); ++l) source_maps.push_back(to_level(l));
  std::vector<std::vector<Mat>> image_levels;
  for (const auto& img : rep.images) image_levels.push_back(img.levels());
  rep.report = check_morphism_impl(p, levels[top].structure, source_maps, image_levels, tol);
  return rep;
}

ConcreteLocallyCStarAlgebra spatial_tensor(const ConcreteLocallyCStarAlgebra& a,
                                           const ConcreteLocallyCStarAlgebra& b, Tolerance tol) {
  SpacePtr space = tensor_space(*a.carrier(), *b.carrier());
  std::vector<LocallyBoundedOperator> gens;
  for (const auto& x : a.basis())
    for (const auto& y : b.basis()) gens.push_back(tensor_op(x, y, space, space));
  return make_algebra(space, std::move(gens), tol);
}

double cross_seminorm_residual(const ConcreteLocallyCStarAlgebra& a,
                               const ConcreteLocallyCStarAlgebra& b, const Vec& x, const Vec& y) {
  const LocallyBoundedOperator t = tensor_op(a.element(x), b.element(y));
  double worst = 0.0;
  const std::size_t nb = b.poset().size();
  for (std::size_t i = 0; i < a.poset().size(); ++i)
    for (std::size_t j = 0; j < nb; ++j)
      worst = std::max(worst, std::abs(seminorm(t, i * nb + j) -
                                       algebra_seminorm(a, x, i) * algebra_seminorm(b, y, j)));
  return worst;
}

}  // namespace prostar
