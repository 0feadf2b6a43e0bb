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

#include "prostar/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "prostar/error.hpp"

namespace prostar {
namespace {

double kernel_scale(const OperatorKernel& k) {
  double s = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = 0; j < k.size(); ++j) s = std::max(s, max_abs(k(i, j).top()));
  return s;
}

// Rows and columns of `g` belonging to the chosen point blocks.
Mat principal_blocks(const Mat& g, const std::vector<std::size_t>& pts, Eigen::Index d) {
  const auto n = static_cast<Eigen::Index>(pts.size()) * d;
  Mat out(n, n);
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = 0; b < pts.size(); ++b)
      out.block(a * d, b * d, d, d) = g.block(pts[a] * d, pts[b] * d, d, d);
  return out;
}

bool psd_within(const Mat& g, Tolerance tol) {
  if (g.size() == 0) return true;
  return min_eigenvalue(g) >= -tol.of(spectral_norm(g));
}

}  // namespace

OperatorKernel::OperatorKernel(std::vector<std::string> points, SpacePtr space,
                               std::vector<LocallyBoundedOperator> values)
    : points_(std::move(points)), space_(std::move(space)), values_(std::move(values)) {
  std::set<std::string> seen;
  for (const auto& p : points_)
    if (!seen.insert(p).second)
      throw Error(ErrorCode::DuplicateElement, "repeated kernel point " + p, {p});
  if (values_.size() != points_.size() * points_.size())
    throw Error(ErrorCode::ShapeMismatch, "kernel table must hold m * m values");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const auto& v = values_[i];
    if (!same_space(v.domain(), space_) || !same_space(v.codomain(), space_))
      throw Error(ErrorCode::ShapeMismatch, "kernel value does not act on the kernel space",
                  {points_[i / points_.size()], points_[i % points_.size()]});
  }
}

OperatorKernel OperatorKernel::from_function(
    std::vector<std::string> points, SpacePtr space,
    const std::function<LocallyBoundedOperator(std::size_t, std::size_t)>& k) {
  std::vector<LocallyBoundedOperator> values;
  values.reserve(points.size() * points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j) values.push_back(k(i, j));
  return OperatorKernel(std::move(points), std::move(space), std::move(values));
}

std::size_t OperatorKernel::point_index(std::string_view label) const {
  auto it = std::find(points_.begin(), points_.end(), label);
  if (it == points_.end())
    throw Error(ErrorCode::UnknownElement, "unknown kernel point " + std::string(label),
                {std::string(label)});
  return static_cast<std::size_t>(it - points_.begin());
}

Mat OperatorKernel::gram(std::size_t level) const {
  const Eigen::Index d = space_->dim(level);
  const auto m = static_cast<Eigen::Index>(size());
  Mat g(m * d, m * d);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      g.block(i * d, j * d, d, d) = (*this)(i, j).level(level);
  return g;
}

bool is_hermitian(const OperatorKernel& k, Tolerance tol) {
  const double limit = tol.of(kernel_scale(k));
  for (std::size_t l = 0; l < k.poset().size(); ++l)
    for (std::size_t i = 0; i < k.size(); ++i)
      for (std::size_t j = i; j < k.size(); ++j)
        if (max_abs(k(i, j).level(l).adjoint() - k(j, i).level(l)) > limit) return false;
  return true;
}

bool is_n_positive(const OperatorKernel& k, std::size_t n, Tolerance tol) {
  if (n == 0) throw Error(ErrorCode::ShapeMismatch, "n-positivity needs n >= 1");
  const std::size_t m = k.size();
  const std::size_t r = std::min(n, m);
  for (std::size_t l = 0; l < k.poset().size(); ++l) {
    const Mat g = k.gram(l);
    if (r == m) {
      if (!psd_within(g, tol)) return false;
      continue;
    }
    // Every r-subset; tuples with repeats are compressions of these.
    std::vector<char> mask(m, 0);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(r), 1);
    do {
      std::vector<std::size_t> pts;
      for (std::size_t i = 0; i < m; ++i)
        if (mask[i]) pts.push_back(i);
      if (!psd_within(principal_blocks(g, pts, k.space()->dim(l)), tol)) return false;
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  return true;
}

bool is_positive_semidefinite(const OperatorKernel& k, Tolerance tol) {
  for (std::size_t l = 0; l < k.poset().size(); ++l)
    if (!psd_within(k.gram(l), tol)) return false;
  return true;
}

StarSemigroup::StarSemigroup(std::vector<std::string> elements,
                             std::vector<std::vector<std::size_t>> mult,
                             std::vector<std::size_t> star, std::optional<std::size_t> unit)
    : labels_(std::move(elements)), mult_(std::move(mult)), star_(std::move(star)), unit_(unit) {
  const std::size_t n = labels_.size();
  if (n == 0) throw Error(ErrorCode::InvalidSemigroup, "semigroup has no elements");
  std::set<std::string> seen;
  for (const auto& l : labels_)
    if (!seen.insert(l).second)
      throw Error(ErrorCode::InvalidSemigroup, "repeated semigroup element " + l, {l});
  if (mult_.size() != n || star_.size() != n)
    throw Error(ErrorCode::InvalidSemigroup, "tables must have one row per element");
  for (std::size_t s = 0; s < n; ++s) {
    if (mult_[s].size() != n)
      throw Error(ErrorCode::InvalidSemigroup, "multiplication table is not square", {labels_[s]});
    for (std::size_t t : mult_[s])
      if (t >= n)
        throw Error(ErrorCode::InvalidSemigroup, "product outside the semigroup", {labels_[s]});
    if (star_[s] >= n)
      throw Error(ErrorCode::InvalidSemigroup, "involution outside the semigroup", {labels_[s]});
  }
  if (unit_ && *unit_ >= n) throw Error(ErrorCode::InvalidSemigroup, "unit outside the semigroup");
  for (std::size_t s = 0; s < n; ++s) {
    if (star_[star_[s]] != s)
      throw Error(ErrorCode::InvalidSemigroup, "s** != s", {labels_[s]});
    for (std::size_t t = 0; t < n; ++t) {
      if (star_[mult_[s][t]] != mult_[star_[t]][star_[s]])
        throw Error(ErrorCode::InvalidSemigroup, "(st)* != t* s*", {labels_[s], labels_[t]});
      for (std::size_t u = 0; u < n; ++u)
        if (mult_[mult_[s][t]][u] != mult_[s][mult_[t][u]])
          throw Error(ErrorCode::InvalidSemigroup, "multiplication is not associative",
                      {labels_[s], labels_[t], labels_[u]});
    }
    if (unit_ && (mult_[*unit_][s] != s || mult_[s][*unit_] != s))
      throw Error(ErrorCode::InvalidSemigroup, "unit law fails", {labels_[s]});
  }
  if (unit_ && star_[*unit_] != *unit_)
    throw Error(ErrorCode::InvalidSemigroup, "unit is not self-adjoint", {labels_[*unit_]});
}

StarSemigroup StarSemigroup::trivial() { return StarSemigroup({"e"}, {{0}}, {0}, 0); }

StarSemigroup StarSemigroup::cyclic(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidSemigroup, "cyclic group of order 0");
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> mult(n, std::vector<std::size_t>(n));
  std::vector<std::size_t> star(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(i == 0 ? "e" : "g" + std::to_string(i));
    star[i] = (n - i) % n;
    for (std::size_t j = 0; j < n; ++j) mult[i][j] = (i + j) % n;
  }
  return StarSemigroup(std::move(labels), std::move(mult), std::move(star), 0);
}

StarSemigroup StarSemigroup::klein_four() {
  std::vector<std::vector<std::size_t>> mult(4, std::vector<std::size_t>(4));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) mult[i][j] = i ^ j;
  return StarSemigroup({"e", "a", "b", "ab"}, std::move(mult), {0, 1, 2, 3}, 0);
}

std::size_t StarSemigroup::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end())
    throw Error(ErrorCode::UnknownElement, "unknown semigroup element " + std::string(label),
                {std::string(label)});
  return static_cast<std::size_t>(it - labels_.begin());
}

bool StarSemigroup::is_group() const {
  if (!unit_) return false;
  for (std::size_t s = 0; s < size(); ++s)
    if (mult_[s][star_[s]] != *unit_ || mult_[star_[s]][s] != *unit_) return false;
  return true;
}

SemigroupAction::SemigroupAction(StarSemigroup semigroup, std::size_t points,
                                 std::vector<std::vector<std::size_t>> table)
    : semigroup_(std::move(semigroup)), points_(points), table_(std::move(table)) {
  const std::size_t n = semigroup_.size();
  if (table_.size() != n)
    throw Error(ErrorCode::InvalidAction, "action table needs one row per semigroup element");
  for (std::size_t s = 0; s < n; ++s) {
    if (table_[s].size() != points_)
      throw Error(ErrorCode::InvalidAction, "action row must cover every point",
                  {semigroup_.label(s)});
    for (std::size_t y : table_[s])
      if (y >= points_)
        throw Error(ErrorCode::InvalidAction, "action leaves the point set", {semigroup_.label(s)});
  }
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t x = 0; x < points_; ++x)
        if (table_[semigroup_.mult(s, t)][x] != table_[s][table_[t][x]])
          throw Error(ErrorCode::InvalidAction, "(st)x != s(tx)",
                      {semigroup_.label(s), semigroup_.label(t), std::to_string(x)});
}

Mat SemigroupAction::matrix(std::size_t s) const {
  Mat a = Mat::Zero(static_cast<Eigen::Index>(points_), static_cast<Eigen::Index>(points_));
  for (std::size_t x = 0; x < points_; ++x) a(table_[s][x], x) = 1.0;
  return a;
}

double invariance_residual(const OperatorKernel& k, const SemigroupAction& action) {
  if (action.points() != k.size())
    throw Error(ErrorCode::InvalidAction, "action and kernel have different point sets");
  const StarSemigroup& sg = action.semigroup();
  double worst = 0.0;
  for (std::size_t s = 0; s < sg.size(); ++s)
    for (std::size_t x = 0; x < k.size(); ++x)
      for (std::size_t y = 0; y < k.size(); ++y) {
        const auto& lhs = k(action.apply(s, x), y);
        const auto& rhs = k(x, action.apply(sg.star(s), y));
        for (std::size_t l = 0; l < k.poset().size(); ++l)
          worst = std::max(worst, max_abs(lhs.level(l) - rhs.level(l)));
      }
  return worst;
}

bool is_invariant(const OperatorKernel& k, const SemigroupAction& action, Tolerance tol) {
  return invariance_residual(k, action) <= tol.of(kernel_scale(k));
}

BoundCertificate sznagy_bound(const OperatorKernel& k, const Mat& action, std::size_t level,
                              Tolerance tol) {
  const auto m = static_cast<Eigen::Index>(k.size());
  if (action.rows() != m || action.cols() != m)
    throw Error(ErrorCode::InvalidAction, "action matrix must be m x m");
  const Mat g = k.gram(level);
  const std::string label = k.poset().label(level);
  if (!psd_within(g, tol))
    throw Error(ErrorCode::KernelNotPSD, "Gram matrix has a negative eigenvalue", {label},
                -min_eigenvalue(g));
  const Eigen::Index d = k.space()->dim(level);
  const Mat shift = kron(action, Mat::Identity(d, d));
  const Mat gs = hermitian_part(shift.adjoint() * g * shift);
  BoundCertificate cert;
  if (g.size() == 0) return cert;

  const HermitianEigen eg = hermitian_eigen(g);
  const double top = std::max(eg.values(0), 0.0);
  Eigen::Index r = 0;
  while (r < eg.values.size() && eg.values(r) > kRankCutoff * top && eg.values(r) > 0.0) ++r;
  const Mat u = eg.vectors.leftCols(r);
  const Mat q = Mat::Identity(g.rows(), g.cols()) - u * u.adjoint();
  const Mat outside = hermitian_part(q * gs * q);
  const double limit = tol.of(std::max(spectral_norm(g), spectral_norm(gs)));
  if (spectral_norm(outside) > limit) {
    cert.value = std::numeric_limits<double>::infinity();
    cert.witness = hermitian_eigen(outside).vectors.col(0);
    return cert;
  }
  if (r == 0) return cert;
  Eigen::VectorXd inv_sqrt = eg.values.head(r).cwiseSqrt().cwiseInverse();
  const Mat scaled = inv_sqrt.cast<cplx>().asDiagonal() * (u.adjoint() * gs * u) *
                     inv_sqrt.cast<cplx>().asDiagonal();
  cert.value = std::max(0.0, hermitian_eigen(scaled).values(0));
  return cert;
}

BoundCertificate sznagy_bound(const OperatorKernel& k, const SemigroupAction& action,
                              std::size_t s, std::size_t level, Tolerance tol) {
  if (action.points() != k.size())
    throw Error(ErrorCode::InvalidAction, "action and kernel have different point sets");
  return sznagy_bound(k, action.matrix(s), level, tol);
}

double linear_invariance_residual(const OperatorKernel& k, const Mat& action,
                                  const Mat& star_action) {
  double worst = 0.0;
  for (std::size_t l = 0; l < k.poset().size(); ++l) {
    const Eigen::Index d = k.space()->dim(l);
    const Mat id = Mat::Identity(d, d);
    const Mat g = k.gram(l);
    worst = std::max(worst, max_abs(kron(action, id).adjoint() * g - g * kron(star_action, id)));
  }
  return worst;
}

LocallyBoundedOperator apply_map(const CpMap& phi, const Vec& a) {
  if (static_cast<std::size_t>(a.size()) != phi.images.size())
    throw Error(ErrorCode::ShapeMismatch, "coefficient vector length differs from map domain");
  const std::size_t levels = phi.target->levels();
  std::vector<Mat> out(levels);
  for (std::size_t l = 0; l < levels; ++l) {
    out[l] = Mat::Zero(phi.target->dim(l), phi.target->dim(l));
    for (std::size_t i = 0; i < phi.images.size(); ++i)
      if (a(i) != cplx(0.0)) out[l] += a(i) * phi.images[i].level(l);
  }
  return LocallyBoundedOperator(phi.target, phi.target, std::move(out), Tolerance{1e-7});
}

CpMap kraus_map(const ConcreteLocallyCStarAlgebra& a, const SpacePtr& target,
                const std::vector<LocallyBoundedOperator>& kraus) {
  for (const auto& c : kraus)
    if (!same_space(c.domain(), target) || !same_space(c.codomain(), a.carrier()))
      throw Error(ErrorCode::ShapeMismatch, "Kraus operator must map the target into the carrier");
  CpMap phi{target, {}};
  for (const auto& b : a.basis()) {
    LocallyBoundedOperator sum = LocallyBoundedOperator::zero(target, target);
    for (const auto& c : kraus) sum = add(sum, compose(adjoint(c), compose(b, c)));
    phi.images.push_back(std::move(sum));
  }
  return phi;
}

CpKernel kernel_from_cp_map(const ConcreteLocallyCStarAlgebra& a, const CpMap& phi,
                            const std::vector<Vec>& points,
                            const std::vector<std::string>& labels, bool require_action) {
  if (points.empty()) throw Error(ErrorCode::PointsNotSpanning, "no points given");
  if (labels.size() != points.size())
    throw Error(ErrorCode::PointsNotSpanning, "one label per point required");
  if (phi.images.size() != a.dim())
    throw Error(ErrorCode::ShapeMismatch, "map must give one image per algebra basis element");
  for (std::size_t i = 0; i < points.size(); ++i)
    if (static_cast<std::size_t>(points[i].size()) != a.dim())
      throw Error(ErrorCode::PointsNotSpanning, "point is not a coefficient vector over the basis",
                  {labels[i]});

  std::vector<LocallyBoundedOperator> values;
  for (const auto& x : points)
    for (const auto& y : points) values.push_back(apply_map(phi, a.multiply(a.adjoint(x), y)));
  OperatorKernel k(labels, phi.target, std::move(values));

  const auto m = static_cast<Eigen::Index>(points.size());
  const auto n = static_cast<Eigen::Index>(a.dim());
  Mat p(n, m);
  for (Eigen::Index j = 0; j < m; ++j) p.col(j) = points[j];
  const Mat p_pinv = pinv(p, kRankCutoff * std::max(1.0, spectral_norm(p)));

  std::vector<Mat> left;
  bool closed = true;
  for (Eigen::Index i = 0; i < n && closed; ++i) {
    Mat act(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      const Vec prod = a.multiply(a.structure().unit_vector(i), points[j]);
      const Vec c = p_pinv * prod;
      if ((p * c - prod).norm() > 1e-8 * (1.0 + prod.norm())) {
        if (require_action)
          throw Error(ErrorCode::ProductOutsideSpan, "b x leaves the span of the points",
                      {std::to_string(i), labels[j]});
        closed = false;
        break;
      }
      act.col(j) = c;
    }
    if (closed) left.push_back(std::move(act));
  }
  if (!closed) left.clear();

  // Set-stability: every product and adjoint of points is again a point.
  auto find_point = [&](const Vec& v) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < points.size(); ++i)
      if ((points[i] - v).norm() <= 1e-8 * (1.0 + v.norm())) return i;
    return std::nullopt;
  };
  std::optional<SemigroupAction> stable;
  const std::size_t ms = points.size();
  std::vector<std::vector<std::size_t>> mult(ms, std::vector<std::size_t>(ms));
  std::vector<std::size_t> star(ms);
  bool stable_ok = true;
  for (std::size_t s = 0; s < ms && stable_ok; ++s) {
    auto st = find_point(a.adjoint(points[s]));
    if (!st) stable_ok = false;
    else star[s] = *st;
    for (std::size_t t = 0; t < ms && stable_ok; ++t) {
      auto pr = find_point(a.multiply(points[s], points[t]));
      if (!pr) stable_ok = false;
      else mult[s][t] = *pr;
    }
  }
  if (stable_ok) {
    std::optional<std::size_t> unit;
    if (auto u = a.unit()) unit = find_point(*u);
    try {
      StarSemigroup sg(labels, mult, star, unit);
      stable.emplace(std::move(sg), ms, mult);
    } catch (const Error&) {
      stable.reset();
    }
  }
  return CpKernel{std::move(k), std::move(left), std::move(stable)};
}

}  // namespace prostar
