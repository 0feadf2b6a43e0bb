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

#include "prostar/locop.hpp"

#include "prostar/error.hpp"

namespace prostar {
namespace {

void require_same_poset(const LocallyHilbertSpace& a, const LocallyHilbertSpace& b) {
  if (!(a.poset() == b.poset()))
    throw Error(ErrorCode::PosetMismatch, "spaces are indexed by different posets");
}

void require_shapes(const LocallyHilbertSpace& domain, const LocallyHilbertSpace& codomain,
                    const std::vector<Mat>& levels) {
  require_same_poset(domain, codomain);
  if (levels.size() != domain.levels())
    throw Error(ErrorCode::ShapeMismatch, "one matrix per poset element required");
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i].rows() != codomain.dim(i) || levels[i].cols() != domain.dim(i))
      throw Error(ErrorCode::ShapeMismatch,
                  "level matrix shape differs from (dim K, dim H)", {domain.poset().label(i)});
}

double magnitude(const std::vector<Mat>& levels) {
  double m = 0.0;
  for (const auto& l : levels) m = std::max(m, max_abs(l));
  return m;
}

}  // namespace

CoherenceReport coherence_residuals(const LocallyHilbertSpace& domain,
                                    const LocallyHilbertSpace& codomain,
                                    const std::vector<Mat>& levels) {
  CoherenceReport r;
  for (auto [l, m] : domain.poset().strict_pairs()) {
    const Mat jh = domain.embedding(m, l);
    const Mat jk = codomain.embedding(m, l);
    r.coherence = std::max(r.coherence, max_abs(levels[m] * jh - jk * levels[l]));
    r.adjoint_coherence =
        std::max(r.adjoint_coherence, max_abs(levels[m].adjoint() * jk - jh * levels[l].adjoint()));
  }
  return r;
}

LocallyBoundedOperator::LocallyBoundedOperator(Unchecked, SpacePtr domain, SpacePtr codomain,
                                               std::vector<Mat> levels)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), levels_(std::move(levels)) {
  report_ = coherence_residuals(*domain_, *codomain_, levels_);
}

LocallyBoundedOperator::LocallyBoundedOperator(SpacePtr domain, SpacePtr codomain,
                                               std::vector<Mat> levels, Tolerance tol)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), levels_(std::move(levels)) {
  require_shapes(*domain_, *codomain_, levels_);
  const double limit = tol.of(magnitude(levels_));
  const DirectedPoset& p = domain_->poset();
  for (auto [l, m] : p.strict_pairs()) {
    const Mat jh = domain_->embedding(m, l);
    const Mat jk = codomain_->embedding(m, l);
    const double c = max_abs(levels_[m] * jh - jk * levels_[l]);
    if (c > limit)
      throw Error(ErrorCode::CoherenceViolation,
                  "T_" + p.label(m) + " J = J T_" + p.label(l) + " fails",
                  {p.label(l), p.label(m)}, c);
    const double a = max_abs(levels_[m].adjoint() * jk - jh * levels_[l].adjoint());
    if (a > limit)
      throw Error(ErrorCode::AdjointCoherenceViolation,
                  "T_" + p.label(m) + "* J = J T_" + p.label(l) + "* fails",
                  {p.label(l), p.label(m)}, a);
    report_.coherence = std::max(report_.coherence, c);
    report_.adjoint_coherence = std::max(report_.adjoint_coherence, a);
  }
}

LocallyBoundedOperator LocallyBoundedOperator::identity(const SpacePtr& space) {
  std::vector<Mat> levels;
  for (std::size_t i = 0; i < space->levels(); ++i)
    levels.push_back(Mat::Identity(space->dim(i), space->dim(i)));
  return LocallyBoundedOperator(space, space, std::move(levels));
}

LocallyBoundedOperator LocallyBoundedOperator::zero(const SpacePtr& domain,
                                                    const SpacePtr& codomain) {
  std::vector<Mat> levels;
  for (std::size_t i = 0; i < domain->levels(); ++i)
    levels.push_back(Mat::Zero(codomain->dim(i), domain->dim(i)));
  return LocallyBoundedOperator(domain, codomain, std::move(levels));
}

LocallyBoundedOperator LocallyBoundedOperator::from_top(const SpacePtr& domain,
                                                        const SpacePtr& codomain, const Mat& top,
                                                        Tolerance tol) {
  require_same_poset(*domain, *codomain);
  if (top.rows() != codomain->ambient_dim() || top.cols() != domain->ambient_dim())
    throw Error(ErrorCode::ShapeMismatch, "top-level matrix has the wrong shape");
  std::vector<Mat> levels;
  for (std::size_t i = 0; i < domain->levels(); ++i)
    levels.push_back(codomain->embedding(i).adjoint() * top * domain->embedding(i));
  return LocallyBoundedOperator(domain, codomain, std::move(levels), tol);
}

LocallyBoundedOperator check_locally_bounded(const SpacePtr& domain, const SpacePtr& codomain,
                                             std::vector<Mat> levels, Tolerance tol) {
  return LocallyBoundedOperator(domain, codomain, std::move(levels), tol);
}

LocallyBoundedOperator compose(const LocallyBoundedOperator& t, const LocallyBoundedOperator& s) {
  require_same_poset(*t.domain(), *s.domain());
  if (!same_space(s.codomain(), t.domain()))
    throw Error(ErrorCode::ShapeMismatch, "codomain of the right factor is not the domain of the left");
  std::vector<Mat> levels;
  for (std::size_t i = 0; i < t.levels().size(); ++i) levels.push_back(t.level(i) * s.level(i));
  return LocallyBoundedOperator(s.domain(), t.codomain(), std::move(levels));
}

LocallyBoundedOperator adjoint(const LocallyBoundedOperator& t) {
  std::vector<Mat> levels;
  for (const auto& l : t.levels()) levels.push_back(l.adjoint());
  // The two coherence conditions swap under the adjoint.
  return LocallyBoundedOperator(LocallyBoundedOperator::Unchecked{}, t.codomain(), t.domain(),
                                std::move(levels));
}

LocallyBoundedOperator add(const LocallyBoundedOperator& t, const LocallyBoundedOperator& s) {
  require_same_poset(*t.domain(), *s.domain());
  if (!same_space(t.domain(), s.domain()) || !same_space(t.codomain(), s.codomain()))
    throw Error(ErrorCode::ShapeMismatch, "summands act between different spaces");
  std::vector<Mat> levels;
  for (std::size_t i = 0; i < t.levels().size(); ++i) levels.push_back(t.level(i) + s.level(i));
  return LocallyBoundedOperator(t.domain(), t.codomain(), std::move(levels));
}

LocallyBoundedOperator scale(cplx c, const LocallyBoundedOperator& t) {
  std::vector<Mat> levels;
  for (const auto& l : t.levels()) levels.push_back(c * l);
  return LocallyBoundedOperator(t.domain(), t.codomain(), std::move(levels));
}

LocalVector apply(const LocallyBoundedOperator& t, const LocalVector& v) {
  if (v.level >= t.levels().size())
    throw Error(ErrorCode::UnknownElement, "vector level outside the poset");
  const Mat& m = t.level(v.level);
  if (v.coords.size() != m.cols())
    throw Error(ErrorCode::ShapeMismatch, "vector length differs from level dimension",
                {t.poset().label(v.level)});
  return LocalVector{v.level, m * v.coords};
}

double seminorm(const LocallyBoundedOperator& t, std::size_t mu) {
  return spectral_norm(t.level(mu));
}

double seminorm(const LocallyBoundedOperator& t, std::string_view mu) {
  return seminorm(t, t.poset().index_of(mu));
}

namespace {
void require_endomorphism(const LocallyBoundedOperator& t) {
  if (!t.is_endomorphism())
    throw Error(ErrorCode::NotEndomorphism, "operator does not map a space to itself");
}
}  // namespace

bool is_locally_selfadjoint(const LocallyBoundedOperator& t, Tolerance tol) {
  require_endomorphism(t);
  for (const auto& l : t.levels())
    if (max_abs(l - l.adjoint()) > tol.of(max_abs(l))) return false;
  return true;
}

bool is_locally_positive(const LocallyBoundedOperator& t, Tolerance tol) {
  if (!is_locally_selfadjoint(t, tol)) return false;
  for (const auto& l : t.levels())
    if (min_eigenvalue(l) < -tol.of(spectral_norm(l))) return false;
  return true;
}

bool is_locally_unitary(const LocallyBoundedOperator& t, Tolerance tol) {
  require_endomorphism(t);
  for (const auto& l : t.levels()) {
    const Mat id = Mat::Identity(l.rows(), l.cols());
    if (max_abs(l.adjoint() * l - id) > tol.of(1.0)) return false;
    if (max_abs(l * l.adjoint() - id) > tol.of(1.0)) return false;
  }
  return true;
}

LocallyBoundedOperator positive_root(const LocallyBoundedOperator& t, Tolerance tol) {
  if (!is_locally_positive(t, tol))
    throw Error(ErrorCode::NotPositive, "operator is not locally positive");
  std::vector<Mat> levels;
  for (const auto& l : t.levels()) levels.push_back(psd_sqrt(l));
  return LocallyBoundedOperator(t.domain(), t.codomain(), std::move(levels), Tolerance{1e-7});
}

LocallyBoundedOperator tensor_op(const LocallyBoundedOperator& t, const LocallyBoundedOperator& s,
                                 const SpacePtr& domain, const SpacePtr& codomain) {
  std::vector<Mat> levels;
  for (std::size_t i = 0; i < t.levels().size(); ++i)
    for (std::size_t j = 0; j < s.levels().size(); ++j)
      levels.push_back(kron(t.level(i), s.level(j)));
  return LocallyBoundedOperator(domain, codomain, std::move(levels));
}

LocallyBoundedOperator tensor_op(const LocallyBoundedOperator& t, const LocallyBoundedOperator& s) {
  SpacePtr domain = tensor_space(*t.domain(), *s.domain());
  SpacePtr codomain = (t.domain() == t.codomain() && s.domain() == s.codomain())
                          ? domain
                          : tensor_space(*t.codomain(), *s.codomain());
  return tensor_op(t, s, domain, codomain);
}

double distance(const LocallyBoundedOperator& t, const LocallyBoundedOperator& s) {
  if (t.levels().size() != s.levels().size())
    throw Error(ErrorCode::PosetMismatch, "operators live over different posets");
  double d = 0.0;
  for (std::size_t i = 0; i < t.levels().size(); ++i) {
    if (t.level(i).rows() != s.level(i).rows() || t.level(i).cols() != s.level(i).cols())
      throw Error(ErrorCode::ShapeMismatch, "operators have different level shapes");
    d = std::max(d, max_abs(t.level(i) - s.level(i)));
  }
  return d;
}

std::vector<Mat> coherent_operator_basis(const LocallyHilbertSpace& domain,
                                         const LocallyHilbertSpace& codomain) {
  require_same_poset(domain, codomain);
  const int dh = domain.ambient_dim();
  const int dk = codomain.ambient_dim();
  std::vector<Mat> out;
  if (dh == 0 || dk == 0) return out;

  if (domain.is_coordinate() && codomain.is_coordinate()) {
    auto signature = [](const LocallyHilbertSpace& s, int index) {
      std::vector<bool> sig;
      for (std::size_t l = 0; l < s.levels(); ++l) sig.push_back(index < s.dim(l));
      return sig;
    };
    for (int r = 0; r < dk; ++r)
      for (int c = 0; c < dh; ++c)
        if (signature(codomain, r) == signature(domain, c)) {
          Mat e = Mat::Zero(dk, dh);
          e(r, c) = 1.0;
          out.push_back(std::move(e));
        }
    return out;
  }

  // vec(T P_λ − Q_λ T) = ((P_λ)ᵀ ⊗ I − I ⊗ Q_λ) vec(T), column-major vec.
  const Eigen::Index n = static_cast<Eigen::Index>(dh) * dk;
  Mat constraints(static_cast<Eigen::Index>(domain.levels()) * n, n);
  for (std::size_t l = 0; l < domain.levels(); ++l) {
    const Mat p = domain.embedding(l) * domain.embedding(l).adjoint();
    const Mat q = codomain.embedding(l) * codomain.embedding(l).adjoint();
    constraints.middleRows(static_cast<Eigen::Index>(l) * n, n) =
        kron(p.transpose(), Mat::Identity(dk, dk)) - kron(Mat::Identity(dh, dh), q);
  }
  Eigen::JacobiSVD<Mat> svd(constraints, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cutoff = 1e-9 * (1.0 + (s.size() ? s(0) : 0.0));
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  Mat null = svd.matrixV().rightCols(n - rank);
  normalize_phases(null);
  for (Eigen::Index c = 0; c < null.cols(); ++c)
    out.push_back(Eigen::Map<const Mat>(null.col(c).data(), dk, dh));
  return out;
}

}  // namespace prostar
