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

// Test-side generators and brute-force oracles. Nothing here calls the
// library's factorization, bound or dilation code; the oracles are
// independent reimplementations used to cross-check it.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "prostar/csmodule.hpp"
#include "prostar/error.hpp"
#include "prostar/kernel.hpp"
#include "prostar/localg.hpp"
#include "prostar/lochilbert.hpp"
#include "prostar/locop.hpp"
#include "prostar/poset.hpp"

namespace prostar::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  bool coin(double p = 0.5) { return uniform() < p; }
  cplx gaussian() { return {normal(), normal()}; }

  Mat gaussian(Eigen::Index rows, Eigen::Index cols) {
    Mat m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = gaussian();
    return m;
  }

  Vec gaussian_vector(Eigen::Index n) { return gaussian(n, 1).col(0); }

  // Haar-distributed unitary via QR with phase correction.
  Mat unitary(Eigen::Index n) {
    if (n == 0) return Mat(0, 0);
    Eigen::HouseholderQR<Mat> qr(gaussian(n, n));
    Mat q = qr.householderQ();
    const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = std::abs(r(i, i));
      if (a > 0) q.col(i) *= r(i, i) / a;
    }
    return q;
  }

  std::vector<std::size_t> permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), engine_);
    return p;
  }

 private:
  std::mt19937_64 engine_;
};

// Code of the prostar::Error thrown by f, or nullopt when nothing is thrown.
template <class F>
std::optional<ErrorCode> error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline Mat matrix_unit(int n, int i, int j) {
  Mat e = Mat::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

inline double op_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}

inline double entry_max(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------- posets

inline DirectedPoset random_poset(Rng& rng) {
  if (rng.coin(0.25)) return diamond_poset();
  return chain_poset(static_cast<std::size_t>(rng.integer(1, 4)));
}

// ---------------------------------------------------------------- spaces

/// A locally Hilbert space whose levels are spans of rotated coordinate
/// subsets: H_λ = U · span{e_i : λ ∈ sig(i)}, with H_top = everything.
struct TestSpace {
  SpacePtr space;
  Mat rotation;                     // U
  std::vector<unsigned> signature;  // per coordinate, bitmask of levels containing it
};

inline TestSpace make_test_space(const DirectedPoset& p, std::vector<unsigned> signature,
                                 Mat rotation) {
  const auto n = static_cast<Eigen::Index>(signature.size());
  std::vector<Mat> iso;
  for (std::size_t l = 0; l < p.size(); ++l) {
    if (l == p.top()) {
      iso.push_back(Mat::Identity(n, n));
      continue;
    }
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < n; ++i)
      if (signature[static_cast<std::size_t>(i)] & (1u << l)) cols.push_back(i);
    Mat j(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
      j.col(static_cast<Eigen::Index>(c)) = rotation.col(cols[c]);
    iso.push_back(std::move(j));
  }
  TestSpace t;
  t.space = std::make_shared<const LocallyHilbertSpace>(
      LocallyHilbertSpace::from_embeddings(p, std::move(iso)));
  t.rotation = std::move(rotation);
  t.signature = std::move(signature);
  return t;
}

// Random up-set of the poset that contains the maximum.
inline unsigned random_upset(Rng& rng, const DirectedPoset& p) {
  unsigned seed = 1u << p.top();
  for (std::size_t l = 0; l < p.size(); ++l)
    if (rng.coin(0.5)) seed |= 1u << l;
  unsigned up = 0;
  for (std::size_t l = 0; l < p.size(); ++l)
    for (std::size_t m = 0; m < p.size(); ++m)
      if ((seed & (1u << m)) && p.leq(m, l)) up |= 1u << l;
  return up;
}

// Top dimension in [1, max_dim]; coordinate 0 lives at every level so all
// dims are positive. `rotate` conjugates every non-top level by a unitary.
inline TestSpace random_space(Rng& rng, const DirectedPoset& p, int max_dim = 3,
                              bool rotate = true) {
  const int n = rng.integer(1, max_dim);
  std::vector<unsigned> sig(static_cast<std::size_t>(n));
  sig[0] = (1u << p.size()) - 1;
  for (int i = 1; i < n; ++i) sig[static_cast<std::size_t>(i)] = random_upset(rng, p);
  Mat u = rotate ? rng.unitary(n) : Mat(Mat::Identity(n, n));
  return make_test_space(p, std::move(sig), std::move(u));
}

// Wraps a space whose levels are coordinate subsets (such as a
// Gelfand-Naimark space) so random coherent maps can target it.
inline TestSpace coordinate_test_space(const SpacePtr& space) {
  TestSpace t{space, Mat::Identity(space->ambient_dim(), space->ambient_dim()), {}};
  for (Eigen::Index i = 0; i < space->ambient_dim(); ++i) {
    unsigned sig = 0;
    for (std::size_t l = 0; l < space->levels(); ++l) {
      const Mat& j = space->embedding(l);
      if (j.cols() > 0 && j.row(i).cwiseAbs().maxCoeff() > 0.5) sig |= 1u << l;
    }
    t.signature.push_back(sig);
  }
  return t;
}

// ---------------------------------------------------------------- operators

// Top matrix of a random coherent operator: coordinates may only couple when
// they live at exactly the same levels, which is what both coherence conditions force.
inline Mat random_coherent_top(Rng& rng, const TestSpace& dom, const TestSpace& cod) {
  const auto rows = static_cast<Eigen::Index>(cod.signature.size());
  const auto cols = static_cast<Eigen::Index>(dom.signature.size());
  Mat m = Mat::Zero(rows, cols);
  for (Eigen::Index k = 0; k < rows; ++k)
    for (Eigen::Index i = 0; i < cols; ++i)
      if (cod.signature[static_cast<std::size_t>(k)] == dom.signature[static_cast<std::size_t>(i)])
        m(k, i) = rng.gaussian();
  return cod.rotation * m * dom.rotation.adjoint();
}

inline LocallyBoundedOperator random_coherent(Rng& rng, const TestSpace& dom,
                                              const TestSpace& cod) {
  return LocallyBoundedOperator::from_top(dom.space, cod.space, random_coherent_top(rng, dom, cod));
}

// ---------------------------------------------------------------- kernels

// k(x, y) = F_x* F_y with random coherent F_x : H -> K. Some F_x are zeroed
// or made parallel to earlier ones to produce rank deficiency.
inline OperatorKernel random_psd_kernel(Rng& rng, const TestSpace& h, std::size_t m,
                                        int aux_max_dim = 3) {
  const TestSpace k = random_space(rng, h.space->poset(), aux_max_dim);
  std::vector<LocallyBoundedOperator> f;
  for (std::size_t x = 0; x < m; ++x) {
    const double r = rng.uniform();
    if (r < 0.1) {
      f.push_back(LocallyBoundedOperator::zero(h.space, k.space));
    } else if (r < 0.2 && !f.empty()) {
      f.push_back(scale(rng.gaussian(), f[static_cast<std::size_t>(rng.integer(0, static_cast<int>(f.size()) - 1))]));
    } else {
      f.push_back(random_coherent(rng, h, k));
    }
  }
  std::vector<std::string> pts;
  for (std::size_t x = 0; x < m; ++x) pts.push_back("x" + std::to_string(x + 1));
  return OperatorKernel::from_function(pts, h.space, [&](std::size_t i, std::size_t j) {
    return compose(adjoint(f[i]), f[j]);
  });
}

inline OperatorKernel scalar_kernel(const Mat& c, const SpacePtr& space) {
  std::vector<std::string> pts;
  for (Eigen::Index x = 0; x < c.rows(); ++x) pts.push_back("x" + std::to_string(x + 1));
  const auto id = LocallyBoundedOperator::identity(space);
  return OperatorKernel::from_function(pts, space, [&](std::size_t i, std::size_t j) {
    return scale(c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), id);
  });
}

inline SpacePtr singleton_space(int dim) {
  return std::make_shared<const LocallyHilbertSpace>(
      LocallyHilbertSpace::coordinate(singleton_poset(), {dim}));
}

// Block Gram assembled directly from the kernel values at one level.
inline Mat gram_oracle(const OperatorKernel& k, std::size_t level) {
  const std::size_t m = k.size();
  const Eigen::Index d = k.space()->dim(level);
  Mat g = Mat::Zero(static_cast<Eigen::Index>(m) * d, static_cast<Eigen::Index>(m) * d);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      g.block(static_cast<Eigen::Index>(i) * d, static_cast<Eigen::Index>(j) * d, d, d) =
          k(i, j).level(level);
  return g;
}

// ---------------------------------------------------------------- factorization oracles

/// G ≈ L L* by diagonal-pivoted Cholesky, stopping when the largest
/// remaining pivot drops below rel · (largest diagonal).
struct CholeskyFactor {
  Mat L;  // n x rank
  int rank = 0;
};

inline CholeskyFactor pivoted_cholesky(const Mat& g, double rel = 1e-10) {
  const Eigen::Index n = g.rows();
  Mat a = (g + g.adjoint()) / 2.0;
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Mat l = Mat::Zero(n, n);
  double first = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) first = std::max(first, a(i, i).real());
  int rank = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index piv = k;
    double best = -1.0;
    for (Eigen::Index i = k; i < n; ++i) {
      double d = a(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(i)]).real();
      for (Eigen::Index c = 0; c < k; ++c) d -= std::norm(l(perm[static_cast<std::size_t>(i)], c));
      if (d > best) {
        best = d;
        piv = i;
      }
    }
    if (first <= 0.0 || best <= rel * first) break;
    std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(piv)]);
    const Eigen::Index p = perm[static_cast<std::size_t>(k)];
    const double root = std::sqrt(best);
    l(p, k) = root;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const Eigen::Index q = perm[static_cast<std::size_t>(i)];
      cplx s = a(q, p);
      for (Eigen::Index c = 0; c < k; ++c) s -= l(q, c) * std::conj(l(p, c));
      l(q, k) = s / root;
    }
    ++rank;
  }
  return {l.leftCols(rank), rank};
}

// Rank by Hermitian eigenvalues above rel · λ_max.
inline int oracle_rank(const Mat& g, double rel = 1e-10) {
  if (g.size() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Mat> es((g + g.adjoint()) / 2.0);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  if (top == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > rel * top) ++r;
  return r;
}

// Least c with Gs ≼ c G: generalized eigenproblem on range(G) through the
// Cholesky factor, infinity when Gs leaks outside range(G).
inline double oracle_bound(const Mat& g, const Mat& gs, double tol = 1e-9) {
  const CholeskyFactor f = pivoted_cholesky(g, 1e-12);
  const double scale = 1.0 + std::max(entry_max(g), entry_max(gs));
  const Eigen::Index n = g.rows();
  if (f.rank == 0) return entry_max(gs) <= tol * scale ? 0.0 : std::numeric_limits<double>::infinity();
  const Mat gram = f.L.adjoint() * f.L;
  const Mat lplus = gram.ldlt().solve(f.L.adjoint());  // rank x n
  const Mat proj = f.L * lplus;
  const Mat out = Mat::Identity(n, n) - proj;
  if (op_norm(out * gs * out) > 1e-6 * scale) return std::numeric_limits<double>::infinity();
  const Mat c = lplus * gs * lplus.adjoint();
  Eigen::SelfAdjointEigenSolver<Mat> es((c + c.adjoint()) / 2.0);
  return std::max(0.0, es.eigenvalues().maxCoeff());
}

// Shifted Gram for a map on points: block (i, j) = k_λ(s·x_i, s·x_j).
inline Mat shifted_gram_oracle(const OperatorKernel& k, const std::vector<std::size_t>& map,
                               std::size_t level) {
  const std::size_t m = k.size();
  const Eigen::Index d = k.space()->dim(level);
  Mat g = Mat::Zero(static_cast<Eigen::Index>(m) * d, static_cast<Eigen::Index>(m) * d);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      g.block(static_cast<Eigen::Index>(i) * d, static_cast<Eigen::Index>(j) * d, d, d) =
          k(map[i], map[j]).level(level);
  return g;
}

// ---------------------------------------------------------------- group actions

struct GroupCase {
  StarSemigroup group;
  std::vector<std::vector<std::size_t>> table;  // [g][x]
};

inline std::vector<std::size_t> compose_perm(const std::vector<std::size_t>& a,
                                             const std::vector<std::size_t>& b) {
  std::vector<std::size_t> c(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) c[x] = a[b[x]];
  return c;
}

inline std::vector<std::size_t> identity_perm(std::size_t m) {
  std::vector<std::size_t> p(m);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

inline std::vector<std::size_t> perm_power(const std::vector<std::size_t>& p, std::size_t k) {
  auto r = identity_perm(p.size());
  for (std::size_t i = 0; i < k; ++i) r = compose_perm(p, r);
  return r;
}

// Random permutation with σ^order = id, found by rejection; identity fallback.
inline std::vector<std::size_t> permutation_of_order(Rng& rng, std::size_t m, std::size_t order) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    auto p = rng.permutation(m);
    if (perm_power(p, order) == identity_perm(m)) return p;
  }
  return identity_perm(m);
}

// A random group of order ≤ 4 acting by permutations on m points.
inline GroupCase random_group_action(Rng& rng, std::size_t m) {
  const int kind = rng.integer(0, 4);
  if (kind == 0) return {StarSemigroup::trivial(), {identity_perm(m)}};
  if (kind <= 3) {
    const std::size_t n = static_cast<std::size_t>(kind) + 1;
    const auto sigma = permutation_of_order(rng, m, n);
    GroupCase c{StarSemigroup::cyclic(n), {}};
    for (std::size_t i = 0; i < n; ++i) c.table.push_back(perm_power(sigma, i));
    return c;
  }
  std::vector<std::size_t> a = identity_perm(m), b = identity_perm(m);
  for (int attempt = 0; attempt < 400; ++attempt) {
    auto p = permutation_of_order(rng, m, 2);
    auto q = permutation_of_order(rng, m, 2);
    if (compose_perm(p, q) == compose_perm(q, p)) {
      a = p;
      b = q;
      break;
    }
  }
  GroupCase c{StarSemigroup::klein_four(), {}};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) c.table.push_back(compose_perm(perm_power(a, i), perm_power(b, j)));
  return c;
}

// k(x, y) = Σ_g k0(g·x, g·y): invariant under any group acting by the table.
inline OperatorKernel symmetrize(const OperatorKernel& k0, const GroupCase& g) {
  return OperatorKernel::from_function(k0.points(), k0.space(), [&](std::size_t i, std::size_t j) {
    LocallyBoundedOperator acc = LocallyBoundedOperator::zero(k0.space(), k0.space());
    for (const auto& perm : g.table) acc = add(acc, k0(perm[i], perm[j]));
    return acc;
  });
}

// ---------------------------------------------------------------- algebras

// M_n over a chain of length `levels`: every level holds M_n and every
// connecting map is the identity, so H_λ = ⊕_{μ≤λ} C^n and π is an ampliation.
inline GelfandNaimarkRep matrix_algebra_over_chain(int n, std::size_t levels) {
  MatrixProjectiveSystem sys{chain_poset(levels), {}, {}};
  std::vector<Mat> units;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) units.push_back(matrix_unit(n, i, j));
  sys.bases.assign(levels, units);
  for (std::size_t l = 0; l + 1 < levels; ++l)
    sys.connecting[{l, l + 1}] = Mat::Identity(n * n, n * n);
  return gelfand_naimark_rep(sys);
}

// Top matrix of an algebra element, evaluated independently from the basis.
inline Mat algebra_top(const ConcreteLocallyCStarAlgebra& a, const Vec& c) {
  Mat m = Mat::Zero(a.carrier()->ambient_dim(), a.carrier()->ambient_dim());
  for (std::size_t i = 0; i < a.dim(); ++i) m += c(static_cast<Eigen::Index>(i)) * a.basis()[i].top();
  return m;
}

// ---------------------------------------------------------------- modules

/// A concrete module of block columns H -> H^r over a matrix algebra on H.
struct ModuleCase {
  GelfandNaimarkRep rep;
  SpacePtr codomain;
  std::vector<LocallyBoundedOperator> elements;
};

// K = C^r ⊗ H with ambient isometries I_r ⊗ J_λ.
inline SpacePtr amplified_space(const LocallyHilbertSpace& h, int r) {
  std::vector<Mat> iso;
  for (std::size_t l = 0; l < h.levels(); ++l)
    iso.push_back(kron(Mat::Identity(r, r), h.embedding(l)));
  return std::make_shared<const LocallyHilbertSpace>(
      LocallyHilbertSpace::from_embeddings(h.poset(), std::move(iso)));
}

// Generators X·E_11, X·E_12 (optionally their sum) for n = 2, with X a random
// stack of r algebra elements; random v ⊗ I for n = 1. Both spans are closed
// under the right action of the algebra.
inline ModuleCase random_module_case(Rng& rng, int n, std::size_t levels, int r) {
  ModuleCase mc{matrix_algebra_over_chain(n, levels), {}, {}};
  const auto& alg = mc.rep.algebra;
  const SpacePtr& h = mc.rep.space;
  mc.codomain = amplified_space(*h, r);
  const Eigen::Index d = h->ambient_dim();
  if (n == 1) {
    const int count = rng.integer(1, 3);
    for (int g = 0; g < count; ++g) {
      const Vec v = rng.gaussian_vector(r);
      mc.elements.push_back(LocallyBoundedOperator::from_top(
          h, mc.codomain, kron(v, Mat::Identity(d, d))));
    }
    return mc;
  }
  Mat x(static_cast<Eigen::Index>(r) * d, d);
  for (int b = 0; b < r; ++b)
    x.block(b * d, 0, d, d) = algebra_top(alg, rng.gaussian_vector(static_cast<Eigen::Index>(alg.dim())));
  // Images of the top basis are ordered as the matrix units E_00, E_01, E_10, E_11.
  const Mat e11 = mc.rep.images[0].top();
  const Mat e12 = mc.rep.images[1].top();
  mc.elements.push_back(LocallyBoundedOperator::from_top(h, mc.codomain, x * e11));
  mc.elements.push_back(LocallyBoundedOperator::from_top(h, mc.codomain, x * e12));
  if (rng.coin(0.5))
    mc.elements.push_back(LocallyBoundedOperator::from_top(h, mc.codomain, x * (e11 + e12)));
  return mc;
}

}  // namespace prostar::testing
