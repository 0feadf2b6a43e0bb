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

#include "prostar/linalg.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

namespace prostar {

double max_abs(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

Eigen::VectorXd singular_values(const Mat& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues();
}

double spectral_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

void normalize_phases(Mat& columns) {
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    const double norm = columns.col(c).norm();
    if (norm == 0.0) continue;
    for (Eigen::Index r = 0; r < columns.rows(); ++r) {
      const cplx z = columns(r, c);
      if (std::abs(z) > 1e-8 * norm) {
        columns.col(c) *= std::conj(z) / std::abs(z);
        columns(r, c) = cplx(columns(r, c).real(), 0.0);
        break;
      }
    }
  }
}

HermitianEigen hermitian_eigen(const Mat& h, bool ascending) {
  HermitianEigen out;
  const Eigen::Index n = h.rows();
  if (n == 0) {
    out.values = Eigen::VectorXd();
    out.vectors = Mat(0, 0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h));
  // Eigen returns ascending order.
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (!ascending) std::reverse(order.begin(), order.end());
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = es.eigenvalues()(order[k]);
    out.vectors.col(k) = es.eigenvectors().col(order[k]);
  }
  normalize_phases(out.vectors);
  return out;
}

double min_eigenvalue(const Mat& h) {
  if (h.rows() == 0) return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Mat orthonormal_range(const Mat& a, double cutoff) {
  if (a.size() == 0) return Mat(a.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cutoff) ++r;
  Mat u = svd.matrixU().leftCols(r);
  normalize_phases(u);
  return u;
}

int numerical_rank(const Mat& a, double cutoff) {
  if (a.size() == 0) return 0;
  const Eigen::VectorXd s = singular_values(a);
  return static_cast<int>((s.array() > cutoff).count());
}

Mat pinv(const Mat& a, double cutoff) {
  if (a.size() == 0) return Mat::Zero(a.cols(), a.rows());
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.cast<cplx>().asDiagonal() * svd.matrixU().adjoint();
}

Mat psd_sqrt(const Mat& h) {
  if (h.rows() == 0) return Mat(0, 0);
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h));
  Eigen::VectorXd d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace prostar
