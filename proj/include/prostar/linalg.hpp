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

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace prostar {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Relative rank cutoff shared by eigenvalue truncation, pseudo-inverses and
/// range extraction.
inline constexpr double kRankCutoff = 1e-10;

/// Scale-invariant tolerance: `scale * (1 + magnitude)`.
struct Tolerance {
  double scale = 1e-9;

  double of(double magnitude) const { return scale * (1.0 + magnitude); }
};

// Largest entry modulus; 0 for empty matrices.
double max_abs(const Mat& m);

// Largest singular value; 0 for empty matrices.
double spectral_norm(const Mat& m);

// Singular values in descending order.
Eigen::VectorXd singular_values(const Mat& m);

// Kronecker product with left-factor-major indexing: (i, k) -> i * rows(b) + k.
Mat kron(const Mat& a, const Mat& b);

struct HermitianEigen {
  Eigen::VectorXd values;  // descending unless `ascending` was requested
  Mat vectors;             // columns, phase-normalized
};

// Eigendecomposition of the Hermitian part of `h`. Eigenvalues are sorted
// descending (ascending when `ascending` is set); each eigenvector has its
// first non-negligible coordinate real positive.
HermitianEigen hermitian_eigen(const Mat& h, bool ascending = false);

// Smallest eigenvalue of the Hermitian part; +inf for empty matrices.
double min_eigenvalue(const Mat& h);

// Orthonormal basis of the column space of `a`: left singular vectors whose
// singular value exceeds `cutoff`, in descending singular value order and
// phase-normalized.
Mat orthonormal_range(const Mat& a, double cutoff);

// Number of singular values above `cutoff`.
int numerical_rank(const Mat& a, double cutoff);

// Moore-Penrose pseudo-inverse discarding singular values <= cutoff.
Mat pinv(const Mat& a, double cutoff);

// Make the first coordinate of each column with modulus above 1e-8 (relative
// to the column norm) real and positive.
void normalize_phases(Mat& columns);

// Square root of the positive part of a Hermitian matrix.
Mat psd_sqrt(const Mat& h);

inline Mat hermitian_part(const Mat& h) { return (h + h.adjoint()) / 2.0; }

}  // namespace prostar
