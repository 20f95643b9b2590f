/*
 * Copyright 2026 The mdlsys Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MDLSYS_NUMERICS_HPP
#define MDLSYS_NUMERICS_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace mdlsys {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Tuple = std::vector<Mat>;

inline constexpr double kDefaultTol = 1e-9;

// Relative tolerance scaled by a norm: tol * max(1, scale).
double scaled_tol(double tol, double scale);

double spectral_norm(const Mat& M);
double max_abs(const Mat& M);
bool all_finite(const Mat& M);

Mat hermitian_part(const Mat& M);

struct HermitianVerdict {
  bool isPSD = false;
  double minEigenvalue = 0.0;
  double tol = 0.0;        // tolerance requested
  double threshold = 0.0;  // tol * max(1, spectral norm), the bound applied
  Vec witness;             // unit eigenvector for minEigenvalue
};

// Eigendecomposition of (M + M*)/2. Throws NumericError if M is not
// Hermitian within the scaled tolerance.
HermitianVerdict psd_check(const Mat& M, double tol = kDefaultTol);

// S with S* S = H, via H = U diag(l) U*, S = diag(sqrt l) U*.
// Throws NumericError for indefinite input.
Mat hermitian_factor(const Mat& H, double tol = kDefaultTol);

// Principal square root of a PSD matrix (negative rounding clipped).
Mat psd_sqrt(const Mat& H);

// Numerical rank and orthonormal bases; rank uses s_k > tol * max(1, s_0).
int numerical_rank(const Mat& M, double tol = kDefaultTol);
Mat range_basis(const Mat& M, double tol = kDefaultTol);
Mat null_basis(const Mat& M, double tol = kDefaultTol);
double smallest_singular_value(const Mat& M);

struct SylvesterSolution {
  Mat H;
  bool singular = false;
  int nullity = 0;          // dimension of solutions of H - sum A_j* H A_j = 0
  double residual = 0.0;    // ||L(H) - rhs||
  double rhsNorm = 0.0;
  double tol = 0.0;
  Mat nullBasis;            // columns are vec'd homogeneous solutions
};

// Vectorized operator of H -> H - sum_j A_j* H A_j on column-major vec(H).
Mat stein_operator_matrix(const Tuple& A);

// Solves H - sum_j A_j* H A_j = rhs. Singularity is reported, not thrown;
// the returned H is then the minimum-norm least-squares solution.
SylvesterSolution solve_sylvester_vectorized(const Tuple& A, const Mat& rhs,
                                             double tol = kDefaultTol);

Mat vec_to_mat(const Vec& v, Eigen::Index rows, Eigen::Index cols);

}  // namespace mdlsys

#endif  // MDLSYS_NUMERICS_HPP
