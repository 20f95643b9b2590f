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

#include "mdlsys/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "mdlsys/errors.hpp"

namespace mdlsys {

double scaled_tol(double tol, double scale) { return tol * std::max(1.0, scale); }

double spectral_norm(const Mat& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(M);
  return svd.singularValues()(0);
}

double max_abs(const Mat& M) {
  return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

bool all_finite(const Mat& M) { return M.allFinite(); }

Mat hermitian_part(const Mat& M) { return (M + M.adjoint()) / 2.0; }

HermitianVerdict psd_check(const Mat& M, double tol) {
  if (M.rows() != M.cols()) throw DimensionError("psd_check needs a square matrix");
  const double scale = spectral_norm(M);
  const double bound = scaled_tol(tol, scale);
  if (max_abs(M - M.adjoint()) > bound)
    throw NumericError("psd_check: matrix is not Hermitian within tolerance");
  HermitianVerdict v;
  v.tol = tol;
  v.threshold = bound;
  if (M.rows() == 0) {
    v.isPSD = true;
    return v;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(M));
  v.minEigenvalue = es.eigenvalues()(0);
  v.witness = es.eigenvectors().col(0);
  v.isPSD = v.minEigenvalue >= -bound;
  return v;
}

Mat hermitian_factor(const Mat& H, double tol) {
  HermitianVerdict v = psd_check(H, tol);
  if (!v.isPSD)
    throw NumericError("hermitian_factor: indefinite input, min eigenvalue " +
                       std::to_string(v.minEigenvalue));
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(H));
  Eigen::VectorXd l = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return l.asDiagonal() * es.eigenvectors().adjoint();
}

Mat psd_sqrt(const Mat& H) {
  if (H.rows() == 0) return H;
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(H));
  Eigen::VectorXd l = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * l.asDiagonal() * es.eigenvectors().adjoint();
}

namespace {
int rank_from(const Eigen::VectorXd& s, double tol) {
  if (s.size() == 0) return 0;
  const double bound = scaled_tol(tol, s(0));
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > bound) ++r;
  return r;
}
}  // namespace

int numerical_rank(const Mat& M, double tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(M);
  return rank_from(svd.singularValues(), tol);
}

Mat range_basis(const Mat& M, double tol) {
  if (M.size() == 0) return Mat(M.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullU);
  const int r = rank_from(svd.singularValues(), tol);
  return svd.matrixU().leftCols(r);
}

Mat null_basis(const Mat& M, double tol) {
  if (M.cols() == 0) return Mat(0, 0);
  if (M.rows() == 0) return Mat::Identity(M.cols(), M.cols());
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const int r = rank_from(svd.singularValues(), tol);
  return svd.matrixV().rightCols(M.cols() - r);
}

double smallest_singular_value(const Mat& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(M);
  const auto& s = svd.singularValues();
  return std::min(M.rows(), M.cols()) == s.size() ? s(s.size() - 1) : 0.0;
}

Mat vec_to_mat(const Vec& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

Mat stein_operator_matrix(const Tuple& A) {
  if (A.empty()) throw DimensionError("empty operator tuple");
  const Eigen::Index m = A.front().rows();
  const Eigen::Index mm = m * m;
  Mat L = Mat::Identity(mm, mm);
  // vec(A* H A) = (A^T kron A*) vec(H) for column-major vec.
  for (const Mat& Aj : A) {
    const Mat left = Aj.transpose();
    const Mat right = Aj.adjoint();
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = 0; b < m; ++b)
        L.block(a * m, b * m, m, m) -= left(a, b) * right;
  }
  return L;
}

SylvesterSolution solve_sylvester_vectorized(const Tuple& A, const Mat& rhs,
                                             double tol) {
  const Eigen::Index m = A.front().rows();
  if (rhs.rows() != m || rhs.cols() != m)
    throw DimensionError("solve_sylvester_vectorized: rhs must be m x m");
  for (const Mat& Aj : A)
    if (Aj.rows() != m || Aj.cols() != m)
      throw DimensionError("solve_sylvester_vectorized: tuple entries must be m x m");
  const Mat L = stein_operator_matrix(A);
  const Vec b = Eigen::Map<const Vec>(rhs.data(), m * m);
  SylvesterSolution out;
  out.tol = tol;
  out.rhsNorm = spectral_norm(rhs);
  Eigen::JacobiSVD<Mat> svd(L, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const int r = rank_from(s, tol);
  out.nullity = static_cast<int>(L.cols()) - r;
  out.singular = out.nullity > 0;
  out.nullBasis = svd.matrixV().rightCols(out.nullity);
  Vec x = Vec::Zero(L.cols());
  const Vec ub = svd.matrixU().adjoint() * b;
  for (int i = 0; i < r; ++i) x += (ub(i) / s(i)) * svd.matrixV().col(i);
  out.H = vec_to_mat(x, m, m);
  Mat res = out.H - rhs;
  for (const Mat& Aj : A) res -= Aj.adjoint() * out.H * Aj;
  out.residual = spectral_norm(res);
  return out;
}

}  // namespace mdlsys
