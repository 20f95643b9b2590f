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

#include "mdlsys/applications.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "mdlsys/errors.hpp"

namespace mdlsys {

std::string to_string(Flavor f) { return f == Flavor::nc ? "nc" : "commutative"; }

namespace {

Mat row_sum(const Tuple& T) {
  Mat S = Mat::Zero(T.front().rows(), T.front().rows());
  for (const Mat& Tj : T) S += Tj * Tj.adjoint();
  return S;
}

Tuple adjoints(const Tuple& T) {
  Tuple out;
  for (const Mat& Tj : T) out.push_back(Tj.adjoint());
  return out;
}

// Largest word depth whose Fock index stays below a few thousand entries.
int word_depth_budget(int d, int N) {
  int depth = 0;
  long long words = 1, level = 1;
  while (depth < N) {
    level *= d;
    if (words + level > 4096) break;
    words += level;
    ++depth;
  }
  return depth;
}

double max_coeff_diff(const FockPoly& f, const FockPoly& g, int upto) {
  double r = 0.0;
  for (const Word& v : enumerate_words_upto(f.d, upto))
    r = std::max(r, (f.coeff(v) - g.coeff(v)).norm());
  return r;
}

double max_coeff_diff(const BallPoly& f, const BallPoly& g, int upto) {
  double r = 0.0;
  for (const MultiIndex& n : enumerate_multi_upto(f.d, upto))
    r = std::max(r, (f.coeff(n) - g.coeff(n)).norm());
  return r;
}

}  // namespace

DilationReport dilate(const Tuple& T, Flavor mode, int N, double tol) {
  if (T.empty()) throw DimensionError("dilate: empty tuple");
  const int d = static_cast<int>(T.size());
  const Eigen::Index m = T.front().rows();
  DilationReport rep;
  rep.mode = mode;
  rep.depth = N;
  const Mat rs = row_sum(T);
  const Mat defectSq = hermitian_part(Mat::Identity(m, m) - rs);
  rep.rowContraction = psd_check(defectSq, tol);
  rep.commuting = mode == Flavor::nc || is_commutative(T, tol);
  rep.defect = psd_sqrt(defectSq);
  rep.coefficientSpaceDim = numerical_rank(rep.defect, tol);
  const Tuple A = adjoints(T);
  rep.adjointStability = strong_stability(A, std::nullopt, kDefaultMaxLevel, tol).verdict;
  rep.hypothesesHold = rep.rowContraction.isPSD && rep.commuting &&
                       rep.adjointStability == StabilityVerdict::stable;
  rep.rowNorm = spectral_norm(rs);
  rep.tailBound = std::pow(rep.rowNorm, N + 1);
  const OutputPair pair(rep.defect, A);
  const Mat cc = pair.C.adjoint() * pair.C;

  // Truncated gramian G_N and cross sums X_j = <S_j O e_b, O e_a>.
  Mat G = Mat::Zero(m, m);
  std::vector<Mat> X(d, Mat::Zero(m, m));
  if (mode == Flavor::nc) {
    Mat level = cc;
    for (int k = 0; k <= N; ++k) {
      G += level;
      if (k < N)
        for (int j = 0; j < d; ++j) X[j] += A[j].adjoint() * level;
      level = cp_apply(A, level);
    }
  } else {
    std::map<MultiIndex, Mat> cw;
    cw.emplace(MultiIndex::zero(d), pair.C);
    std::map<MultiIndex, Mat> next;
    for (int k = 0; k <= N; ++k) {
      if (k < N) next = next_cw_level(A, cw, d, k + 1);
      for (const auto& [n, row] : cw) {
        const double w = arveson_weight(n);
        G += w * row.adjoint() * row;
        if (k < N)
          for (int j = 1; j <= d; ++j) {
            const MultiIndex up = n.plus(j);
            X[j - 1] += arveson_weight(up) * next.at(up).adjoint() * row;
          }
      }
      if (k < N) cw.swap(next);
    }
  }
  rep.obsIsometryResidual = spectral_norm(G - Mat::Identity(m, m));
  rep.nearIsometric = rep.obsIsometryResidual <= rep.tailBound + tol;

  const Mat Gh = psd_sqrt(G);
  const Mat Ghi = Gh.inverse();
  for (int j = 0; j < d; ++j) {
    const Mat compression = Ghi * X[j] * Ghi;
    rep.compressionResiduals.push_back(spectral_norm(compression - Gh * T[j] * Ghi));
  }

  // Intertwining of backshifts with the observability map, coefficientwise.
  if (mode == Flavor::nc) {
    rep.intertwiningDepth = word_depth_budget(d, N);
    for (Eigen::Index i = 0; i < m; ++i) {
      const FockPoly f = nc_obs_poly(pair, Vec::Unit(m, i), rep.intertwiningDepth);
      for (int j = 1; j <= d; ++j) {
        const FockPoly lhs = right_backshift(j, f);
        const FockPoly rhs = nc_obs_poly(pair, A[j - 1] * Vec::Unit(m, i), rep.intertwiningDepth);
        rep.intertwiningResidual = std::max(
            rep.intertwiningResidual, max_coeff_diff(lhs, rhs, rep.intertwiningDepth - 1));
      }
    }
  } else {
    rep.intertwiningDepth = std::min(N, 12);
    for (Eigen::Index i = 0; i < m; ++i) {
      const BallPoly f = ab_obs_poly(pair, Vec::Unit(m, i), rep.intertwiningDepth);
      for (int j = 1; j <= d; ++j) {
        const BallPoly lhs = arveson_backshift(j, f);
        const BallPoly rhs = ab_obs_poly(pair, A[j - 1] * Vec::Unit(m, i), rep.intertwiningDepth);
        rep.intertwiningResidual = std::max(
            rep.intertwiningResidual, max_coeff_diff(lhs, rhs, rep.intertwiningDepth - 1));
      }
    }
  }
  return rep;
}

Mat fock_shift_matrix(int d, Eigen::Index k, int N, int j) {
  FockIndex idx(d, k, N);
  return idx.operator_matrix([j](const FockPoly& f) { return right_shift(j, f); });
}

Mat poisson_transform(const Tuple& T, const Mat& X, int N) {
  const int d = static_cast<int>(T.size());
  const Eigen::Index m = T.front().rows();
  const Mat rs = row_sum(T);
  if (spectral_norm(rs) >= 1.0)
    throw HypothesisError("poisson_transform: needs ||sum T_j T_j*|| < 1");
  const OutputPair pair(psd_sqrt(hermitian_part(Mat::Identity(m, m) - rs)), adjoints(T));
  FockIndex idx(d, m, N);
  if (X.rows() != idx.size() || X.cols() != idx.size())
    throw DimensionError("poisson_transform: X must act on the depth-N Fock coordinates");
  Mat O(idx.size(), m);
  for (Eigen::Index i = 0; i < m; ++i) O.col(i) = idx.flatten(nc_obs_poly(pair, Vec::Unit(m, i), N));
  return O.adjoint() * X * O;
}

namespace {

FockPoly apply_nc_poly(const NCPolynomial& p, const FockPoly& f) {
  FockPoly out = FockPoly::zero(f.d, f.k, f.depth);
  for (const auto& [v, c] : p) {
    FockPoly g = f;
    // S^v = S_{i_N} ... S_{i_1}: the rightmost letter acts first.
    for (auto it = v.letters.rbegin(); it != v.letters.rend(); ++it) g = right_shift(*it, g);
    out = out + g.scaled(c);
  }
  return out;
}

BallPoly apply_comm_poly(const CommPolynomial& p, const BallPoly& f) {
  BallPoly out = BallPoly::zero(f.d, f.k, f.depth);
  for (const auto& [n, c] : p) {
    BallPoly g = f;
    for (int j = 1; j <= n.dim(); ++j)
      for (int t = 0; t < n[j - 1]; ++t) g = arveson_shift(j, g);
    out = out + g.scaled(c);
  }
  return out;
}

void finish_probe(VonNeumannReport& rep, double tol) {
  for (std::size_t i = 1; i < rep.rhsLower.size(); ++i)
    if (rep.rhsLower[i] < rep.rhsLower[i - 1] - 1e-12) rep.monotone = false;
  rep.satisfiedAtTruncation = !rep.rhsLower.empty() && rep.lhs <= rep.rhsLower.back() + tol;
}

}  // namespace

VonNeumannReport von_neumann_probe(const Tuple& T, const NCPolynomial& p, int N, double tol) {
  const int d = static_cast<int>(T.size());
  const Eigen::Index m = T.front().rows();
  VonNeumannReport rep;
  Mat pT = Mat::Zero(m, m);
  for (const auto& [v, c] : p) pT += c * tuple_power_word(T, Word(v.letters, d));
  rep.lhs = spectral_norm(pT);
  for (int n = 1; n <= N; ++n) {
    FockIndex idx(d, 1, n);
    const Mat P = idx.operator_matrix([&](const FockPoly& f) { return apply_nc_poly(p, f); });
    rep.rhsLower.push_back(spectral_norm(P));
  }
  finish_probe(rep, tol);
  return rep;
}

VonNeumannReport von_neumann_probe(const Tuple& T, const CommPolynomial& p, int N, double tol) {
  const int d = static_cast<int>(T.size());
  const Eigen::Index m = T.front().rows();
  VonNeumannReport rep;
  Mat pT = Mat::Zero(m, m);
  for (const auto& [n, c] : p) pT += c * tuple_power_multi(T, n, tol);
  rep.lhs = spectral_norm(pT);
  for (int k = 1; k <= N; ++k) {
    BallIndex idx(d, 1, k);
    const Mat P = idx.operator_matrix([&](const BallPoly& f) { return apply_comm_poly(p, f); });
    const Eigen::VectorXd w = idx.gram().diagonal().real().cwiseSqrt();
    const Mat Pw = w.cast<cplx>().asDiagonal() * P * w.cwiseInverse().cast<cplx>().asDiagonal();
    rep.rhsLower.push_back(spectral_norm(Pw));
  }
  finish_probe(rep, tol);
  return rep;
}

namespace {

// Shared coordinate-level construction. Coordinates are orthonormal for the
// ambient inner product; S holds the truncated forward shifts.
struct BLCore {
  Mat U;
  Tuple A;
  Mat C;  // r x dim M
  int r = 0;
};

BLCore bl_core(const Mat& F, const Tuple& S, BeurlingLaxReport& rep, double tol) {
  BLCore core;
  core.U = range_basis(F, tol);
  if (core.U.cols() < F.cols()) throw HypothesisError("beurling_lax: basis is dependent");
  const Eigen::Index dimM = core.U.cols();
  const Mat P = Mat::Identity(core.U.rows(), core.U.rows()) - core.U * core.U.adjoint();
  for (const Mat& Sj : S) {
    rep.invarianceResidual = std::max(rep.invarianceResidual, spectral_norm(P * Sj * core.U));
    core.A.push_back(core.U.adjoint() * Sj.adjoint() * core.U);
  }
  rep.shiftInvariant = rep.invarianceResidual <= scaled_tol(1e3 * tol, 1.0);
  Mat defect = Mat::Identity(dimM, dimM);
  for (const Mat& Aj : core.A) defect -= Aj.adjoint() * Aj;
  defect = hermitian_part(defect);
  rep.contractive = psd_check(defect, tol);
  rep.adjointStability = strong_stability(core.A, std::nullopt, kDefaultMaxLevel, tol).verdict;
  rep.hypothesesHold = rep.shiftInvariant && rep.contractive.isPSD &&
                       rep.adjointStability == StabilityVerdict::stable;
  Eigen::SelfAdjointEigenSolver<Mat> es(defect);
  const double bound = scaled_tol(tol, es.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i)
    if (es.eigenvalues()(i) > bound) keep.push_back(i);
  core.r = static_cast<int>(keep.size());
  core.C.resize(core.r, dimM);
  for (int i = 0; i < core.r; ++i)
    core.C.row(i) = std::sqrt(es.eigenvalues()(keep[i])) * es.eigenvectors().col(keep[i]).adjoint();
  return core;
}

void finish_bl(BeurlingLaxReport& rep, const Mat& Tm, const Mat& U,
               const std::vector<Eigen::Index>& collarCols, double tol) {
  rep.theta.normEstimate = spectral_norm(Tm);
  rep.normBounded = rep.theta.normEstimate <= 1.0 + tol;
  rep.coisometryResidual = spectral_norm(Tm * Tm.adjoint() - U * U.adjoint());
  rep.partialIsometry = rep.coisometryResidual <= scaled_tol(1e3 * tol, 1.0);
  if (!collarCols.empty()) {
    Mat Tc(Tm.rows(), static_cast<Eigen::Index>(collarCols.size()));
    for (std::size_t i = 0; i < collarCols.size(); ++i)
      Tc.col(static_cast<Eigen::Index>(i)) = Tm.col(collarCols[i]);
    rep.collarIsometryResidual =
        spectral_norm(Tc.adjoint() * Tc - Mat::Identity(Tc.cols(), Tc.cols()));
  }
}

}  // namespace

BeurlingLaxReport beurling_lax(const std::vector<FockPoly>& basis, double tol) {
  if (basis.empty()) throw DimensionError("beurling_lax: empty basis");
  const int d = basis.front().d;
  const Eigen::Index k = basis.front().k;
  const int N = basis.front().depth;
  FockIndex idx(d, k, N);
  Mat F(idx.size(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) F.col(static_cast<Eigen::Index>(i)) = idx.flatten(basis[i]);
  Tuple S;
  for (int j = 1; j <= d; ++j) S.push_back(fock_shift_matrix(d, k, N, j));
  BeurlingLaxReport rep;
  const BLCore core = bl_core(F, S, rep, tol);

  MultiplierPoly& th = rep.theta;
  th.flavor = Flavor::nc;
  th.d = d;
  th.depth = N;
  th.outDim = k;
  th.inDim = core.r;
  th.normTruncation = N;
  const Mat Theta = core.U * core.C.adjoint();  // columns are C* e_i in Fock coordinates
  int degTheta = 0;
  const double scale = std::max(1.0, max_abs(Theta));
  for (const Word& v : idx.words) {
    const Mat block = Theta.middleRows(idx.pos.at(v) * k, k);
    if (max_abs(block) > 1e-12 * scale) {
      th.ncCoeffs.emplace(v, block);
      degTheta = std::max(degTheta, static_cast<int>(v.length()));
    }
  }

  // T = P_N M_theta on inputs of depth <= N; (theta f)(z) = sum theta_v f_w z^{v w}.
  FockIndex dom(d, core.r, N);
  Mat Tm = Mat::Zero(idx.size(), dom.size());
  std::vector<Eigen::Index> collar;
  rep.collarDepth = N - degTheta;
  for (const Word& w : dom.words)
    for (int i = 0; i < core.r; ++i) {
      const Eigen::Index col = dom.pos.at(w) * core.r + i;
      if (static_cast<int>(w.length()) <= rep.collarDepth) collar.push_back(col);
      for (const auto& [v, c] : th.ncCoeffs) {
        const Word vw = v.concat(w);
        if (static_cast<int>(vw.length()) > N) continue;
        Tm.block(idx.pos.at(vw) * k, col, k, 1) += c.col(i);
      }
    }
  finish_bl(rep, Tm, core.U, collar, tol);
  return rep;
}

BeurlingLaxReport beurling_lax(const std::vector<BallPoly>& basis, double tol) {
  if (basis.empty()) throw DimensionError("beurling_lax: empty basis");
  const int d = basis.front().d;
  const Eigen::Index k = basis.front().k;
  const int N = basis.front().depth;
  BallIndex idx(d, k, N);
  const Eigen::VectorXd w = idx.gram().diagonal().real().cwiseSqrt();
  const Mat Wh = w.cast<cplx>().asDiagonal();
  const Mat Whi = w.cwiseInverse().cast<cplx>().asDiagonal();
  Mat F(idx.size(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    F.col(static_cast<Eigen::Index>(i)) = Wh * idx.flatten(basis[i]);
  Tuple S;
  for (int j = 1; j <= d; ++j)
    S.push_back(Wh * idx.operator_matrix([j](const BallPoly& f) { return arveson_shift(j, f); }) *
                Whi);
  BeurlingLaxReport rep;
  const BLCore core = bl_core(F, S, rep, tol);

  MultiplierPoly& th = rep.theta;
  th.flavor = Flavor::commutative;
  th.d = d;
  th.depth = N;
  th.outDim = k;
  th.inDim = core.r;
  th.normTruncation = N;
  const Mat Theta = Whi * core.U * core.C.adjoint();
  int degTheta = 0;
  const double scale = std::max(1.0, max_abs(Theta));
  for (const MultiIndex& n : idx.indices) {
    const Mat block = Theta.middleRows(idx.pos.at(n) * k, k);
    if (max_abs(block) > 1e-12 * scale) {
      th.commCoeffs.emplace(n, block);
      degTheta = std::max(degTheta, n.total());
    }
  }

  BallIndex dom(d, core.r, N);
  const Eigen::VectorXd wd = dom.gram().diagonal().real().cwiseSqrt();
  Mat Traw = Mat::Zero(idx.size(), dom.size());
  std::vector<Eigen::Index> collar;
  rep.collarDepth = N - degTheta;
  for (const MultiIndex& mi : dom.indices)
    for (int i = 0; i < core.r; ++i) {
      const Eigen::Index col = dom.pos.at(mi) * core.r + i;
      if (mi.total() <= rep.collarDepth) collar.push_back(col);
      for (const auto& [n, c] : th.commCoeffs) {
        std::vector<int> sum(d);
        for (int j = 0; j < d; ++j) sum[j] = n[j] + mi[j];
        const MultiIndex nm(sum);
        if (nm.total() > N) continue;
        Traw.block(idx.pos.at(nm) * k, col, k, 1) += c.col(i);
      }
    }
  const Mat Tm = Wh * Traw * wd.cwiseInverse().cast<cplx>().asDiagonal();
  finish_bl(rep, Tm, core.U, collar, tol);
  return rep;
}

}  // namespace mdlsys
