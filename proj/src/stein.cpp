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

#include "mdlsys/stein.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Eigenvalues>

#include "mdlsys/errors.hpp"

namespace mdlsys {

Mat CPMap::operator()(const Mat& X) const { return cp_apply(A, X); }

Mat cp_apply(const Tuple& A, const Mat& X) {
  if (A.empty()) throw DimensionError("cp_apply: empty tuple");
  if (X.rows() != A.front().rows() || X.cols() != A.front().rows())
    throw DimensionError("cp_apply: X must be m x m");
  Mat out = Mat::Zero(X.rows(), X.cols());
  for (const Mat& Aj : A) out.noalias() += Aj.adjoint() * X * Aj;
  return out;
}

std::string to_string(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::converged: return "converged";
    case SeriesVerdict::diverged: return "diverged";
    default: return "inconclusive";
  }
}

std::string to_string(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::stable: return "stable";
    case StabilityVerdict::unstable: return "unstable";
    default: return "inconclusive";
  }
}

namespace {

// Max of the trailing ratios sigma_k / sigma_{k-1}; +inf when unavailable.
double trailing_ratio(const std::vector<double>& s) {
  const int N = static_cast<int>(s.size()) - 1;
  if (N < kCertificateWindow) return std::numeric_limits<double>::infinity();
  double r = 0.0;
  for (int k = N - kCertificateWindow + 1; k <= N; ++k) {
    if (s[k - 1] <= 0.0) return std::numeric_limits<double>::infinity();
    r = std::max(r, s[k] / s[k - 1]);
  }
  return r;
}

// Sums term(0) + term(1) + ... under the convergence and divergence rules.
GramianReport run_series(const std::function<Mat(int)>& term, double ccNorm,
                         int maxLevel, double tol) {
  GramianReport rep;
  rep.tol = tol;
  rep.tailEstimate = std::numeric_limits<double>::infinity();
  for (int N = 0; N <= maxLevel; ++N) {
    const Mat t = term(N);
    if (N == 0)
      rep.value = t;
    else
      rep.value += t;
    const double sigma = spectral_norm(t);
    const double scale = spectral_norm(rep.value);
    rep.levelNorms.push_back(sigma);
    rep.partialNorms.push_back(scale);
    rep.levelsUsed = N;
    if (sigma == 0.0) {
      // A zero level stays zero for both recursions.
      rep.certified = true;
      rep.ratio = 0.0;
      rep.tailEstimate = 0.0;
      rep.converged = true;
      rep.verdict = SeriesVerdict::converged;
      return rep;
    }
    const double r = trailing_ratio(rep.levelNorms);
    rep.ratio = r;
    rep.certified = r < 1.0;
    rep.tailEstimate = rep.certified ? sigma * r / (1.0 - r) : sigma;
    if (scale > kBlowUpFactor * std::max(ccNorm, std::numeric_limits<double>::min())) {
      rep.verdict = SeriesVerdict::diverged;
      return rep;
    }
    if (rep.certified && sigma <= tol * scale && rep.tailEstimate <= tol * scale) {
      rep.converged = true;
      rep.verdict = SeriesVerdict::converged;
      return rep;
    }
    if (N >= kCertificateDeadline && !rep.certified) {
      rep.verdict = SeriesVerdict::diverged;
      return rep;
    }
  }
  rep.verdict = SeriesVerdict::inconclusive;
  return rep;
}

}  // namespace

GramianReport nc_gramian(const OutputPair& pair, int maxLevel, double tol) {
  pair.validate();
  const Mat cc = pair.C.adjoint() * pair.C;
  Mat current = cc;
  auto term = [&](int N) -> Mat {
    if (N > 0) current = cp_apply(pair.A, current);
    return current;
  };
  GramianReport rep = run_series(term, spectral_norm(cc), maxLevel, tol);
  rep.steinResidual = spectral_norm(rep.value - cp_apply(pair.A, rep.value) - cc);
  return rep;
}

std::map<MultiIndex, Mat> next_cw_level(const Tuple& A,
                                        const std::map<MultiIndex, Mat>& prev,
                                        int d, int level) {
  std::map<MultiIndex, Mat> out;
  for (const MultiIndex& n : enumerate_multi(d, level)) {
    Mat acc;
    for (int i = 1; i <= d; ++i) {
      auto k = n.minus(i);
      if (!k) continue;
      const Mat piece = prev.at(*k) * A[i - 1];
      if (acc.size() == 0)
        acc = piece;
      else
        acc += piece;
    }
    out.emplace(n, std::move(acc));
  }
  return out;
}

AbelianPowerTable abelian_power_table(const Tuple& A, int N) {
  if (A.empty()) throw DimensionError("abelian_power_table: empty tuple");
  const int d = static_cast<int>(A.size());
  const Eigen::Index m = A.front().rows();
  AbelianPowerTable t;
  t.depth = N;
  std::map<MultiIndex, Mat> level;
  level.emplace(MultiIndex::zero(d), Mat::Identity(m, m));
  t.W.insert(level.begin(), level.end());
  for (int k = 1; k <= N; ++k) {
    level = next_cw_level(A, level, d, k);
    t.W.insert(level.begin(), level.end());
  }
  return t;
}

GramianReport ab_gramian(const OutputPair& pair, int maxTotalDegree, double tol) {
  pair.validate();
  const int d = pair.d();
  const Mat cc = pair.C.adjoint() * pair.C;
  std::map<MultiIndex, Mat> cw;
  // Fiber sizes |n|!/n! by the Pascal recursion count(n) = sum_i count(n - e_i);
  // integer exact while below 2^53.
  std::map<MultiIndex, double> count;
  auto term = [&](int N) -> Mat {
    if (N == 0) {
      cw.clear();
      cw.emplace(MultiIndex::zero(d), pair.C);
      count.clear();
      count.emplace(MultiIndex::zero(d), 1.0);
      return cc;
    }
    cw = next_cw_level(pair.A, cw, d, N);
    std::map<MultiIndex, double> nextCount;
    Mat acc = Mat::Zero(pair.m(), pair.m());
    for (const auto& [n, row] : cw) {
      double c = 0.0;
      for (int i = 1; i <= d; ++i)
        if (auto k = n.minus(i)) c += count.at(*k);
      nextCount.emplace(n, c);
      acc.noalias() += (1.0 / c) * (row.adjoint() * row);
    }
    count.swap(nextCount);
    return acc;
  };
  GramianReport rep = run_series(term, spectral_norm(cc), maxTotalDegree, tol);
  rep.steinResidual = std::numeric_limits<double>::quiet_NaN();
  return rep;
}

ReverseSteinReport reverse_stein_residual(const OutputPair& pair,
                                          const GramianReport& abGramian, double tol) {
  const Mat& G = abGramian.value;
  const Mat phiG = cp_apply(pair.A, G);
  ReverseSteinReport rep;
  rep.complementary = G - phiG;
  rep.residual = pair.C.adjoint() * pair.C - rep.complementary;
  rep.verdict = psd_check(hermitian_part(rep.residual), tol);
  rep.complementaryVerdict = psd_check(hermitian_part(rep.complementary), tol);
  return rep;
}

ReverseSteinCertificate reverse_stein_certificate(const OutputPair& pair, int N) {
  namespace bmp = boost::multiprecision;
  pair.validate();
  const int d = pair.d();
  const Eigen::Index m = pair.m();
  ReverseSteinCertificate cert;
  cert.depth = N;
  cert.sum = Mat::Zero(m, m);
  std::map<MultiIndex, Mat> prev;
  prev.emplace(MultiIndex::zero(d), pair.C);
  bmp::cpp_int levelFactorial = 1;
  for (int level = 1; level <= N; ++level) {
    levelFactorial *= level;
    for (const MultiIndex& n : enumerate_multi(d, level)) {
      Mat S = Mat::Zero(m, m);
      for (int i = 1; i <= d; ++i) {
        for (int j = 1; j <= d; ++j) {
          if (i == j || n[i - 1] == 0 || n[j - 1] == 0) continue;
          const Mat R = static_cast<double>(n[i - 1]) * prev.at(*n.minus(j)) * pair.A[j - 1] -
                        static_cast<double>(n[j - 1]) * prev.at(*n.minus(i)) * pair.A[i - 1];
          cert.maxR = std::max(cert.maxR, spectral_norm(R));
          const MultiIndex rest = *n.minus(i)->minus(j);
          const bmp::cpp_rational c(multi_factorial(rest), levelFactorial);
          S += 0.5 * c.convert_to<double>() * (R.adjoint() * R);
        }
      }
      cert.sum += S;
      cert.blocks.emplace(n, std::move(S));
    }
    prev = next_cw_level(pair.A, prev, d, level);
  }
  return cert;
}

StabilityReport strong_stability(const Tuple& A, const std::optional<Mat>& H, int maxLevel,
                                 double tol) {
  if (A.empty()) throw DimensionError("strong_stability: empty tuple");
  const Eigen::Index m = A.front().rows();
  StabilityReport rep;
  rep.tol = tol;
  Mat cur = H ? *H : Mat::Identity(m, m);
  const double sigma0 = spectral_norm(cur);
  rep.levels.push_back(sigma0);
  rep.delta = cur;
  if (sigma0 == 0.0) {
    rep.verdict = StabilityVerdict::stable;
    return rep;
  }
  for (int N = 1; N <= maxLevel; ++N) {
    cur = cp_apply(A, cur);
    const double sigma = spectral_norm(cur);
    rep.levels.push_back(sigma);
    rep.delta = cur;
    if (sigma == 0.0) {
      rep.ratio = 0.0;
      rep.verdict = StabilityVerdict::stable;
      return rep;
    }
    rep.ratio = trailing_ratio(rep.levels);
    if (rep.ratio < 1.0 && sigma <= tol * sigma0) {
      rep.verdict = StabilityVerdict::stable;
      return rep;
    }
    if (sigma >= kBlowUpFactor * sigma0) {
      rep.verdict = StabilityVerdict::unstable;
      return rep;
    }
  }
  rep.verdict = StabilityVerdict::inconclusive;
  return rep;
}

double cp_spectral_radius(const Tuple& A) {
  const Eigen::Index mm = A.front().rows() * A.front().rows();
  const Mat K = Mat::Identity(mm, mm) - stein_operator_matrix(A);
  Eigen::ComplexEigenSolver<Mat> es(K, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Mat contractivity_defect(const OutputPair& pair) {
  Mat D = Mat::Identity(pair.m(), pair.m()) - pair.C.adjoint() * pair.C;
  for (const Mat& Aj : pair.A) D -= Aj.adjoint() * Aj;
  return D;
}

double c_abelian_defect(const OutputPair& pair, int depth) {
  pair.validate();
  std::map<MultiIndex, Mat> first;
  std::map<Word, Mat> level{{Word::unit(pair.d()), pair.C}};
  double worst = 0.0;
  for (int k = 1; k <= depth; ++k) {
    std::map<Word, Mat> next;
    for (const auto& [v, row] : level)
      for (int j = 1; j <= pair.d(); ++j) {
        const Word w = v.append(j);
        const Mat r = row * pair.A[j - 1];
        const auto [it, fresh] = first.emplace(abelianize(w), r);
        if (!fresh) worst = std::max(worst, spectral_norm(r - it->second));
        next.emplace(w, r);
      }
    level.swap(next);
  }
  return worst;
}

SteinSolveReport stein_solve(const OutputPair& pair, SteinMode mode, double tol) {
  pair.validate();
  SteinSolveReport rep;
  rep.mode = mode;
  const Eigen::Index m = pair.m();
  const Mat cc = pair.C.adjoint() * pair.C;
  rep.contractive = psd_check(hermitian_part(contractivity_defect(pair)), tol).isPSD;
  rep.stability = strong_stability(pair.A, std::nullopt, kDefaultMaxLevel, tol).verdict;
  rep.phiSpectralRadius = cp_spectral_radius(pair.A);

  if (mode == SteinMode::equation) {
    SylvesterSolution s = solve_sylvester_vectorized(pair.A, cc, tol);
    rep.H = hermitian_part(s.H);
    rep.nullity = s.nullity;
    rep.residual = s.residual;
    rep.found = s.residual <= scaled_tol(1e3 * tol, spectral_norm(cc));
    rep.message = s.singular ? "homogeneous Stein equation has nonzero solutions"
                             : "unique solution";
    return rep;
  }

  if (rep.phiSpectralRadius >= 1.0) {
    rep.message = "spectral radius of the CP map is >= 1; series construction unavailable";
    return rep;
  }
  Mat best;
  for (double delta = 1e-1; delta >= 1e-8 * (1 - 1e-12); delta /= 10.0) {
    rep.deltas.push_back(delta);
    SylvesterSolution s =
        solve_sylvester_vectorized(pair.A, cc + delta * Mat::Identity(m, m), tol);
    const Mat H = hermitian_part(s.H);
    const HermitianVerdict v = psd_check(H, tol);
    if (v.minEigenvalue <= 1e3 * tol * spectral_norm(H)) break;
    best = H;
    rep.delta = delta;
    rep.residual = s.residual;
  }
  if (best.size() == 0) {
    rep.message = "no strictly positive solution found";
    return rep;
  }
  rep.H = best;
  rep.S = hermitian_factor(best, tol);
  const Mat Sinv = rep.S.inverse();
  Tuple At;
  for (const Mat& Aj : pair.A) At.push_back(rep.S * Aj * Sinv);
  rep.similar = OutputPair(pair.C * Sinv, At);
  rep.found = true;
  rep.message = "strictly positive solution";
  return rep;
}

Mat observability_span_basis(const OutputPair& pair, bool abelian, double tol,
                             std::vector<int>* ranks) {
  pair.validate();
  const Eigen::Index m = pair.m();
  const int d = pair.d();
  Mat V = range_basis(pair.C.adjoint(), tol);
  if (ranks) ranks->assign(1, static_cast<int>(V.cols()));
  if (!abelian) {
    for (int k = 1; k <= m; ++k) {
      Mat stack(m, V.cols() * (d + 1));
      stack.leftCols(V.cols()) = V;
      for (int j = 0; j < d; ++j)
        stack.middleCols(V.cols() * (j + 1), V.cols()) = pair.A[j].adjoint() * V;
      V = range_basis(stack, tol);
      if (ranks) ranks->push_back(static_cast<int>(V.cols()));
    }
    return V;
  }
  std::map<MultiIndex, Mat> level;
  level.emplace(MultiIndex::zero(d), pair.C);
  for (int k = 1; k <= m; ++k) {
    level = next_cw_level(pair.A, level, d, k);
    Eigen::Index extra = 0;
    for (const auto& kv : level) extra += kv.second.rows();
    Mat stack(m, V.cols() + extra);
    stack.leftCols(V.cols()) = V;
    Eigen::Index col = V.cols();
    for (const auto& kv : level) {
      stack.middleCols(col, kv.second.rows()) = kv.second.adjoint();
      col += kv.second.rows();
    }
    V = range_basis(stack, tol);
    if (ranks) ranks->push_back(static_cast<int>(V.cols()));
  }
  return V;
}

Mat observable_projection(const OutputPair& pair, bool abelian, double tol) {
  const Mat V = observability_span_basis(pair, abelian, tol);
  return V * V.adjoint();
}

namespace {
Mat complement_basis(const Mat& V, Eigen::Index m, double tol) {
  if (V.cols() == 0) return Mat::Identity(m, m);
  return null_basis(V.adjoint(), tol);
}
}  // namespace

ObservabilityReport observability_analysis(const OutputPair& pair, double tol) {
  ObservabilityReport rep;
  rep.tol = tol;
  const Eigen::Index m = pair.m();
  const Mat V = observability_span_basis(pair, false, tol, &rep.rankByLength);
  const Mat Va = observability_span_basis(pair, true, tol, &rep.aRankByDegree);
  rep.observable = V.cols() == m;
  rep.aObservable = Va.cols() == m;
  rep.unobservableBasis = complement_basis(V, m, tol);
  rep.aUnobservableBasis = complement_basis(Va, m, tol);
  if (rep.unobservableBasis.cols() == 0 || Va.cols() == 0)
    rep.kernelInclusion = true;
  else
    rep.kernelInclusion = max_abs(Va.adjoint() * rep.unobservableBasis) <= 1e3 * tol;
  if (rep.observable) {
    const GramianReport g = nc_gramian(pair, kDefaultMaxLevel, tol);
    rep.exactlyObservable =
        g.converged && psd_check(hermitian_part(g.value), tol).minEigenvalue >
                           tol * spectral_norm(g.value);
  }
  if (rep.aObservable) {
    const GramianReport g = ab_gramian(pair, kDefaultMaxLevel, tol);
    rep.exactlyAObservable =
        g.converged && psd_check(hermitian_part(g.value), tol).minEigenvalue >
                           tol * spectral_norm(g.value);
  }
  return rep;
}

QSteinReport q_stein_analysis(const OutputPair& pair, double tol) {
  pair.validate();
  const HermitianVerdict contr = psd_check(hermitian_part(contractivity_defect(pair)), tol);
  if (!contr.isPSD)
    throw HypothesisError("q_stein_analysis: pair is not contractive (min eigenvalue " +
                          std::to_string(contr.minEigenvalue) + ")");
  const Eigen::Index m = pair.m();
  QSteinReport rep;
  const Mat V = observability_span_basis(pair, false, tol);
  const Mat K = complement_basis(V, m, tol);
  rep.Q = V * V.adjoint();
  const Mat cc = pair.C.adjoint() * pair.C;
  const Mat steinQ = rep.Q - cp_apply(pair.A, rep.Q) - cc;
  rep.inequality = psd_check(hermitian_part(steinQ), tol);
  rep.equalityResidual = spectral_norm(steinQ);
  rep.equality = rep.equalityResidual <= scaled_tol(tol, 1.0);
  for (const Mat& Aj : pair.A) {
    if (K.cols() > 0 && V.cols() > 0) {
      rep.kernelInvarianceResidual =
          std::max(rep.kernelInvarianceResidual, spectral_norm(V.adjoint() * Aj * K));
      rep.offDiagonalResidual =
          std::max(rep.offDiagonalResidual, spectral_norm(K.adjoint() * Aj * V));
    }
  }
  rep.offDiagonalZero = rep.offDiagonalResidual <= scaled_tol(tol, 1.0);
  if (V.cols() > 0) {
    Mat iso = Mat::Identity(V.cols(), V.cols()) - (pair.C * V).adjoint() * (pair.C * V);
    for (const Mat& Aj : pair.A) {
      const Mat A0 = V.adjoint() * Aj * V;
      iso -= A0.adjoint() * A0;
    }
    rep.restrictedIsometryResidual = spectral_norm(iso);
  }
  rep.restrictedIsometric = rep.restrictedIsometryResidual <= scaled_tol(tol, 1.0);
  const GramianReport g = nc_gramian(pair, kDefaultMaxLevel, tol);
  rep.gramianBelowQ = psd_check(hermitian_part(rep.Q - g.value), tol);
  rep.qBelowIdentity = psd_check(hermitian_part(Mat::Identity(m, m) - rep.Q), tol);
  return rep;
}

}  // namespace mdlsys
