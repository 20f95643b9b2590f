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

#include "mdlsys/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mdlsys/errors.hpp"

namespace mdlsys {

std::string to_string(KernelFlavor f) {
  switch (f) {
    case KernelFlavor::noncommutative: return "noncommutative";
    case KernelFlavor::commutative: return "commutative";
    default: return "commutative-inverse-gramian";
  }
}

KernelHandle make_kernel(const OutputPair& pair, KernelFlavor flavor,
                         const std::optional<Mat>& H, double tol) {
  pair.validate();
  KernelHandle kh{pair, Mat::Identity(pair.m(), pair.m()), flavor};
  if (flavor == KernelFlavor::commutativeInverseGramian) {
    const GramianReport g = ab_gramian(pair, kDefaultMaxLevel, tol);
    if (!g.converged)
      throw HypothesisError("inverse-gramian kernel: abelianized gramian is " +
                            to_string(g.verdict));
    const HermitianVerdict v = psd_check(hermitian_part(g.value), tol);
    if (v.minEigenvalue <= kInverseGramianFloor)
      throw HypothesisError("inverse-gramian kernel: eigmin(G^a) = " +
                            std::to_string(v.minEigenvalue) + " <= 1e-8");
    kh.H = hermitian_part(g.value).inverse();
    return kh;
  }
  if (H) {
    if (H->rows() != pair.m() || H->cols() != pair.m())
      throw DimensionError("kernel weight H must be m x m");
    if (!psd_check(*H, tol).isPSD) throw HypothesisError("kernel weight H is not PSD");
    kh.H = *H;
  }
  return kh;
}

Mat nc_kernel_coeff(const KernelHandle& kh, const Word& alpha, const Word& beta) {
  const Mat L = kh.pair.C * tuple_power_word(kh.pair.A, alpha);
  const Mat R = kh.pair.C * tuple_power_word(kh.pair.A, beta);
  return L * kh.H * R.adjoint();
}

Mat ab_kernel_eval(const KernelHandle& kh, const Point& lambda, const Point& zeta) {
  const Mat L = resolvent_row(kh.pair, lambda);
  const Mat R = resolvent_row(kh.pair, zeta);
  return L * kh.H * R.adjoint();
}

cplx arveson_kernel(const Point& lambda, const Point& zeta) {
  if (lambda.size() != zeta.size()) throw DimensionError("points of different dimension");
  cplx ip = 0.0;
  for (std::size_t j = 0; j < lambda.size(); ++j) ip += lambda[j] * std::conj(zeta[j]);
  if (std::abs(ip) >= 1.0) throw NumericError("arveson kernel: |<lambda, zeta>| >= 1");
  return 1.0 / (1.0 - ip);
}

KernelGram kernel_gram(const KernelHandle& kh, const std::vector<Point>& points, double tol) {
  if (kh.flavor == KernelFlavor::noncommutative)
    throw HypothesisError("kernel_gram needs a commutative flavor");
  const Eigen::Index p = kh.pair.p();
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  std::vector<Mat> rows;
  for (const Point& z : points) rows.push_back(resolvent_row(kh.pair, z));
  KernelGram kg;
  kg.gram = Mat::Zero(n * p, n * p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      kg.gram.block(i * p, j * p, p, p) = rows[i] * kh.H * rows[j].adjoint();
  kg.verdict = psd_check(hermitian_part(kg.gram), tol);
  return kg;
}

namespace {

// Columns (A^b)* C* (nc, |b| <= m) or (C W(n))* (commutative, |n| <= m).
Mat correspondence_columns(const OutputPair& pr, EquivalenceMode mode, int depth) {
  const int d = pr.d();
  std::vector<Mat> blocks;
  if (mode == EquivalenceMode::nc) {
    std::vector<Mat> level{pr.C.adjoint()};
    for (int k = 0; k <= depth; ++k) {
      std::vector<Mat> next;
      for (const Mat& b : level) {
        blocks.push_back(b);
        if (k < depth)
          for (int j = 0; j < d; ++j) next.push_back(pr.A[j].adjoint() * b);
      }
      level.swap(next);
    }
  } else {
    std::map<MultiIndex, Mat> level;
    level.emplace(MultiIndex::zero(d), pr.C);
    for (int k = 0; k <= depth; ++k) {
      if (k > 0) level = next_cw_level(pr.A, level, d, k);
      for (const auto& kv : level) blocks.push_back(kv.second.adjoint());
    }
  }
  Eigen::Index cols = 0;
  for (const Mat& b : blocks) cols += b.cols();
  Mat K(pr.m(), cols);
  Eigen::Index c = 0;
  for (const Mat& b : blocks) {
    K.middleCols(c, b.cols()) = b;
    c += b.cols();
  }
  return K;
}

}  // namespace

std::optional<Equivalence> unitary_equivalence(const OutputPair& a, const OutputPair& b,
                                               EquivalenceMode mode, double tol) {
  a.validate();
  b.validate();
  if (a.p() != b.p() || a.d() != b.d())
    throw DimensionError("unitary_equivalence: output dimension or d differ");
  const bool abelian = mode == EquivalenceMode::commutative;
  const Mat Va = observability_span_basis(a, abelian, kDefaultTol);
  const Mat Vb = observability_span_basis(b, abelian, kDefaultTol);
  if (Va.cols() < a.m() || Vb.cols() < b.m())
    throw HypothesisError(std::string("unitary_equivalence: pair is not ") +
                          (abelian ? "a-observable" : "observable"));
  if (a.m() != b.m()) return std::nullopt;
  const int depth = static_cast<int>(a.m());
  const Mat Ka = correspondence_columns(a, mode, depth);
  const Mat Kb = correspondence_columns(b, mode, depth);
  // U Ka = Kb, solved as Ka* U* = Kb* in the least-squares sense.
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(Ka.adjoint());
  Equivalence e;
  e.U = cod.solve(Kb.adjoint()).adjoint();
  const double scale = std::max(1.0, spectral_norm(Kb));
  e.matchResidual = spectral_norm(e.U * Ka - Kb) / scale;
  e.residualC = spectral_norm(a.C - b.C * e.U);
  for (int j = 0; j < a.d(); ++j)
    e.residualA = std::max(e.residualA, spectral_norm(e.U * a.A[j] - b.A[j] * e.U));
  e.unitarity = spectral_norm(e.U.adjoint() * e.U - Mat::Identity(a.m(), a.m()));
  const double cScale = std::max(1.0, spectral_norm(a.C));
  double aScale = 1.0;
  for (const Mat& Aj : a.A) aScale = std::max(aScale, spectral_norm(Aj));
  if (e.matchResidual > tol || e.residualC > tol * cScale || e.residualA > tol * aScale ||
      e.unitarity > tol)
    return std::nullopt;
  return e;
}

ContainmentReport containment_isometry(const OutputPair& a, const OutputPair& b, double tol) {
  a.validate();
  b.validate();
  if (a.p() != b.p() || a.d() != b.d())
    throw DimensionError("containment_isometry: output dimension or d differ");
  ContainmentReport rep;
  auto check = [&](const OutputPair& pr, const std::string& name) {
    if (spectral_norm(contractivity_defect(pr)) > tol)
      rep.failedHypotheses.push_back(name + " is not isometric");
    if (!is_commutative(pr.A, kDefaultTol))
      rep.failedHypotheses.push_back(name + " tuple is not commutative");
    if (strong_stability(pr.A, std::nullopt, kDefaultMaxLevel, kDefaultTol).verdict !=
        StabilityVerdict::stable)
      rep.failedHypotheses.push_back(name + " tuple is not certified strongly stable");
  };
  check(a, "first pair");
  check(b, "second pair");
  rep.hypothesesHold = rep.failedHypotheses.empty();
  if (!rep.hypothesesHold) return rep;

  // Match C W(n) = C~ W~(n) V over enough degrees to make the right side injective.
  const int depth = static_cast<int>(std::max(a.m(), b.m()));
  const Mat Ka = correspondence_columns(a, EquivalenceMode::commutative, depth).adjoint();
  const Mat Kb = correspondence_columns(b, EquivalenceMode::commutative, depth).adjoint();
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(Kb);
  const Mat V = cod.solve(Ka);
  rep.residualC = spectral_norm(a.C - b.C * V);
  for (int j = 0; j < a.d(); ++j)
    rep.residualA = std::max(rep.residualA, spectral_norm(V * a.A[j] - b.A[j] * V));
  rep.isometry = spectral_norm(V.adjoint() * V - Mat::Identity(a.m(), a.m()));
  const double fit = spectral_norm(Kb * V - Ka) / std::max(1.0, spectral_norm(Ka));
  if (fit <= tol && rep.residualC <= tol && rep.residualA <= tol && rep.isometry <= tol)
    rep.V = V;
  return rep;
}

cplx lifted_inner_product(const OutputPair& pair, const Mat& H, const Vec& x, const Vec& y,
                          bool abelian, double tol) {
  const Mat Q = observable_projection(pair, abelian, tol);
  const Vec qx = Q * x;
  const Vec qy = Q * y;
  return qy.dot(H * qx);
}

}  // namespace mdlsys
