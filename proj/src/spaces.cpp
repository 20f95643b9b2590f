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

#include "mdlsys/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "mdlsys/errors.hpp"
#include "mdlsys/stein.hpp"

namespace mdlsys {

namespace {
template <class P>
void require_same_shape(const P& f, const P& g) {
  if (f.d != g.d || f.k != g.k || f.depth != g.depth)
    throw DimensionError("polynomials live in different truncated spaces");
}
}  // namespace

FockPoly FockPoly::zero(int d, Eigen::Index k, int depth) {
  FockPoly f;
  f.d = d;
  f.k = k;
  f.depth = depth;
  return f;
}

FockPoly FockPoly::monomial(int d, Eigen::Index k, int depth, const Word& v, const Vec& y) {
  FockPoly f = zero(d, k, depth);
  f.add(v, y);
  return f;
}

Vec FockPoly::coeff(const Word& v) const {
  auto it = coeffs.find(v);
  return it == coeffs.end() ? Vec::Zero(k) : it->second;
}

void FockPoly::add(const Word& v, const Vec& y) {
  if (y.size() != k) throw DimensionError("coefficient has wrong size");
  if (static_cast<int>(v.length()) > depth) {
    leakage += y.squaredNorm();
    return;
  }
  auto it = coeffs.find(v);
  if (it == coeffs.end())
    coeffs.emplace(Word(v.letters, d), y);
  else
    it->second += y;
}

double FockPoly::norm2() const {
  double s = 0.0;
  for (const auto& kv : coeffs) s += kv.second.squaredNorm();
  return s;
}

double FockPoly::norm() const { return std::sqrt(norm2()); }

FockPoly FockPoly::operator+(const FockPoly& g) const {
  require_same_shape(*this, g);
  FockPoly r = *this;
  for (const auto& [v, c] : g.coeffs) r.add(v, c);
  r.leakage += g.leakage;
  return r;
}

FockPoly FockPoly::operator-(const FockPoly& g) const { return *this + g.scaled(-1.0); }

FockPoly FockPoly::scaled(cplx s) const {
  FockPoly r = *this;
  for (auto& kv : r.coeffs) kv.second *= s;
  r.leakage *= std::norm(s);
  return r;
}

cplx fock_inner(const FockPoly& f, const FockPoly& g) {
  require_same_shape(f, g);
  cplx s = 0.0;
  for (const auto& [v, c] : f.coeffs) {
    auto it = g.coeffs.find(v);
    if (it != g.coeffs.end()) s += it->second.dot(c);
  }
  return s;
}

FockPoly right_shift(int j, const FockPoly& f) {
  FockPoly r = FockPoly::zero(f.d, f.k, f.depth);
  r.leakage = f.leakage;
  for (const auto& [v, c] : f.coeffs) r.add(v.append(j), c);
  return r;
}

FockPoly right_backshift(int j, const FockPoly& f) {
  FockPoly r = FockPoly::zero(f.d, f.k, f.depth);
  for (const auto& [v, c] : f.coeffs)
    if (!v.empty() && v.last() == j)
      r.add(Word(std::vector<int>(v.letters.begin(), v.letters.end() - 1), f.d), c);
  return r;
}

FockPoly left_shift(int j, const FockPoly& f) {
  FockPoly r = FockPoly::zero(f.d, f.k, f.depth);
  r.leakage = f.leakage;
  for (const auto& [v, c] : f.coeffs) r.add(v.prepend(j), c);
  return r;
}

FockPoly left_backshift(int j, const FockPoly& f) {
  FockPoly r = FockPoly::zero(f.d, f.k, f.depth);
  for (const auto& [v, c] : f.coeffs)
    if (auto w = left_quotient(j, v)) r.add(*w, c);
  return r;
}

FockPoly tau(const FockPoly& f) {
  FockPoly r = FockPoly::zero(f.d, f.k, f.depth);
  r.leakage = f.leakage;
  for (const auto& [v, c] : f.coeffs) r.add(transpose(v), c);
  return r;
}

Vec eval_E(const FockPoly& f) { return f.coeff(Word::unit(f.d)); }

BallPoly BallPoly::zero(int d, Eigen::Index k, int depth) {
  BallPoly f;
  f.d = d;
  f.k = k;
  f.depth = depth;
  return f;
}

BallPoly BallPoly::monomial(int d, Eigen::Index k, int depth, const MultiIndex& n,
                            const Vec& y) {
  BallPoly f = zero(d, k, depth);
  f.add(n, y);
  return f;
}

Vec BallPoly::coeff(const MultiIndex& n) const {
  auto it = coeffs.find(n);
  return it == coeffs.end() ? Vec::Zero(k) : it->second;
}

void BallPoly::add(const MultiIndex& n, const Vec& y) {
  if (y.size() != k) throw DimensionError("coefficient has wrong size");
  if (n.dim() != d) throw DimensionError("multi-index has wrong dimension");
  if (n.total() > depth) {
    leakage += arveson_weight(n) * y.squaredNorm();
    return;
  }
  auto it = coeffs.find(n);
  if (it == coeffs.end())
    coeffs.emplace(n, y);
  else
    it->second += y;
}

double BallPoly::norm2() const {
  double s = 0.0;
  for (const auto& [n, c] : coeffs) s += arveson_weight(n) * c.squaredNorm();
  return s;
}

double BallPoly::norm() const { return std::sqrt(norm2()); }

Vec BallPoly::eval(const Point& lambda) const {
  if (static_cast<int>(lambda.size()) != d) throw DimensionError("point has wrong dimension");
  Vec out = Vec::Zero(k);
  for (const auto& [n, c] : coeffs) {
    cplx mono = 1.0;
    for (int j = 0; j < d; ++j) mono *= std::pow(lambda[j], n[j]);
    out += mono * c;
  }
  return out;
}

BallPoly BallPoly::operator+(const BallPoly& g) const {
  require_same_shape(*this, g);
  BallPoly r = *this;
  for (const auto& [n, c] : g.coeffs) r.add(n, c);
  r.leakage += g.leakage;
  return r;
}

BallPoly BallPoly::operator-(const BallPoly& g) const { return *this + g.scaled(-1.0); }

BallPoly BallPoly::scaled(cplx s) const {
  BallPoly r = *this;
  for (auto& kv : r.coeffs) kv.second *= s;
  r.leakage *= std::norm(s);
  return r;
}

BallPoly BallPoly::truncated(int N) const {
  BallPoly r = zero(d, k, std::min(N, depth));
  for (const auto& [n, c] : coeffs)
    if (n.total() <= N) r.coeffs.emplace(n, c);
  return r;
}

double arveson_weight(const MultiIndex& n) {
  return multinomial_weight(n, std::max(kDefaultWeightCap, n.total())).inverse;
}

cplx ball_inner(const BallPoly& f, const BallPoly& g) {
  require_same_shape(f, g);
  cplx s = 0.0;
  for (const auto& [n, c] : f.coeffs) {
    auto it = g.coeffs.find(n);
    if (it != g.coeffs.end()) s += arveson_weight(n) * it->second.dot(c);
  }
  return s;
}

Vec eval_G(const BallPoly& f) { return f.coeff(MultiIndex::zero(f.d)); }

BallPoly arveson_backshift(int j, const BallPoly& f) {
  BallPoly r = BallPoly::zero(f.d, f.k, f.depth);
  for (const auto& [n, c] : f.coeffs) {
    auto lower = n.minus(j);
    if (!lower) continue;
    r.add(*lower, (static_cast<double>(n[j - 1]) / n.total()) * c);
  }
  return r;
}

BallPoly arveson_shift(int j, const BallPoly& f) {
  BallPoly r = BallPoly::zero(f.d, f.k, f.depth);
  r.leakage = f.leakage;
  for (const auto& [n, c] : f.coeffs) r.add(n.plus(j), c);
  return r;
}

FockIndex::FockIndex(int dd, Eigen::Index kk, int N) : d(dd), k(kk), depth(N) {
  words = enumerate_words_upto(d, N);
  for (std::size_t i = 0; i < words.size(); ++i)
    pos.emplace(words[i], static_cast<Eigen::Index>(i));
}

Vec FockIndex::flatten(const FockPoly& f) const {
  if (f.d != d || f.k != k || f.depth > depth) throw DimensionError("flatten: shape mismatch");
  Vec x = Vec::Zero(size());
  for (const auto& [v, c] : f.coeffs) x.segment(pos.at(v) * k, k) = c;
  return x;
}

FockPoly FockIndex::unflatten(const Vec& x) const {
  FockPoly f = FockPoly::zero(d, k, depth);
  for (std::size_t i = 0; i < words.size(); ++i) {
    const Vec c = x.segment(static_cast<Eigen::Index>(i) * k, k);
    if (c.squaredNorm() > 0.0) f.coeffs.emplace(words[i], c);
  }
  return f;
}

Mat FockIndex::operator_matrix(const std::function<FockPoly(const FockPoly&)>& op) const {
  Mat M(size(), size());
  for (std::size_t i = 0; i < words.size(); ++i)
    for (Eigen::Index c = 0; c < k; ++c) {
      const FockPoly e = FockPoly::monomial(d, k, depth, words[i], Vec::Unit(k, c));
      M.col(static_cast<Eigen::Index>(i) * k + c) = flatten(op(e));
    }
  return M;
}

BallIndex::BallIndex(int dd, Eigen::Index kk, int N) : d(dd), k(kk), depth(N) {
  indices = enumerate_multi_upto(d, N);
  for (std::size_t i = 0; i < indices.size(); ++i)
    pos.emplace(indices[i], static_cast<Eigen::Index>(i));
}

Vec BallIndex::flatten(const BallPoly& f) const {
  if (f.d != d || f.k != k || f.depth > depth) throw DimensionError("flatten: shape mismatch");
  Vec x = Vec::Zero(size());
  for (const auto& [n, c] : f.coeffs) x.segment(pos.at(n) * k, k) = c;
  return x;
}

BallPoly BallIndex::unflatten(const Vec& x) const {
  BallPoly f = BallPoly::zero(d, k, depth);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const Vec c = x.segment(static_cast<Eigen::Index>(i) * k, k);
    if (c.squaredNorm() > 0.0) f.coeffs.emplace(indices[i], c);
  }
  return f;
}

Mat BallIndex::operator_matrix(const std::function<BallPoly(const BallPoly&)>& op) const {
  Mat M(size(), size());
  for (std::size_t i = 0; i < indices.size(); ++i)
    for (Eigen::Index c = 0; c < k; ++c) {
      const BallPoly e = BallPoly::monomial(d, k, depth, indices[i], Vec::Unit(k, c));
      M.col(static_cast<Eigen::Index>(i) * k + c) = flatten(op(e));
    }
  return M;
}

Mat BallIndex::gram() const {
  Eigen::VectorXd w(size());
  for (std::size_t i = 0; i < indices.size(); ++i)
    w.segment(static_cast<Eigen::Index>(i) * k, k).setConstant(arveson_weight(indices[i]));
  return w.cast<cplx>().asDiagonal();
}

FockPoly nc_obs_poly(const OutputPair& pair, const Vec& x, int N) {
  pair.validate();
  const int d = pair.d();
  if (x.size() != pair.m()) throw DimensionError("state vector has wrong size");
  FockPoly f = FockPoly::zero(d, pair.p(), N);
  std::map<Word, Vec> level;
  level.emplace(Word::unit(d), x);
  for (int len = 0; len <= N; ++len) {
    std::map<Word, Vec> next;
    for (const auto& [v, s] : level) {
      f.add(v, pair.C * s);
      if (len < N)
        for (int j = 1; j <= d; ++j) next.emplace(v.prepend(j), pair.A[j - 1] * s);
    }
    level.swap(next);
  }
  return f;
}

BallPoly ab_obs_poly(const OutputPair& pair, const Vec& x, int N) {
  pair.validate();
  const int d = pair.d();
  if (x.size() != pair.m()) throw DimensionError("state vector has wrong size");
  BallPoly f = BallPoly::zero(d, pair.p(), N);
  std::map<MultiIndex, Mat> level;
  level.emplace(MultiIndex::zero(d), pair.C);
  for (int deg = 0; deg <= N; ++deg) {
    if (deg > 0) level = next_cw_level(pair.A, level, d, deg);
    for (const auto& [n, row] : level) f.add(n, row * x);
  }
  return f;
}

Vec ModelPair::coordinates_of(const FockPoly& f) const {
  return U.adjoint() * index.flatten(tau(f));
}

ModelPair model_pair_from_fock_subspace(const std::vector<FockPoly>& basis, double tol) {
  if (basis.empty()) throw DimensionError("model pair needs a nonempty basis");
  const FockPoly& f0 = basis.front();
  FockIndex index(f0.d, f0.k, f0.depth);
  Mat F(index.size(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    require_same_shape(f0, basis[i]);
    F.col(static_cast<Eigen::Index>(i)) = index.flatten(tau(basis[i]));
  }
  const Mat U = range_basis(F, tol);
  if (U.cols() < F.cols())
    throw HypothesisError("model pair: basis is linearly dependent");
  ModelPair mp{OutputPair(), index, U};
  Tuple A;
  const Mat P = Mat::Identity(U.rows(), U.rows()) - U * U.adjoint();
  for (int j = 1; j <= f0.d; ++j) {
    const Mat L = index.operator_matrix([j](const FockPoly& g) { return left_backshift(j, g); });
    const Mat LU = L * U;
    mp.invarianceResidual = std::max(mp.invarianceResidual, spectral_norm(P * LU));
    A.push_back(U.adjoint() * LU);
  }
  mp.invariant = mp.invarianceResidual <= scaled_tol(1e3 * tol, 1.0);
  if (!mp.invariant)
    throw HypothesisError("model pair: tau(M) is not invariant under left backshifts (residual " +
                          std::to_string(mp.invarianceResidual) + ")");
  // The empty word sits first in shortlex order.
  mp.pair = OutputPair(U.topRows(f0.k), A);
  mp.isometryDefect = spectral_norm(contractivity_defect(mp.pair));
  return mp;
}

GleasonSolution gleason_from_pair(const OutputPair& pair, int depth, double tol,
                                  std::uint64_t seed) {
  pair.validate();
  const GramianReport ga = ab_gramian(pair, kDefaultMaxLevel, tol);
  if (ga.verdict == SeriesVerdict::diverged)
    throw HypothesisError("gleason_from_pair: abelianized gramian diverges");
  GleasonSolution s;
  s.d = pair.d();
  s.depth = depth;
  s.source = pair;
  const Eigen::Index m = pair.m();
  Mat V = observability_span_basis(pair, true, tol);
  if (V.cols() == m) V = Mat::Identity(m, m);
  s.V = V;
  for (const Mat& Aj : pair.A) s.T.push_back(V.adjoint() * Aj * V);
  for (Eigen::Index i = 0; i < V.cols(); ++i)
    s.basis.push_back(ab_obs_poly(pair, V.col(i), depth));
  s.gram = hermitian_part(V.adjoint() * ga.value * V);
  s.C = pair.C * V;

  // Sample points with ||Z(lambda) A|| <= 1/2.
  double scale = 0.0;
  for (const Mat& Aj : pair.A) scale += spectral_norm(Aj);
  const double radius = scale > 0.0 ? 0.5 / scale : 0.5;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    Point lam(s.d);
    for (auto& z : lam) z = cplx(unif(rng), unif(rng)) * (radius / std::sqrt(2.0 * s.d));
    s.samples.push_back(lam);
    const Mat R = resolvent_row(pair, lam) * V;
    Mat res = R - s.C;
    for (int j = 0; j < s.d; ++j) res -= lam[j] * R * s.T[j];
    s.sampleResidual = std::max(s.sampleResidual, max_abs(res));
  }
  Mat defect = s.gram - s.C.adjoint() * s.C;
  for (const Mat& Tj : s.T) defect -= Tj.adjoint() * s.gram * Tj;
  const HermitianVerdict v = psd_check(hermitian_part(defect), tol);
  s.contractive = v.isPSD;
  s.contractivityMinEig = v.minEigenvalue;
  return s;
}

namespace {
// T_j f_i = sum_k (T_j)_{ki} f_k.
BallPoly combine(const std::vector<BallPoly>& basis, const Mat& T, Eigen::Index i) {
  BallPoly r = BallPoly::zero(basis.front().d, basis.front().k, basis.front().depth);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const cplx c = T(static_cast<Eigen::Index>(k), i);
    if (c != 0.0) r = r + basis[k].scaled(c);
  }
  return r;
}

double max_coeff(const BallPoly& f) {
  double m = 0.0;
  for (const auto& kv : f.coeffs) m = std::max(m, kv.second.norm());
  return m;
}
}  // namespace

GleasonCheck gleason_check(const GleasonSolution& s, double tol, const Mat* gammaOverride) {
  GleasonCheck chk;
  chk.tol = tol;
  if (s.basis.empty()) {
    chk.solves = chk.contractive = chk.backshiftInvariant = chk.equalsBackshift = true;
    return chk;
  }
  const int d = s.d;
  const int N = s.depth;
  double scale = 1.0;
  for (const BallPoly& f : s.basis) scale = std::max(scale, max_coeff(f));

  for (std::size_t i = 0; i < s.basis.size(); ++i) {
    const BallPoly& f = s.basis[i];
    BallPoly g = f - BallPoly::monomial(d, f.k, N, MultiIndex::zero(d), eval_G(f));
    for (int j = 1; j <= d; ++j)
      g = g - arveson_shift(j, combine(s.basis, s.T[j - 1], static_cast<Eigen::Index>(i)));
    chk.residual = std::max(chk.residual, max_coeff(g));
  }
  chk.solves = chk.residual <= tol * scale;

  const Mat gamma = gammaOverride ? *gammaOverride : s.gram;
  Mat defect = gamma - s.C.adjoint() * s.C;
  for (const Mat& Tj : s.T) defect -= Tj.adjoint() * gamma * Tj;
  const HermitianVerdict v = psd_check(hermitian_part(defect), tol);
  chk.contractive = v.isPSD;
  chk.contractivityMinEig = v.minEigenvalue;

  // Backshift comparison on degrees <= N - 1, where the backshift is exact.
  BallIndex idx(d, s.basis.front().k, N - 1);
  Mat F(idx.size(), static_cast<Eigen::Index>(s.basis.size()));
  for (std::size_t i = 0; i < s.basis.size(); ++i)
    F.col(static_cast<Eigen::Index>(i)) = idx.flatten(s.basis[i].truncated(N - 1));
  Eigen::VectorXd w(idx.size());
  for (std::size_t i = 0; i < idx.indices.size(); ++i)
    w.segment(static_cast<Eigen::Index>(i) * idx.k, idx.k)
        .setConstant(std::sqrt(arveson_weight(idx.indices[i])));
  const Mat Fw = w.cast<cplx>().asDiagonal() * F;
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(Fw);
  for (int j = 1; j <= d; ++j) {
    for (std::size_t i = 0; i < s.basis.size(); ++i) {
      const BallPoly b = arveson_backshift(j, s.basis[i]).truncated(N - 1);
      const Vec bw = w.cast<cplx>().asDiagonal() * idx.flatten(b);
      const Vec coef = cod.solve(bw);
      chk.backshiftLeaveResidual =
          std::max(chk.backshiftLeaveResidual, (Fw * coef - bw).norm());
      const Vec tw = w.cast<cplx>().asDiagonal() *
                     idx.flatten(combine(s.basis, s.T[j - 1], static_cast<Eigen::Index>(i))
                                     .truncated(N - 1));
      chk.backshiftResidual = std::max(chk.backshiftResidual, (tw - bw).norm());
    }
  }
  chk.backshiftInvariant = chk.backshiftLeaveResidual <= 1e3 * tol * scale;
  chk.equalsBackshift = chk.backshiftResidual <= 1e3 * tol * scale;
  return chk;
}

HankelReport hankel_rationality_probe(const std::vector<double>& seq, int n, double rankTol) {
  if (n < 1 || static_cast<int>(seq.size()) < 2 * n - 1)
    throw DimensionError("hankel probe needs 2n - 1 sequence terms");
  HankelReport rep;
  rep.rankTol = rankTol;
  rep.fullRankThrough = true;
  for (int k = 1; k <= n; ++k) {
    Eigen::MatrixXd H(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) H(i, j) = seq[i + j];
    Eigen::VectorXd scale(k);
    for (int i = 0; i < k; ++i) {
      const double diag = std::abs(H(i, i));
      scale(i) = diag > 0.0 ? 1.0 / std::sqrt(diag) : 1.0;
    }
    const Eigen::MatrixXd Hs = scale.asDiagonal() * H * scale.asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Hs);
    const auto& sv = svd.singularValues();
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > rankTol) ++r;
    Eigen::JacobiSVD<Eigen::MatrixXd> raw(H);
    rep.sizes.push_back(k);
    rep.ranks.push_back(r);
    rep.smallestScaled.push_back(sv(sv.size() - 1));
    rep.smallestRaw.push_back(raw.singularValues()(k - 1));
    if (r < k || sv(sv.size() - 1) <= rankTol) rep.fullRankThrough = false;
  }
  return rep;
}

}  // namespace mdlsys
