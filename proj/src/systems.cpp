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

#include "mdlsys/systems.hpp"

#include <algorithm>
#include <string>

#include <Eigen/LU>

#include "mdlsys/errors.hpp"

namespace mdlsys {

OutputPair::OutputPair(Mat c, Tuple a) : C(std::move(c)), A(std::move(a)) {
  validate();
}

void OutputPair::validate() const {
  if (A.empty()) throw DimensionError("output pair needs d >= 1");
  for (const Mat& Aj : A)
    if (Aj.rows() != C.cols() || Aj.cols() != C.cols())
      throw DimensionError("A_j must be " + std::to_string(C.cols()) + " x " +
                           std::to_string(C.cols()));
}

SystemRealization::SystemRealization(OutputPair pr, Tuple b, Mat dd)
    : pair(std::move(pr)), B(std::move(b)), D(std::move(dd)) {
  validate();
}

void SystemRealization::validate() const {
  pair.validate();
  if (static_cast<int>(B.size()) != pair.d())
    throw DimensionError("B must have d entries");
  if (D.rows() != pair.p()) throw DimensionError("D must have p rows");
  for (const Mat& Bj : B)
    if (Bj.rows() != pair.m() || Bj.cols() != D.cols())
      throw DimensionError("B_j must be m x q with q = cols(D)");
}

Mat tuple_power_word(const Tuple& A, const Word& v) {
  const Eigen::Index m = A.front().rows();
  Mat P = Mat::Identity(m, m);
  for (int k : v.letters) P = P * A.at(k - 1);
  return P;
}

double commutator_defect(const Tuple& A) {
  double worst = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = i + 1; j < A.size(); ++j)
      worst = std::max(worst, spectral_norm(A[i] * A[j] - A[j] * A[i]));
  return worst;
}

bool is_commutative(const Tuple& A, double tol) {
  double scale = 0.0;
  for (const Mat& Aj : A) scale = std::max(scale, spectral_norm(Aj));
  return commutator_defect(A) <= tol * std::max(scale * scale, 1e-300);
}

Mat tuple_power_multi(const Tuple& A, const MultiIndex& n, double tol) {
  if (!is_commutative(A, tol))
    throw HypothesisError("tuple_power_multi: tuple is not commutative");
  const Eigen::Index m = A.front().rows();
  Mat P = Mat::Identity(m, m);
  for (int j = 0; j < n.dim(); ++j)
    for (int k = 0; k < n[j]; ++k) P = P * A.at(j);
  return P;
}

Mat pencil(const Tuple& A, const Point& lambda) {
  if (lambda.size() != A.size()) throw DimensionError("point has wrong dimension");
  Mat Z = Mat::Zero(A.front().rows(), A.front().cols());
  for (std::size_t j = 0; j < A.size(); ++j) Z += lambda[j] * A[j];
  return Z;
}

namespace {
Vec lookup(const std::map<Word, Vec>& s, const Word& v, Eigen::Index dim) {
  auto it = s.find(v);
  if (it == s.end()) return Vec::Zero(dim);
  if (it->second.size() != dim) throw DimensionError("input vector has wrong size");
  return it->second;
}

Vec lookup(const std::map<MultiIndex, Vec>& s, const MultiIndex& n, Eigen::Index dim) {
  auto it = s.find(n);
  if (it == s.end()) return Vec::Zero(dim);
  if (it->second.size() != dim) throw DimensionError("input vector has wrong size");
  return it->second;
}
}  // namespace

NCTrajectory nc_simulate(const SystemRealization& sys, const Vec& x0,
                         const WordSignal& u, int N) {
  sys.validate();
  const int d = sys.d();
  if (x0.size() != sys.pair.m()) throw DimensionError("x0 has wrong size");
  NCTrajectory t;
  t.depth = N;
  t.d = d;
  const Word unit = Word::unit(d);
  t.x[unit] = x0;
  for (int level = 0; level <= N; ++level) {
    for (const Word& v : enumerate_words(d, level)) {
      const Vec uv = lookup(u, v, sys.q());
      const Vec& xv = t.x.at(v);
      t.u[v] = uv;
      t.y[v] = sys.pair.C * xv + sys.D * uv;
      if (level == N) continue;
      for (int j = 1; j <= d; ++j)
        t.x[v.prepend(j)] = sys.pair.A[j - 1] * xv + sys.B[j - 1] * uv;
    }
  }
  return t;
}

LatticeTrajectory lattice_simulate(const SystemRealization& sys, const Vec& x0,
                                   const LatticeSignal& u, int N) {
  sys.validate();
  const int d = sys.d();
  if (x0.size() != sys.pair.m()) throw DimensionError("x0 has wrong size");
  LatticeTrajectory t;
  t.depth = N;
  t.d = d;
  for (int level = 0; level <= N; ++level) {
    for (const MultiIndex& n : enumerate_multi(d, level)) {
      Vec xn = Vec::Zero(sys.pair.m());
      if (level == 0) {
        xn = x0;
      } else {
        for (int k = 1; k <= d; ++k) {
          auto prev = n.minus(k);
          if (!prev) continue;
          xn += sys.pair.A[k - 1] * t.x.at(*prev) +
                sys.B[k - 1] * lookup(u, *prev, sys.q());
        }
      }
      const Vec un = lookup(u, n, sys.q());
      t.x[n] = xn;
      t.u[n] = un;
      t.y[n] = sys.pair.C * xn + sys.D * un;
    }
  }
  return t;
}

LatticeSignal project_signal(const WordSignal& s, int d) {
  LatticeSignal out;
  for (const auto& [v, val] : s) {
    MultiIndex n = abelianize(Word(v.letters, d));
    auto it = out.find(n);
    if (it == out.end())
      out.emplace(std::move(n), val);
    else
      it->second += val;
  }
  return out;
}

LatticeTrajectory project_trajectory(const NCTrajectory& t) {
  LatticeTrajectory out;
  out.depth = t.depth;
  out.d = t.d;
  out.x = project_signal(t.x, t.d);
  out.y = project_signal(t.y, t.d);
  out.u = project_signal(t.u, t.d);
  return out;
}

Mat nc_transfer_coeff(const SystemRealization& sys, const Word& v) {
  if (v.empty()) return sys.D;
  const Word w(std::vector<int>(v.letters.begin(), v.letters.end() - 1), v.d);
  return sys.pair.C * tuple_power_word(sys.pair.A, w) * sys.B.at(v.last() - 1);
}

Mat resolvent_row(const OutputPair& pair, const Point& lambda) {
  const Eigen::Index m = pair.m();
  const Mat M = Mat::Identity(m, m) - pencil(pair.A, lambda);
  Eigen::FullPivLU<Mat> lu(M);
  if (!lu.isInvertible()) throw NumericError("resolvent I - Z(lambda)A is singular");
  return pair.C * lu.inverse();
}

Mat comm_transfer_eval(const SystemRealization& sys, const Point& lambda) {
  Mat ZB = Mat::Zero(sys.pair.m(), sys.q());
  for (std::size_t j = 0; j < sys.B.size(); ++j) ZB += lambda.at(j) * sys.B[j];
  return sys.D + resolvent_row(sys.pair, lambda) * ZB;
}

}  // namespace mdlsys
