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

#ifndef MDLSYS_SPACES_HPP
#define MDLSYS_SPACES_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "mdlsys/combinatorics.hpp"
#include "mdlsys/numerics.hpp"
#include "mdlsys/systems.hpp"

namespace mdlsys {

// Truncated element of the Fock space: coefficients f_v in C^k for |v| <= depth.
// Absent words are zero. Shifts that push mass past the depth drop it and add
// the dropped norm^2 to leakage.
struct FockPoly {
  int d = 1;
  Eigen::Index k = 1;
  int depth = 0;
  std::map<Word, Vec> coeffs;
  double leakage = 0.0;

  static FockPoly zero(int d, Eigen::Index k, int depth);
  static FockPoly monomial(int d, Eigen::Index k, int depth, const Word& v, const Vec& y);

  Vec coeff(const Word& v) const;
  // Adds y at v; beyond the depth the mass goes to leakage.
  void add(const Word& v, const Vec& y);
  double norm2() const;
  double norm() const;

  FockPoly operator+(const FockPoly& g) const;
  FockPoly operator-(const FockPoly& g) const;
  FockPoly scaled(cplx s) const;
};

cplx fock_inner(const FockPoly& f, const FockPoly& g);

// S^R_j: z^v -> z^{v j}.   (S^R_j)*: f_{v} <- f_{v j}.
// S^L_j: z^v -> z^{j v}.   (S^L_j)*: f_{v} <- f_{j v}.
FockPoly right_shift(int j, const FockPoly& f);
FockPoly right_backshift(int j, const FockPoly& f);
FockPoly left_shift(int j, const FockPoly& f);
FockPoly left_backshift(int j, const FockPoly& f);

// f_v -> index v^T.
FockPoly tau(const FockPoly& f);
Vec eval_E(const FockPoly& f);

// Truncated Arveson-space element: coefficients f_n for |n| <= depth with
// norm^2 = sum_n (n!/|n|!) ||f_n||^2.
struct BallPoly {
  int d = 1;
  Eigen::Index k = 1;
  int depth = 0;
  std::map<MultiIndex, Vec> coeffs;
  double leakage = 0.0;

  static BallPoly zero(int d, Eigen::Index k, int depth);
  static BallPoly monomial(int d, Eigen::Index k, int depth, const MultiIndex& n,
                           const Vec& y);

  Vec coeff(const MultiIndex& n) const;
  void add(const MultiIndex& n, const Vec& y);
  double norm2() const;
  double norm() const;
  Vec eval(const Point& lambda) const;

  BallPoly operator+(const BallPoly& g) const;
  BallPoly operator-(const BallPoly& g) const;
  BallPoly scaled(cplx s) const;
  // Coefficients of degree > N removed.
  BallPoly truncated(int N) const;
};

// n!/|n|!.
double arveson_weight(const MultiIndex& n);
cplx ball_inner(const BallPoly& f, const BallPoly& g);

Vec eval_G(const BallPoly& f);
// M*_j: lambda^m -> (m_j/|m|) lambda^{m - e_j}.
BallPoly arveson_backshift(int j, const BallPoly& f);
// M_j: multiplication by lambda_j.
BallPoly arveson_shift(int j, const BallPoly& f);

// Ordered coordinates for truncated spaces; block size k per index.
struct FockIndex {
  int d = 1;
  Eigen::Index k = 1;
  int depth = 0;
  std::vector<Word> words;
  std::map<Word, Eigen::Index> pos;

  FockIndex(int d, Eigen::Index k, int depth);
  Eigen::Index size() const { return static_cast<Eigen::Index>(words.size()) * k; }
  Vec flatten(const FockPoly& f) const;
  FockPoly unflatten(const Vec& x) const;
  Mat operator_matrix(const std::function<FockPoly(const FockPoly&)>& op) const;
};

struct BallIndex {
  int d = 1;
  Eigen::Index k = 1;
  int depth = 0;
  std::vector<MultiIndex> indices;
  std::map<MultiIndex, Eigen::Index> pos;

  BallIndex(int d, Eigen::Index k, int depth);
  Eigen::Index size() const { return static_cast<Eigen::Index>(indices.size()) * k; }
  Vec flatten(const BallPoly& f) const;
  BallPoly unflatten(const Vec& x) const;
  Mat operator_matrix(const std::function<BallPoly(const BallPoly&)>& op) const;
  // Diagonal Gram of the Arveson inner product in these coordinates.
  Mat gram() const;
};

// sum_v C A^v x z^v and sum_n C W(n) x lambda^n, truncated at N.
FockPoly nc_obs_poly(const OutputPair& pair, const Vec& x, int N);
BallPoly ab_obs_poly(const OutputPair& pair, const Vec& x, int N);

struct ModelPair {
  OutputPair pair;
  FockIndex index;
  Mat U;  // orthonormal columns spanning tau(M), flattened
  bool invariant = false;
  double invarianceResidual = 0.0;  // max_j ||(I - UU*) (S^L_j)* U||
  double isometryDefect = 0.0;      // ||I - C*C - sum A_j* A_j||

  // Coordinates of tau(f) for f in M.
  Vec coordinates_of(const FockPoly& f) const;
};

// X = tau(M), A_j = (S^L_j)*|_X, C = E|_X in orthonormal coordinates of X.
// Throws HypothesisError if X is not left-backshift invariant (equivalently
// M is not right-backshift invariant) or the basis is dependent.
ModelPair model_pair_from_fock_subspace(const std::vector<FockPoly>& basis,
                                        double tol = kDefaultTol);

struct GleasonSolution {
  int d = 1;
  int depth = 0;
  std::vector<BallPoly> basis;  // f_i = O^a V e_i
  Mat V;                        // state coordinates of the basis, m x r
  Tuple T;                      // r x r each
  Mat gram;                     // Arveson Gram of the basis
  Mat C;                        // f_i(0) as columns, p x r
  OutputPair source;
  std::vector<Point> samples;
  double sampleResidual = 0.0;
  bool contractive = false;
  double contractivityMinEig = 0.0;
};

inline constexpr int kDefaultGleasonDepth = 16;

// T_j O^a x = O^a A_j x on (Ker G^a)^perp. Uses the standard basis when
// G^a is injective. Throws HypothesisError when the abelianized gramian
// diverges.
GleasonSolution gleason_from_pair(const OutputPair& pair, int depth = kDefaultGleasonDepth,
                                  double tol = kDefaultTol, std::uint64_t seed = 7);

struct GleasonCheck {
  bool solves = false;
  double residual = 0.0;  // coefficientwise, interior degrees
  bool contractive = false;
  double contractivityMinEig = 0.0;
  bool backshiftInvariant = false;
  double backshiftLeaveResidual = 0.0;  // distance of M*_j f_i to span
  bool equalsBackshift = false;
  double backshiftResidual = 0.0;       // ||M*_j f_i - T_j f_i||
  double tol = kDefaultTol;
};

// Contractivity is sum_j T_j* Gamma T_j <= Gamma - C*C with Gamma the basis
// Gram; pass gammaOverride to test against another Gram.
GleasonCheck gleason_check(const GleasonSolution& s, double tol = kDefaultTol,
                           const Mat* gammaOverride = nullptr);

struct HankelReport {
  std::vector<int> sizes;
  std::vector<int> ranks;
  std::vector<double> smallestScaled;  // after symmetric diagonal scaling
  std::vector<double> smallestRaw;
  bool fullRankThrough = false;
  double rankTol = 1e-10;
};

// H_k = [s_{i+j}]_{0<=i,j<k}, k = 1..n, scaled to unit diagonal by
// D H D with D = diag(|H_ii|^{-1/2}). Rank counts scaled singular values
// above rankTol. Needs seq.size() >= 2n - 1.
HankelReport hankel_rationality_probe(const std::vector<double>& seq, int n,
                                      double rankTol = 1e-10);

}  // namespace mdlsys

#endif  // MDLSYS_SPACES_HPP
