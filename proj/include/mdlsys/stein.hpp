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

#ifndef MDLSYS_STEIN_HPP
#define MDLSYS_STEIN_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdlsys/combinatorics.hpp"
#include "mdlsys/numerics.hpp"
#include "mdlsys/systems.hpp"

namespace mdlsys {

// X -> sum_j A_j* X A_j.
struct CPMap {
  Tuple A;
  Mat operator()(const Mat& X) const;
};

Mat cp_apply(const Tuple& A, const Mat& X);

enum class SeriesVerdict { converged, diverged, inconclusive };
std::string to_string(SeriesVerdict v);

inline constexpr int kDefaultMaxLevel = 500;
// Partial sums above this multiple of ||C*C|| count as divergence.
inline constexpr double kBlowUpFactor = 1e6;
// Levels allowed without a geometric certificate before divergence.
inline constexpr int kCertificateDeadline = 60;
// Number of trailing ratios used by the geometric certificate.
inline constexpr int kCertificateWindow = 5;

struct GramianReport {
  Mat value;
  int levelsUsed = 0;
  double tailEstimate = 0.0;  // sigma_N r/(1-r), or sigma_N when uncertified
  double ratio = 1.0;         // max trailing ratio r
  bool certified = false;
  bool converged = false;
  SeriesVerdict verdict = SeriesVerdict::inconclusive;
  double steinResidual = 0.0;  // NC gramian only; NaN for the abelianized one
  std::vector<double> levelNorms;    // sigma_N
  std::vector<double> partialNorms;  // ||sum_{k<=N}||
  double tol = kDefaultTol;
};

GramianReport nc_gramian(const OutputPair& pair, int maxLevel = kDefaultMaxLevel,
                         double tol = kDefaultTol);

// W(n) = sum_{a(u)=n} A^u via W(n) = sum_i W(n - e_i) A_i, W(0) = I.
struct AbelianPowerTable {
  int depth = 0;
  std::map<MultiIndex, Mat> W;
  const Mat& operator()(const MultiIndex& n) const { return W.at(n); }
};

AbelianPowerTable abelian_power_table(const Tuple& A, int N);

// Rows C W(n) for all |n| = level, computed from the previous level.
std::map<MultiIndex, Mat> next_cw_level(const Tuple& A,
                                        const std::map<MultiIndex, Mat>& prev,
                                        int d, int level);

// sum_n (n!/|n|!) W(n)* C*C W(n).
GramianReport ab_gramian(const OutputPair& pair, int maxTotalDegree = kDefaultMaxLevel,
                         double tol = kDefaultTol);

struct ReverseSteinReport {
  Mat residual;       // C*C - G^a + sum A_j* G^a A_j, PSD in theory
  Mat complementary;  // G^a - sum A_j* G^a A_j
  HermitianVerdict verdict;  // on residual
  HermitianVerdict complementaryVerdict;
};

ReverseSteinReport reverse_stein_residual(const OutputPair& pair,
                                          const GramianReport& abGramian,
                                          double tol = kDefaultTol);

struct ReverseSteinCertificate {
  int depth = 0;
  std::map<MultiIndex, Mat> blocks;  // S_n for 1 <= |n| <= depth
  Mat sum;
  double maxR = 0.0;  // largest ||R_{n,i,j}||
};

ReverseSteinCertificate reverse_stein_certificate(const OutputPair& pair, int N);

enum class StabilityVerdict { stable, unstable, inconclusive };
std::string to_string(StabilityVerdict v);

struct StabilityReport {
  std::vector<double> levels;  // sigma_N = ||Phi^N(H)||
  StabilityVerdict verdict = StabilityVerdict::inconclusive;
  Mat delta;  // last iterate Phi^N(H), the estimate of the strong limit
  double ratio = 1.0;
  double tol = kDefaultTol;
};

StabilityReport strong_stability(const Tuple& A, const std::optional<Mat>& H = std::nullopt,
                                 int maxLevel = kDefaultMaxLevel, double tol = kDefaultTol);

enum class SteinMode { equation, strictlyPositiveSearch };

struct SteinSolveReport {
  SteinMode mode = SteinMode::equation;
  bool found = false;
  Mat H;
  int nullity = 0;
  double residual = 0.0;
  // Which uniqueness hypotheses held for this pair.
  bool contractive = false;  // I - sum A_j* A_j - C*C >= 0
  StabilityVerdict stability = StabilityVerdict::inconclusive;
  double phiSpectralRadius = 0.0;
  std::vector<double> deltas;  // delta values tried
  double delta = 0.0;          // delta used
  Mat S;                       // H = S* S
  std::optional<OutputPair> similar;  // (C S^{-1}, S A_j S^{-1})
  std::string message;
};

SteinSolveReport stein_solve(const OutputPair& pair, SteinMode mode,
                             double tol = kDefaultTol);

// Spectral radius of Phi acting on m x m matrices.
double cp_spectral_radius(const Tuple& A);

// I - sum A_j* A_j - C*C.
Mat contractivity_defect(const OutputPair& pair);

// max ||C A^v - C A^u|| over |v| = |u| <= depth with a(v) = a(u). Zero
// exactly when the pair is C-abelian up to that depth.
double c_abelian_defect(const OutputPair& pair, int depth);

struct ObservabilityReport {
  bool observable = false;
  bool exactlyObservable = false;
  bool aObservable = false;
  bool exactlyAObservable = false;
  Mat unobservableBasis;   // columns, orthonormal
  Mat aUnobservableBasis;  // columns, orthonormal
  std::vector<int> rankByLength;  // rank of span{(C A^v)*: |v| <= k}
  std::vector<int> aRankByDegree; // rank of span{(C W(n))*: |n| <= k}
  bool kernelInclusion = false;   // Ker G inside Ker G^a
  double tol = kDefaultTol;
};

// Orthonormal basis of span{(C A^v)*} (nc) or span{(C W(n))*} (abelian).
// Degree m suffices for both: a vanishing Taylor block up to degree m - 1
// forces C (I - Z A)^{-1} x = 0 because its numerator over det(I - Z A)
// has degree < m. The nc span is A*-invariant once a level adds nothing.
Mat observability_span_basis(const OutputPair& pair, bool abelian,
                             double tol = kDefaultTol,
                             std::vector<int>* ranks = nullptr);

// Projection onto (Ker O)^perp for the chosen flavor.
Mat observable_projection(const OutputPair& pair, bool abelian, double tol = kDefaultTol);

ObservabilityReport observability_analysis(const OutputPair& pair,
                                           double tol = kDefaultTol);

struct QSteinReport {
  Mat Q;
  HermitianVerdict inequality;  // on Q - sum A_j* Q A_j - C*C
  double equalityResidual = 0.0;
  bool equality = false;
  double kernelInvarianceResidual = 0.0;  // max_j ||P_perp A_j P_ker||
  double offDiagonalResidual = 0.0;       // max_j ||P_ker A_j P_perp||, the A_{j2} block
  bool offDiagonalZero = false;
  double restrictedIsometryResidual = 0.0;  // (C0, A0) on Ker^perp
  bool restrictedIsometric = false;
  HermitianVerdict gramianBelowQ;  // Q - G
  HermitianVerdict qBelowIdentity;
};

// Requires a contractive pair; throws HypothesisError otherwise.
QSteinReport q_stein_analysis(const OutputPair& pair, double tol = kDefaultTol);

}  // namespace mdlsys

#endif  // MDLSYS_STEIN_HPP
