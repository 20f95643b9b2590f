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

#ifndef MDLSYS_APPLICATIONS_HPP
#define MDLSYS_APPLICATIONS_HPP

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "mdlsys/numerics.hpp"
#include "mdlsys/spaces.hpp"
#include "mdlsys/stein.hpp"

namespace mdlsys {

enum class Flavor { nc, commutative };
std::string to_string(Flavor f);

struct DilationReport {
  Flavor mode = Flavor::nc;
  int depth = 0;
  Mat defect;  // D_{T*} = (I - sum T_j T_j*)^{1/2}
  int coefficientSpaceDim = 0;
  HermitianVerdict rowContraction;
  bool commuting = true;
  StabilityVerdict adjointStability = StabilityVerdict::inconclusive;
  double rowNorm = 0.0;    // ||sum T_j T_j*||
  double tailBound = 0.0;  // rowNorm^{N+1}
  double obsIsometryResidual = 0.0;  // ||G_N - I||
  bool nearIsometric = false;
  int intertwiningDepth = 0;
  double intertwiningResidual = 0.0;  // backshift vs O T_j* on coefficients
  std::vector<double> compressionResiduals;
  bool hypothesesHold = false;
};

// Pair (D_{T*}, T*) and its observability map; see DilationReport.
DilationReport dilate(const Tuple& T, Flavor mode, int N, double tol = kDefaultTol);

// O* X O with O the depth-N observability matrix of (D_{T*}, T*) in Fock
// coordinates (coefficient dimension m). Throws HypothesisError unless
// ||sum T_j T_j*|| < 1.
Mat poisson_transform(const Tuple& T, const Mat& X, int N);

// Matrix of the right shift S^R_j on FockIndex(d, k, N) coordinates.
Mat fock_shift_matrix(int d, Eigen::Index k, int N, int j);

using NCPolynomial = std::map<Word, cplx>;
using CommPolynomial = std::map<MultiIndex, cplx>;

struct VonNeumannReport {
  double lhs = 0.0;              // ||p(T)||
  std::vector<double> rhsLower;  // ||P_N p(S) P_N||, N = 1..depth
  bool monotone = true;
  bool satisfiedAtTruncation = false;
  std::string note = "probe at finite truncation, not a proof";
};

VonNeumannReport von_neumann_probe(const Tuple& T, const NCPolynomial& p, int N,
                                   double tol = kDefaultTol);
VonNeumannReport von_neumann_probe(const Tuple& T, const CommPolynomial& p, int N,
                                   double tol = kDefaultTol);

struct MultiplierPoly {
  Flavor flavor = Flavor::nc;
  int d = 1;
  int depth = 0;
  Eigen::Index outDim = 1;
  Eigen::Index inDim = 1;
  std::map<Word, Mat> ncCoeffs;
  std::map<MultiIndex, Mat> commCoeffs;
  double normEstimate = 0.0;  // ||P_N M_theta|| on degree <= N inputs
  int normTruncation = 0;
};

struct BeurlingLaxReport {
  MultiplierPoly theta;
  bool shiftInvariant = false;
  double invarianceResidual = 0.0;
  HermitianVerdict contractive;  // I - sum A_j* A_j
  StabilityVerdict adjointStability = StabilityVerdict::inconclusive;
  bool hypothesesHold = false;
  // ||T T* - P_{M_N}|| with T = P_N M_theta: range equals M and M_theta is a
  // partial isometry, exactly on truncated coordinates.
  double coisometryResidual = 0.0;
  bool partialIsometry = false;
  // nc only: ||T* T - I|| on inputs of degree <= N - deg(theta).
  int collarDepth = 0;
  double collarIsometryResidual = 0.0;
  bool normBounded = false;  // ||T|| <= 1 + tol
};

// M given by a basis of truncated polynomials, invariant under the forward
// shifts up to truncation. A_j = (S_j|_M)*, C*C = I - sum A_j* A_j with input
// dimension rank(C), and theta read off as the M-elements C* u.
BeurlingLaxReport beurling_lax(const std::vector<FockPoly>& basis, double tol = kDefaultTol);
BeurlingLaxReport beurling_lax(const std::vector<BallPoly>& basis, double tol = kDefaultTol);

}  // namespace mdlsys

#endif  // MDLSYS_APPLICATIONS_HPP
