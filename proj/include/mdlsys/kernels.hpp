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

#ifndef MDLSYS_KERNELS_HPP
#define MDLSYS_KERNELS_HPP

#include <optional>
#include <string>
#include <vector>

#include "mdlsys/numerics.hpp"
#include "mdlsys/stein.hpp"
#include "mdlsys/systems.hpp"

namespace mdlsys {

enum class KernelFlavor { noncommutative, commutative, commutativeInverseGramian };
std::string to_string(KernelFlavor f);

struct KernelHandle {
  OutputPair pair;
  Mat H;
  KernelFlavor flavor = KernelFlavor::commutative;
};

// Smallest eigenvalue of G^a accepted by the inverse-gramian flavor.
inline constexpr double kInverseGramianFloor = 1e-8;

// H defaults to I. The inverse-gramian flavor ignores H and uses (G^a)^{-1};
// it throws HypothesisError unless G^a converges with eigmin > 1e-8.
KernelHandle make_kernel(const OutputPair& pair, KernelFlavor flavor,
                         const std::optional<Mat>& H = std::nullopt,
                         double tol = kDefaultTol);

// C A^alpha H (A^beta)* C*.
Mat nc_kernel_coeff(const KernelHandle& kh, const Word& alpha, const Word& beta);

// C (I - Z(lambda)A)^{-1} H (I - A* Z(zeta)*)^{-1} C*.
Mat ab_kernel_eval(const KernelHandle& kh, const Point& lambda, const Point& zeta);

// 1 / (1 - <lambda, zeta>); throws NumericError when |<lambda, zeta>| >= 1.
cplx arveson_kernel(const Point& lambda, const Point& zeta);

struct KernelGram {
  Mat gram;
  HermitianVerdict verdict;
};

KernelGram kernel_gram(const KernelHandle& kh, const std::vector<Point>& points,
                       double tol = kDefaultTol);

enum class EquivalenceMode { nc, commutative };

struct Equivalence {
  Mat U;
  double residualC = 0.0;     // ||C - C~ U||
  double residualA = 0.0;     // max_j ||U A_j - A~_j U||
  double unitarity = 0.0;     // ||U* U - I||
  double matchResidual = 0.0; // least-squares fit of the correspondence
};

inline constexpr double kEquivalenceTol = 1e-8;

// Least-squares representative U of (A^b)* C* y -> (A~^b)* C~* y (words in nc
// mode, W(n) in commutative mode). Absent if a check exceeds tol. Throws
// HypothesisError when either pair is unobservable in the chosen sense.
std::optional<Equivalence> unitary_equivalence(const OutputPair& a, const OutputPair& b,
                                               EquivalenceMode mode,
                                               double tol = kEquivalenceTol);

struct ContainmentReport {
  bool hypothesesHold = false;
  std::vector<std::string> failedHypotheses;
  std::optional<Mat> V;     // X -> X~ with C = C~ V, V A_j = A~_j V, V* V = I
  double residualC = 0.0;
  double residualA = 0.0;
  double isometry = 0.0;
};

// Both pairs must be isometric with commuting, strongly stable tuples;
// failures are listed and V is left absent.
ContainmentReport containment_isometry(const OutputPair& a, const OutputPair& b,
                                       double tol = kEquivalenceTol);

// <H Q x, Q y> with Q the projection onto (Ker O)^perp of the chosen flavor.
cplx lifted_inner_product(const OutputPair& pair, const Mat& H, const Vec& x, const Vec& y,
                          bool abelian, double tol = kDefaultTol);

}  // namespace mdlsys

#endif  // MDLSYS_KERNELS_HPP
