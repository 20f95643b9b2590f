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

#ifndef MDLSYS_SYSTEMS_HPP
#define MDLSYS_SYSTEMS_HPP

#include <map>
#include <vector>

#include "mdlsys/combinatorics.hpp"
#include "mdlsys/numerics.hpp"

namespace mdlsys {

// Output map C (p x m) and operator tuple A_1..A_d (m x m).
struct OutputPair {
  Mat C;
  Tuple A;

  OutputPair() = default;
  OutputPair(Mat c, Tuple a);

  int d() const { return static_cast<int>(A.size()); }
  Eigen::Index m() const { return C.cols(); }
  Eigen::Index p() const { return C.rows(); }
  void validate() const;
};

struct SystemRealization {
  OutputPair pair;
  Tuple B;  // d entries, m x q
  Mat D;    // p x q

  SystemRealization() = default;
  SystemRealization(OutputPair pr, Tuple b, Mat dd);

  int d() const { return pair.d(); }
  Eigen::Index q() const { return D.cols(); }
  void validate() const;
};

// A point (lambda_1..lambda_d) of C^d.
using Point = std::vector<cplx>;

using WordSignal = std::map<Word, Vec>;
using LatticeSignal = std::map<MultiIndex, Vec>;

struct NCTrajectory {
  int depth = 0;
  int d = 1;
  WordSignal x, y, u;
};

struct LatticeTrajectory {
  int depth = 0;
  int d = 1;
  LatticeSignal x, y, u;
};

Mat tuple_power_word(const Tuple& A, const Word& v);

// max_{i<j} ||A_i A_j - A_j A_i||, and the relative test against
// tol * max_j ||A_j||^2.
double commutator_defect(const Tuple& A);
bool is_commutative(const Tuple& A, double tol = kDefaultTol);

// A_1^{n_1} ... A_d^{n_d}; throws HypothesisError for non-commuting input.
Mat tuple_power_multi(const Tuple& A, const MultiIndex& n, double tol = kDefaultTol);

// sum_j lambda_j A_j.
Mat pencil(const Tuple& A, const Point& lambda);

// Inputs default to zero where absent.
NCTrajectory nc_simulate(const SystemRealization& sys, const Vec& x0,
                         const WordSignal& u, int N);
LatticeTrajectory lattice_simulate(const SystemRealization& sys, const Vec& x0,
                                   const LatticeSignal& u, int N);

// Sums each signal over the fibers a^{-1}(n).
LatticeSignal project_signal(const WordSignal& s, int d);
LatticeTrajectory project_trajectory(const NCTrajectory& t);

// T_{empty} = D, T_{w j} = C A^w B_j.
Mat nc_transfer_coeff(const SystemRealization& sys, const Word& v);

// C (I - Z(lambda) A)^{-1}; throws NumericError if the resolvent is singular.
Mat resolvent_row(const OutputPair& pair, const Point& lambda);

// D + C (I - Z(lambda) A)^{-1} Z(lambda) B.
Mat comm_transfer_eval(const SystemRealization& sys, const Point& lambda);

}  // namespace mdlsys

#endif  // MDLSYS_SYSTEMS_HPP
