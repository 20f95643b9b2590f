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

#include <doctest.h>

#include <cmath>

#include "mdlsys/errors.hpp"
#include "mdlsys/numerics.hpp"
#include "test_util.hpp"

using namespace mdlsys;
using namespace mdlsys::testing;

TEST_CASE("norms on hand matrices") {
  Mat D = Mat::Zero(3, 3);
  D.diagonal() << 1.0, cplx(0, -3.0), 2.0;
  CHECK(spectral_norm(D) == doctest::Approx(3.0));
  CHECK(max_abs(D) == doctest::Approx(3.0));
  CHECK(all_finite(D));
  D(0, 1) = NAN;
  CHECK(!all_finite(D));
  CHECK(scaled_tol(1e-9, 0.5) == 1e-9);
  CHECK(scaled_tol(1e-9, 100.0) == doctest::Approx(1e-7));
}

TEST_CASE("psd_check") {
  Mat H(2, 2);
  H << 2.0, 1.0, 1.0, 2.0;  // eigenvalues 1, 3
  auto v = psd_check(H);
  CHECK(v.isPSD);
  CHECK(v.minEigenvalue == doctest::Approx(1.0));
  H << 1.0, 2.0, 2.0, 1.0;  // eigenvalues -1, 3
  v = psd_check(H);
  CHECK(!v.isPSD);
  CHECK(v.minEigenvalue == doctest::Approx(-1.0));
  CHECK((H * v.witness + v.witness).norm() < 1e-12);
  Mat N(2, 2);
  N << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(psd_check(N), NumericError);
  // Rounding-sized negatives are accepted.
  Mat Z = Mat::Zero(2, 2);
  Z(1, 1) = -1e-12;
  CHECK(psd_check(Z).isPSD);
}

TEST_CASE("hermitian factor and square root") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const Mat X = random_matrix(rng, 4, 3);
    const Mat H = X * X.adjoint();  // rank 3
    const Mat S = hermitian_factor(H);
    CHECK(max_abs(S.adjoint() * S - H) < 1e-10 * (1 + spectral_norm(H)));
    const Mat R = psd_sqrt(H);
    CHECK(max_abs(R * R - H) < 1e-10 * (1 + spectral_norm(H)));
    CHECK(max_abs(R - R.adjoint()) < 1e-12 * (1 + spectral_norm(H)));
  }
  Mat I = -Mat::Identity(2, 2);
  CHECK_THROWS_AS(hermitian_factor(I), NumericError);
}

TEST_CASE("rank and bases") {
  std::mt19937_64 rng(5);
  const Mat M = random_matrix(rng, 5, 2) * random_matrix(rng, 2, 4);
  CHECK(numerical_rank(M) == 2);
  const Mat R = range_basis(M);
  const Mat K = null_basis(M);
  CHECK(R.cols() == 2);
  CHECK(K.cols() == 2);
  CHECK(max_abs(R.adjoint() * R - Mat::Identity(2, 2)) < 1e-12);
  CHECK(max_abs(M * K) < 1e-10);
  CHECK(max_abs(R * R.adjoint() * M - M) < 1e-10);
  Mat D = Mat::Zero(3, 3);
  D.diagonal() << 4.0, 2.0, 0.5;
  CHECK(smallest_singular_value(D) == doctest::Approx(0.5));
}

TEST_CASE("stein operator matches the direct map") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    Tuple A{random_matrix(rng, 3, 3), random_matrix(rng, 3, 3)};
    const Mat H = random_matrix(rng, 3, 3);
    Mat direct = H;
    for (const Mat& Aj : A) direct -= Aj.adjoint() * H * Aj;
    const Vec vh = Eigen::Map<const Vec>(H.data(), 9);
    const Vec out = stein_operator_matrix(A) * vh;
    CHECK(max_abs(vec_to_mat(out, 3, 3) - direct) < 1e-10);
  }
}

TEST_CASE("sylvester solve: scalar oracle and singular case") {
  // h - |a|^2 h - |b|^2 h = c
  Tuple A{Mat::Constant(1, 1, cplx(0.3, 0.4)), Mat::Constant(1, 1, cplx(0.5, 0.0))};
  const auto s = solve_sylvester_vectorized(A, Mat::Constant(1, 1, 2.0));
  CHECK(!s.singular);
  CHECK(s.H(0, 0).real() == doctest::Approx(2.0 / (1 - 0.25 - 0.25)));
  // A = I: the operator is zero, every H solves the homogeneous equation.
  Tuple I{Mat::Identity(2, 2)};
  const auto z = solve_sylvester_vectorized(I, Mat::Zero(2, 2));
  CHECK(z.singular);
  CHECK(z.nullity == 4);
}
