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

#include "mdlsys/catalog.hpp"
#include "mdlsys/errors.hpp"
#include "mdlsys/stein.hpp"
#include "mdlsys/systems.hpp"
#include "test_util.hpp"

using namespace mdlsys;
using namespace mdlsys::testing;

namespace {

SystemRealization random_system(std::mt19937_64& rng, Eigen::Index m, int d, Eigen::Index p,
                                Eigen::Index q) {
  OutputPair pr = random_contractive_pair(rng, m, d, p, 0.8);
  Tuple B;
  for (int j = 0; j < d; ++j) B.push_back(random_matrix(rng, m, q));
  return SystemRealization(pr, B, random_matrix(rng, p, q));
}

WordSignal random_input(std::mt19937_64& rng, int d, int N, Eigen::Index q) {
  WordSignal u;
  for (const Word& w : enumerate_words_upto(d, N)) u[w] = random_matrix(rng, q, 1).col(0);
  return u;
}

Point scalar_point(std::initializer_list<cplx> z) { return Point(z); }

}  // namespace

TEST_CASE("word powers") {
  const OutputPair as = a_stable_pair();
  CHECK(max_abs(tuple_power_word(as.A, Word::unit(2)) - Mat::Identity(3, 3)) == 0.0);
  Mat expect = Mat::Zero(3, 3);
  expect(0, 0) = 2.0;
  expect(2, 2) = -2.0;
  CHECK(max_abs(tuple_power_word(as.A, Word::parse("12", 2)) - expect) == 0.0);
  std::mt19937_64 rng(1);
  Tuple A{random_matrix(rng, 3, 3), random_matrix(rng, 3, 3)};
  CHECK(max_abs(tuple_power_word(A, Word::parse("121", 2)) - A[0] * A[1] * A[0]) < 1e-12);
}

TEST_CASE("multi-index powers need commuting tuples") {
  Tuple A{Mat::Constant(1, 1, 2.0)};
  CHECK(tuple_power_multi(A, MultiIndex({3}))(0, 0) == cplx(8.0));
  CHECK(max_abs(tuple_power_multi(A, MultiIndex({0})) - Mat::Identity(1, 1)) == 0.0);
  Mat D1 = Mat::Zero(2, 2), D2 = Mat::Zero(2, 2);
  D1.diagonal() << 2.0, 3.0;
  D2.diagonal() << cplx(0, 1), 0.5;
  Mat expect = Mat::Zero(2, 2);
  expect.diagonal() << 2.0 * cplx(0, 1) * cplx(0, 1), 3.0 * 0.25;
  CHECK(max_abs(tuple_power_multi({D1, D2}, MultiIndex({1, 2})) - expect) < 1e-15);
  CHECK_THROWS_AS(tuple_power_multi(a_stable_pair().A, MultiIndex({1, 1})), HypothesisError);
  CHECK(is_commutative({D1, D2}));
  CHECK(!is_commutative(a_stable_pair().A));
  CHECK(commutator_defect({D1, D2}) == 0.0);
}

TEST_CASE("nc simulation: example and trivial cases") {
  const OutputPair ao = a_obs_pair();
  SystemRealization sys(ao, {Mat::Zero(4, 1), Mat::Zero(4, 1)}, Mat::Zero(1, 1));
  const NCTrajectory t = nc_simulate(sys, Vec::Unit(4, 0), {}, 3);
  CHECK(std::abs(t.y.at(Word::parse("12", 2))(0) - cplx(-1.0 / 128)) < 1e-15);

  // A = 0, B = 0: y(v) = D u(v) below the root.
  std::mt19937_64 rng(2);
  SystemRealization z(OutputPair(random_matrix(rng, 1, 2), {Mat::Zero(2, 2), Mat::Zero(2, 2)}),
                      {Mat::Zero(2, 1), Mat::Zero(2, 1)}, Mat::Constant(1, 1, 3.0));
  const WordSignal u = random_input(rng, 2, 3, 1);
  const Vec x0 = random_matrix(rng, 2, 1).col(0);
  const NCTrajectory tz = nc_simulate(z, x0, u, 3);
  CHECK(std::abs(tz.y.at(Word::unit(2))(0) - (z.pair.C * x0)(0) - 3.0 * u.at(Word::unit(2))(0)) < 1e-14);
  CHECK(std::abs(tz.y.at(Word::parse("21", 2))(0) - 3.0 * u.at(Word::parse("21", 2))(0)) < 1e-14);
}

TEST_CASE("impulse response equals transfer coefficients") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 5; ++t) {
    const SystemRealization sys = random_system(rng, 3, 2, 2, 2);
    const Vec u0 = random_matrix(rng, 2, 1).col(0);
    WordSignal u{{Word::unit(2), u0}};
    const NCTrajectory tr = nc_simulate(sys, Vec::Zero(3), u, 4);
    for (const Word& v : enumerate_words_upto(2, 4))
      CHECK((tr.y.at(v) - nc_transfer_coeff(sys, v) * u0).norm() < 1e-12);
    CHECK(max_abs(nc_transfer_coeff(sys, Word::unit(2)) - sys.D) == 0.0);
    CHECK(max_abs(nc_transfer_coeff(sys, Word::parse("2", 2)) - sys.pair.C * sys.B[1]) < 1e-15);
  }
}

TEST_CASE("nc output is the sum over word expansions of the input") {
  // y(v) = C A^v x0 + D u(v) + sum over splittings v = s j p of C A^s B_j u(p),
  // the convolution form of the recursion written out by brute force.
  std::mt19937_64 rng(6);
  const SystemRealization sys = random_system(rng, 2, 2, 1, 1);
  const WordSignal u = random_input(rng, 2, 3, 1);
  const Vec x0 = random_matrix(rng, 2, 1).col(0);
  const NCTrajectory tr = nc_simulate(sys, x0, u, 3);
  for (const Word& v : enumerate_words_upto(2, 3)) {
    Vec y = sys.pair.C * tuple_power_word(sys.pair.A, v) * x0 + sys.D * u.at(v);
    for (std::size_t k = 0; k < v.length(); ++k) {
      const Word s(std::vector<int>(v.letters.begin(), v.letters.begin() + k), 2);
      const int j = v.letters[k];
      const Word p(std::vector<int>(v.letters.begin() + k + 1, v.letters.end()), 2);
      y += sys.pair.C * tuple_power_word(sys.pair.A, s) * sys.B[j - 1] * u.at(p);
    }
    CHECK((tr.y.at(v) - y).norm() < 1e-12);
  }
}

TEST_CASE("lattice simulation") {
  // d = 1 and zero input: x(n) = A^n x0.
  Mat a = Mat::Constant(1, 1, 0.5);
  SystemRealization s1(OutputPair(Mat::Identity(1, 1), {a}), {Mat::Zero(1, 1)}, Mat::Zero(1, 1));
  const LatticeTrajectory t1 = lattice_simulate(s1, Vec::Ones(1), {}, 5);
  CHECK(std::abs(t1.x.at(MultiIndex({5}))(0) - std::pow(0.5, 5)) < 1e-15);

  // Paper a-stable pair with x0 = e_1: W((1,1)) e_1 has zero first coordinate.
  SystemRealization as(a_stable_pair(), {Mat::Zero(3, 1), Mat::Zero(3, 1)}, Mat::Zero(1, 1));
  const LatticeTrajectory t2 = lattice_simulate(as, Vec::Unit(3, 0), {}, 3);
  CHECK(std::abs(t2.y.at(MultiIndex({1, 1}))(0)) < 1e-15);

  // A = 0: x(n) = sum_j B_j u(n - e_j).
  std::mt19937_64 rng(8);
  Tuple B{random_matrix(rng, 2, 1), random_matrix(rng, 2, 1)};
  SystemRealization s0(OutputPair(Mat::Identity(2, 2), {Mat::Zero(2, 2), Mat::Zero(2, 2)}), B,
                       Mat::Zero(2, 1));
  LatticeSignal u;
  for (const MultiIndex& n : enumerate_multi_upto(2, 3)) u[n] = random_matrix(rng, 1, 1).col(0);
  const LatticeTrajectory t0 = lattice_simulate(s0, Vec::Zero(2), u, 3);
  const MultiIndex n({1, 2});
  CHECK((t0.x.at(n) - B[0] * u.at(MultiIndex({0, 2})) - B[1] * u.at(MultiIndex({1, 1}))).norm() < 1e-14);
}

TEST_CASE("property: abelianized nc trajectory equals the lattice trajectory") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const int d = 2 + t % 2;
    const SystemRealization sys = random_system(rng, 3, d, 2, 1);
    const WordSignal u = random_input(rng, d, 4, 1);
    const Vec x0 = random_matrix(rng, 3, 1).col(0);
    const LatticeTrajectory a = project_trajectory(nc_simulate(sys, x0, u, 4));
    const LatticeTrajectory b = lattice_simulate(sys, x0, project_signal(u, d), 4);
    for (const auto& [n, y] : b.y) CHECK((a.y.at(n) - y).cwiseAbs().maxCoeff() <= 1e-12);
    for (const auto& [n, x] : b.x) CHECK((a.x.at(n) - x).cwiseAbs().maxCoeff() <= 1e-12);
  }
  // depth 0: identical data at the root
  const SystemRealization sys = random_system(rng, 2, 2, 1, 1);
  const WordSignal u = random_input(rng, 2, 0, 1);
  const LatticeTrajectory a = project_trajectory(nc_simulate(sys, Vec::Ones(2), u, 0));
  const LatticeTrajectory b = lattice_simulate(sys, Vec::Ones(2), project_signal(u, 2), 0);
  CHECK((a.y.at(MultiIndex::zero(2)) - b.y.at(MultiIndex::zero(2))).norm() == 0.0);
}

TEST_CASE("commutative transfer function") {
  std::mt19937_64 rng(14);
  const SystemRealization sys = random_system(rng, 3, 2, 1, 1);
  CHECK(max_abs(comm_transfer_eval(sys, scalar_point({0.0, 0.0})) - sys.D) < 1e-15);
  // d = 1: D + lambda C (1 - lambda A)^{-1} B
  SystemRealization s1(OutputPair(Mat::Constant(1, 1, 2.0), {Mat::Constant(1, 1, 0.5)}),
                       {Mat::Constant(1, 1, 3.0)}, Mat::Constant(1, 1, 1.0));
  const cplx l(0.3, 0.2);
  CHECK(std::abs(comm_transfer_eval(s1, {l})(0, 0) - (1.0 + l * 2.0 * 3.0 / (1.0 - l * 0.5))) < 1e-14);

  // Taylor coefficients by central finite differences match sum_{a(v)=n} T_v.
  const double h = 1e-3;
  auto F = [&](double a, double b) { return comm_transfer_eval(sys, scalar_point({a, b}))(0, 0); };
  const cplx d1 = (F(h, 0) - F(-h, 0)) / (2 * h);
  const cplx d12 = (F(h, h) - F(h, -h) - F(-h, h) + F(-h, -h)) / (4 * h * h);
  const cplx t1 = nc_transfer_coeff(sys, Word::parse("1", 2))(0, 0);
  const cplx t12 = nc_transfer_coeff(sys, Word::parse("12", 2))(0, 0) +
                   nc_transfer_coeff(sys, Word::parse("21", 2))(0, 0);
  CHECK(std::abs(d1 - t1) < 1e-5);
  CHECK(std::abs(d12 - t12) < 1e-4);
}

TEST_CASE("resolvent row on the a-stable pair") {
  for (const Point& l : sample_ball_points(2, 5, 0.95, 3)) {
    Mat expect(1, 3);
    expect << 1.0, 2.0 * l[0], 2.0 * l[1];
    CHECK(max_abs(resolvent_row(a_stable_pair(), l) - expect) < 1e-12);
  }
  // singular pencil
  OutputPair one(Mat::Identity(1, 1), {Mat::Identity(1, 1)});
  CHECK_THROWS_AS(resolvent_row(one, {1.0}), NumericError);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(OutputPair(Mat::Identity(2, 2), {Mat::Identity(3, 3)}), DimensionError);
  CHECK_THROWS_AS(OutputPair(Mat::Identity(2, 2), {}), DimensionError);
  CHECK_THROWS_AS(SystemRealization(OutputPair(Mat::Identity(2, 2), {Mat::Identity(2, 2)}),
                                    {Mat::Zero(3, 1)}, Mat::Zero(2, 1)),
                  DimensionError);
}
