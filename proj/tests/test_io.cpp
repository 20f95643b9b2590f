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

#include <cstdio>
#include <fstream>

#include "mdlsys/catalog.hpp"
#include "mdlsys/errors.hpp"
#include "mdlsys/io.hpp"

using namespace mdlsys;

TEST_CASE("expressions") {
  const Params p{{"a", 0.5}, {"b", cplx(0.0, 2.0)}};
  CHECK(eval_expression("1-a", p) == cplx(0.5));
  CHECK(eval_expression("-a", p) == cplx(-0.5));
  CHECK(eval_expression("2*(a+1)/3", p) == cplx(1.0));
  CHECK(eval_expression("b*i", p) == cplx(-2.0));
  CHECK(std::abs(eval_expression("sqrt(3)/2", {}) - std::sqrt(3.0) / 2.0) < 1e-16);
  CHECK(eval_expression("1e-2", {}) == cplx(0.01));
  CHECK_THROWS_AS(eval_expression("c", p), InputError);
  CHECK_THROWS_AS(eval_expression("1/0", p), InputError);
  CHECK_THROWS_AS(eval_expression("(1", p), InputError);
}

TEST_CASE("system files") {
  const Json doc = parse_json(R"({"d": 2, "stateDim": 3, "inputDim": 1, "outputDim": 1,
    "params": {"a": 0}, "C": [[1, 0, 0]],
    "A": [[[0, 1, 0], [0, 0, 0], ["a", 0, 0]], [[0, 0, 1], ["-a", 0, 0], [0, 0, 0]]]})");
  const SystemRealization s0 = read_system(doc);
  CHECK(max_abs(s0.pair.A[0] - e331_pair(0.0).A[0]) == 0.0);
  const SystemRealization s2 = read_system(doc, {{"a", cplx(0.0, 2.0)}});
  CHECK(max_abs(s2.pair.A[0] - e331_pair(cplx(0.0, 2.0)).A[0]) == 0.0);
  CHECK(max_abs(s2.pair.A[1] - e331_pair(cplx(0.0, 2.0)).A[1]) == 0.0);
  CHECK(max_abs(s0.B[0]) == 0.0);
  CHECK(s0.D.rows() == 1);

  // round trip through the writer
  const SystemRealization back = read_system(parse_json(canonical_dump(system_to_json(s2))));
  CHECK(max_abs(back.pair.A[0] - s2.pair.A[0]) == 0.0);

  Json bad = doc;
  bad["C"] = Json::parse("[[1, 0]]");
  CHECK_THROWS_AS(read_system(bad), DimensionError);
  bad = doc;
  bad["A"].erase(1);
  CHECK_THROWS_AS(read_system(bad), DimensionError);
  bad = doc;
  bad.erase("d");
  CHECK_THROWS_AS(read_system(bad), InputError);
  bad = doc;
  bad["A"][0][0][0] = Json::parse("{}");
  CHECK_THROWS_AS(read_system(bad), InputError);
}

TEST_CASE("parse errors carry line context") {
  try {
    parse_json("{\n  \"d\": 2,\n  \"x\": [1, 2,,]\n}", "sys.json");
    FAIL("expected a parse error");
  } catch (const InputError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("sys.json:3") != std::string::npos);
    CHECK(msg.find("[1, 2,,]") != std::string::npos);
  }
  CHECK_THROWS_AS(read_json_file("/nonexistent/x.json"), InputError);
}

TEST_CASE("points and simulation input") {
  const auto pts = read_points(Json::parse(R"({"points": [[0.5, [0, 1]], [[1, 2], 0]]})"));
  REQUIRE(pts.size() == 2);
  CHECK(pts[0][1] == cplx(0.0, 1.0));
  CHECK(pts[1][0] == cplx(1.0, 2.0));
  const SimulationInput in = read_simulation_input(Json::parse(R"({"x0": [1, 2], "u": {"": [1], "12": [3]}})"), 2, 2, 1);
  CHECK(in.u.at(Word::parse("12", 2))(0) == cplx(3.0));
  CHECK(in.u.at(Word::unit(2))(0) == cplx(1.0));
  CHECK_THROWS_AS(read_simulation_input(Json::parse(R"({"x0": [1]})"), 2, 2, 1), DimensionError);
}

TEST_CASE("polynomial serialization round trips") {
  FockPoly f = FockPoly::zero(2, 2, 3);
  Vec y(2);
  y << 1.0, cplx(0.0, -1.0);
  f.add(Word::parse("12", 2), y);
  f.add(Word::unit(2), 2.0 * y);
  const FockPoly g = fock_from_json(to_json(f));
  CHECK((g - f).norm() == 0.0);
  CHECK(to_json(f)["coeffs"].contains("12"));

  BallPoly b = BallPoly::zero(2, 1, 4);
  b.add(MultiIndex({1, 2}), Vec::Constant(1, 0.25));
  const BallPoly c = ball_from_json(to_json(b));
  CHECK((c - b).norm() == 0.0);
  CHECK(to_json(b)["coeffs"][0]["index"] == Json::parse("[1, 2]"));

  Json over = to_json(f);
  over["coeffs"]["1212"] = Json::parse("[1, 0]");
  CHECK_THROWS_AS(fock_from_json(over), InputError);
}

TEST_CASE("canonical dump") {
  Json j;
  j["b"] = 0.1;
  j["a"] = 1;
  j["c"] = std::nan("");
  j["d"] = 2.0;
  const std::string s = canonical_dump(j);
  CHECK(s.find("\"a\": 1") < s.find("\"b\""));
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  CHECK(s.find("\"nan\"") != std::string::npos);
  CHECK(s.find("2.0") != std::string::npos);
  CHECK(canonical_dump(j) == s);
}
