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

#ifndef MDLSYS_IO_HPP
#define MDLSYS_IO_HPP

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdlsys/spaces.hpp"
#include "mdlsys/systems.hpp"

namespace mdlsys {

using Json = nlohmann::json;  // std::map backed, so keys come out sorted

using Params = std::map<std::string, cplx>;

// Reads a file and parses it; parse errors carry the line and its text.
Json read_json_file(const std::string& path);
Json parse_json(const std::string& text, const std::string& source = "<string>");

// Entries: number, [re, im], or a string expression over "params"
// (numbers, parameter names, i, + - * /, parentheses).
cplx eval_expression(const std::string& expr, const Params& params);
cplx read_entry(const Json& j, const Params& params);
Mat read_matrix(const Json& j, const Params& params);
Vec read_vector(const Json& j, const Params& params);

// "params" object of the file with the overrides applied on top.
Params read_params(const Json& doc, const Params& overrides = {});

SystemRealization read_system(const Json& doc, const Params& overrides = {});
SystemRealization read_system_file(const std::string& path, const Params& overrides = {});

std::vector<Point> read_points(const Json& j);

// {"x0": vector, "u": {"<word>": vector, ...}}, words as digit strings.
struct SimulationInput {
  Vec x0;
  WordSignal u;
};
SimulationInput read_simulation_input(const Json& j, int d, Eigen::Index m, Eigen::Index q);

Json to_json(cplx z);
Json to_json(const Mat& M);
Json to_json(const Vec& v);
Json to_json(const Tuple& T);
Json system_to_json(const SystemRealization& sys);

// {"kind": "fock", "d", "k", "depth", "coeffs": {"<word>": vector}}
Json to_json(const FockPoly& f);
FockPoly fock_from_json(const Json& j);
// {"kind": "ball", ..., "coeffs": [{"index": [..], "value": vector}]}
Json to_json(const BallPoly& f);
BallPoly ball_from_json(const Json& j);

// Sorted keys, two-space indent, floats as %.17g, non-finite as strings.
std::string canonical_dump(const Json& j);

}  // namespace mdlsys

#endif  // MDLSYS_IO_HPP
