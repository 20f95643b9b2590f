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

#ifndef MDLSYS_TOOLS_COMMANDS_HPP
#define MDLSYS_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mdlsys/io.hpp"

namespace mdlsys::cli {

struct Request {
  std::string command;
  std::vector<std::string> inputs;
  int truncation = 20;
  double tol = 1e-9;
  std::string mode = "both";
  std::uint64_t seed = 7;
  std::vector<std::string> params;  // name=value
  std::string flavor = "commutative";
  std::string out;
};

struct Outcome {
  Json report;
  bool ok = true;  // false maps to exit code 1
};

Json echo(const Request& r);
Params parse_params(const std::vector<std::string>& specs);

Outcome cmd_analyze(const Request& r);
Outcome cmd_simulate(const Request& r);
Outcome cmd_kernel(const Request& r);
Outcome cmd_gleason(const Request& r);
Outcome cmd_dilate(const Request& r);
Outcome cmd_beurling_lax(const Request& r);
Outcome cmd_paper_example(const Request& r);

}  // namespace mdlsys::cli

#endif  // MDLSYS_TOOLS_COMMANDS_HPP
