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

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "mdlsys/errors.hpp"

using namespace mdlsys;

namespace {

void add_common(CLI::App* sub, cli::Request& r) {
  sub->add_option("--truncation", r.truncation, "Truncation depth N")->check(CLI::PositiveNumber);
  sub->add_option("--tol", r.tol, "Tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--seed", r.seed, "Seed for randomized sampling");
  sub->add_option("--out", r.out, "Write the report here instead of stdout");
  sub->add_option("--param", r.params, "Parameter override name=value");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mdlsys: multidimensional linear systems toolkit"};
  app.require_subcommand(1);
  cli::Request r;

  auto* analyze = app.add_subcommand("analyze", "Gramians, stability and observability of a system");
  analyze->add_option("system", r.inputs, "System JSON")->required()->expected(1);
  analyze->add_option("--mode", r.mode, "nc, commutative or both")
      ->check(CLI::IsMember({"nc", "commutative", "both"}));
  add_common(analyze, r);

  auto* simulate = app.add_subcommand("simulate", "Run both system flavors and compare them");
  simulate->add_option("files", r.inputs, "System JSON and input JSON")->required()->expected(2);
  simulate->add_option("--depth", r.truncation, "Trajectory depth")->check(CLI::PositiveNumber);
  simulate->add_option("--mode", r.mode, "nc, commutative or both")
      ->check(CLI::IsMember({"nc", "commutative", "both"}));
  add_common(simulate, r);

  auto* kernel = app.add_subcommand("kernel", "Kernel Gram matrix on a point set");
  std::string points;
  kernel->add_option("pair", r.inputs, "System JSON")->required()->expected(1);
  kernel->add_option("--points", points, "Points JSON")->required();
  kernel->add_option("--flavor", r.flavor, "nc, commutative or inverse")
      ->check(CLI::IsMember({"nc", "commutative", "inverse"}));
  add_common(kernel, r);

  auto* gleason = app.add_subcommand("gleason", "Solve the Gleason problem for a pair");
  gleason->add_option("system", r.inputs, "System JSON")->required()->expected(1);
  add_common(gleason, r);

  auto* dilate = app.add_subcommand("dilate", "Shift dilation of the tuple A of a system file");
  dilate->add_option("system", r.inputs, "System JSON")->required()->expected(1);
  dilate->add_option("--mode", r.mode, "nc or commutative")
      ->check(CLI::IsMember({"nc", "commutative"}));
  add_common(dilate, r);

  auto* bl = app.add_subcommand("beurling-lax", "Inner multiplier of a shift-invariant subspace");
  bl->add_option("basis", r.inputs, "Basis JSON")->required()->expected(1);
  add_common(bl, r);

  auto* example = app.add_subcommand("paper-example", "Run a registered example");
  example->add_option("id", r.inputs, "Example id")->required()->expected(1);
  add_common(example, r);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (!points.empty()) r.inputs.push_back(points);
  if (dilate->parsed() && r.mode == "both") r.mode = "nc";

  try {
    cli::Outcome out;
    if (analyze->parsed()) r.command = "analyze", out = cli::cmd_analyze(r);
    else if (simulate->parsed()) r.command = "simulate", out = cli::cmd_simulate(r);
    else if (kernel->parsed()) r.command = "kernel", out = cli::cmd_kernel(r);
    else if (gleason->parsed()) r.command = "gleason", out = cli::cmd_gleason(r);
    else if (dilate->parsed()) r.command = "dilate", out = cli::cmd_dilate(r);
    else if (bl->parsed()) r.command = "beurling-lax", out = cli::cmd_beurling_lax(r);
    else r.command = "paper-example", out = cli::cmd_paper_example(r);
    out.report["request"] = cli::echo(r);
    const std::string text = canonical_dump(out.report);
    if (r.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(r.out);
      if (!f) throw InputError("cannot write " + r.out);
      f << text;
    }
    return out.ok ? 0 : 1;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const DimensionError& e) {
    std::cerr << "dimension error: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
