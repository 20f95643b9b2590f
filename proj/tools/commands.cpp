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

#include "commands.hpp"

#include <algorithm>
#include <cmath>

#include "mdlsys/applications.hpp"
#include "mdlsys/catalog.hpp"
#include "mdlsys/errors.hpp"
#include "mdlsys/kernels.hpp"
#include "mdlsys/spaces.hpp"
#include "mdlsys/stein.hpp"

namespace mdlsys::cli {

Json echo(const Request& r) {
  return {{"command", r.command}, {"inputs", r.inputs}, {"truncation", r.truncation},
          {"tol", r.tol},         {"mode", r.mode},     {"seed", r.seed},
          {"params", r.params},   {"flavor", r.flavor}};
}

Params parse_params(const std::vector<std::string>& specs) {
  Params p;
  for (const std::string& s : specs) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw InputError("--param expects name=value, got '" + s + "'");
    p[s.substr(0, eq)] = eval_expression(s.substr(eq + 1), {});
  }
  return p;
}

namespace {

Json verdict_json(const HermitianVerdict& v) {
  return {{"isPSD", v.isPSD}, {"minEigenvalue", v.minEigenvalue}, {"tol", v.tol}};
}

Json gramian_json(const GramianReport& g) {
  Json j = {{"verdict", to_string(g.verdict)}, {"converged", g.converged},
            {"certified", g.certified},         {"levelsUsed", g.levelsUsed},
            {"tailEstimate", g.tailEstimate},  {"ratio", g.ratio},
            {"tol", g.tol}};
  if (g.converged) j["value"] = to_json(g.value);
  if (!std::isnan(g.steinResidual)) j["steinResidual"] = g.steinResidual;
  j["lastPartialNorm"] = g.partialNorms.empty() ? 0.0 : g.partialNorms.back();
  return j;
}

Json spectrum_json(const Mat& H) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(H), Eigen::EigenvaluesOnly);
  return std::vector<double>(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
}

// Deepest word level with at most ~4096 words.
int word_budget(int d, int N) {
  int depth = 0;
  long long total = 1, level = 1;
  while (depth < N) {
    level *= d;
    if (total + level > 4096) break;
    total += level;
    ++depth;
  }
  return depth;
}

}  // namespace

Outcome cmd_analyze(const Request& r) {
  const SystemRealization sys = read_system_file(r.inputs.at(0), parse_params(r.params));
  const OutputPair& pair = sys.pair;
  Outcome out;
  Json& rep = out.report;
  rep["system"] = system_to_json(sys);
  rep["commutativity"] = {{"commutatorDefect", commutator_defect(pair.A)},
                          {"commutative", is_commutative(pair.A, r.tol)},
                          {"tol", r.tol}};
  const int cDepth = word_budget(pair.d(), r.truncation);
  rep["cAbelian"] = {{"depth", cDepth},
                     {"defect", c_abelian_defect(pair, cDepth)},
                     {"cAbelian", c_abelian_defect(pair, cDepth) <= scaled_tol(r.tol, spectral_norm(pair.C))},
                     {"tol", r.tol}};
  const StabilityReport st = strong_stability(pair.A, std::nullopt, kDefaultMaxLevel, r.tol);
  rep["stability"] = {{"verdict", to_string(st.verdict)}, {"ratio", st.ratio}, {"tol", st.tol}};
  std::optional<GramianReport> gn, ga;
  if (r.mode != "commutative") {
    gn = nc_gramian(pair, kDefaultMaxLevel, r.tol);
    rep["ncGramian"] = gramian_json(*gn);
    if (gn->converged) rep["ncGramian"]["spectrum"] = spectrum_json(gn->value);
  }
  if (r.mode != "nc") {
    ga = ab_gramian(pair, kDefaultMaxLevel, r.tol);
    rep["abGramian"] = gramian_json(*ga);
    if (ga->converged) {
      rep["abGramian"]["spectrum"] = spectrum_json(ga->value);
      const ReverseSteinReport rs = reverse_stein_residual(pair, *ga, r.tol);
      rep["reverseStein"] = {{"residual", to_json(rs.residual)},
                             {"residualPSD", verdict_json(rs.verdict)},
                             {"complementary", to_json(rs.complementary)},
                             {"complementaryPSD", verdict_json(rs.complementaryVerdict)}};
    }
  }
  if (gn && ga && gn->converged && ga->converged)
    rep["gramianOrder"] = verdict_json(psd_check(hermitian_part(gn->value - ga->value), r.tol));

  const ObservabilityReport ob = observability_analysis(pair, r.tol);
  rep["observability"] = {{"observable", ob.observable},
                          {"exactlyObservable", ob.exactlyObservable},
                          {"aObservable", ob.aObservable},
                          {"exactlyAObservable", ob.exactlyAObservable},
                          {"rankByLength", ob.rankByLength},
                          {"aRankByDegree", ob.aRankByDegree},
                          {"unobservableBasis", to_json(ob.unobservableBasis)},
                          {"aUnobservableBasis", to_json(ob.aUnobservableBasis)},
                          {"kernelInclusion", ob.kernelInclusion},
                          {"tol", ob.tol}};

  const HermitianVerdict contractive = psd_check(hermitian_part(contractivity_defect(pair)), r.tol);
  if (contractive.isPSD) {
    const QSteinReport q = q_stein_analysis(pair, r.tol);
    rep["qStein"] = {{"Q", to_json(q.Q)},
                     {"inequality", verdict_json(q.inequality)},
                     {"equality", q.equality},
                     {"equalityResidual", q.equalityResidual},
                     {"kernelInvarianceResidual", q.kernelInvarianceResidual},
                     {"offDiagonalZero", q.offDiagonalZero},
                     {"offDiagonalResidual", q.offDiagonalResidual},
                     {"restrictedIsometric", q.restrictedIsometric},
                     {"restrictedIsometryResidual", q.restrictedIsometryResidual},
                     {"gramianBelowQ", verdict_json(q.gramianBelowQ)},
                     {"qBelowIdentity", verdict_json(q.qBelowIdentity)}};
  } else {
    rep["qStein"] = {{"skipped", "pair is not contractive"}, {"contractivity", verdict_json(contractive)}};
  }
  return out;
}

Outcome cmd_simulate(const Request& r) {
  const SystemRealization sys = read_system_file(r.inputs.at(0), parse_params(r.params));
  const SimulationInput in =
      read_simulation_input(read_json_file(r.inputs.at(1)), sys.d(), sys.pair.m(), sys.q());
  const int N = r.truncation;
  Outcome out;
  Json& rep = out.report;
  const NCTrajectory nc = nc_simulate(sys, in.x0, in.u, N);
  const LatticeTrajectory lt = lattice_simulate(sys, in.x0, project_signal(in.u, sys.d()), N);
  if (r.mode != "commutative") {
    Json y = Json::object();
    for (const auto& [w, v] : nc.y) y[w.str()] = to_json(v);
    rep["ncOutput"] = y;
  }
  if (r.mode != "nc") {
    Json y = Json::object();
    for (const auto& [n, v] : lt.y) y[n.str()] = to_json(v);
    rep["latticeOutput"] = y;
  }
  if (r.mode == "both") {
    const LatticeTrajectory pr = project_trajectory(nc);
    double res = 0.0;
    for (const auto& [n, v] : lt.y) res = std::max(res, (pr.y.at(n) - v).cwiseAbs().maxCoeff());
    for (const auto& [n, v] : lt.x) res = std::max(res, (pr.x.at(n) - v).cwiseAbs().maxCoeff());
    const double tol = scaled_tol(1e3 * r.tol, 1.0);
    rep["piDiagram"] = {{"residual", res}, {"commutes", res <= tol}, {"tol", tol}};
    out.ok = res <= tol;
  }
  return out;
}

Outcome cmd_kernel(const Request& r) {
  const SystemRealization sys = read_system_file(r.inputs.at(0), parse_params(r.params));
  const std::vector<Point> pts = read_points(read_json_file(r.inputs.at(1)));
  for (const Point& p : pts)
    if (static_cast<int>(p.size()) != sys.d()) throw DimensionError("points must have d coordinates");
  Outcome out;
  if (r.flavor == "nc") {
    // Coefficient Gram over all word pairs up to the truncation budget.
    const KernelHandle kh = make_kernel(sys.pair, KernelFlavor::noncommutative, std::nullopt, r.tol);
    const auto words = enumerate_words_upto(sys.d(), std::min(word_budget(sys.d(), r.truncation), 4));
    const Eigen::Index p = sys.pair.p();
    const Eigen::Index n = static_cast<Eigen::Index>(words.size());
    Mat G(n * p, n * p);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) G.block(a * p, b * p, p, p) = nc_kernel_coeff(kh, words[a], words[b]);
    const HermitianVerdict v = psd_check(hermitian_part(G), r.tol);
    out.report = {{"flavor", "nc"}, {"words", static_cast<int>(n)}, {"psd", verdict_json(v)}};
    out.ok = v.isPSD;
    return out;
  }
  const KernelFlavor fl =
      r.flavor == "inverse" ? KernelFlavor::commutativeInverseGramian : KernelFlavor::commutative;
  const KernelHandle kh = make_kernel(sys.pair, fl, std::nullopt, r.tol);
  const KernelGram kg = kernel_gram(kh, pts, r.tol);
  out.report = {{"flavor", to_string(fl)}, {"gram", to_json(kg.gram)}, {"psd", verdict_json(kg.verdict)}};
  out.ok = kg.verdict.isPSD;
  return out;
}

Outcome cmd_gleason(const Request& r) {
  const SystemRealization sys = read_system_file(r.inputs.at(0), parse_params(r.params));
  const GleasonSolution gs = gleason_from_pair(sys.pair, std::min(r.truncation, kDefaultGleasonDepth), r.tol, r.seed);
  const GleasonCheck gc = gleason_check(gs, r.tol);
  Outcome out;
  out.report = {{"T", to_json(gs.T)},
                {"V", to_json(gs.V)},
                {"gram", to_json(gs.gram)},
                {"C", to_json(gs.C)},
                {"depth", gs.depth},
                {"sampleResidual", gs.sampleResidual},
                {"solves", gc.solves},
                {"residual", gc.residual},
                {"contractive", gc.contractive},
                {"contractivityMinEig", gc.contractivityMinEig},
                {"backshiftInvariant", gc.backshiftInvariant},
                {"backshiftLeaveResidual", gc.backshiftLeaveResidual},
                {"equalsBackshift", gc.equalsBackshift},
                {"backshiftResidual", gc.backshiftResidual},
                {"tol", gc.tol},
                {"seed", r.seed}};
  out.ok = gc.solves;
  return out;
}

Outcome cmd_dilate(const Request& r) {
  const SystemRealization sys = read_system_file(r.inputs.at(0), parse_params(r.params));
  const Flavor mode = r.mode == "commutative" ? Flavor::commutative : Flavor::nc;
  const DilationReport d = dilate(sys.pair.A, mode, r.truncation, r.tol);
  Outcome out;
  out.report = {{"mode", to_string(mode)},
                {"depth", d.depth},
                {"defect", to_json(d.defect)},
                {"coefficientSpaceDim", d.coefficientSpaceDim},
                {"rowContraction", verdict_json(d.rowContraction)},
                {"commuting", d.commuting},
                {"adjointStability", to_string(d.adjointStability)},
                {"rowNorm", d.rowNorm},
                {"tailBound", d.tailBound},
                {"obsIsometryResidual", d.obsIsometryResidual},
                {"nearIsometric", d.nearIsometric},
                {"intertwiningDepth", d.intertwiningDepth},
                {"intertwiningResidual", d.intertwiningResidual},
                {"compressionResiduals", d.compressionResiduals},
                {"hypothesesHold", d.hypothesesHold},
                {"tol", r.tol}};
  out.ok = d.hypothesesHold && d.nearIsometric;
  return out;
}

Outcome cmd_beurling_lax(const Request& r) {
  const Json doc = read_json_file(r.inputs.at(0));
  const std::string kind = doc.value("kind", "fock");
  if (!doc.contains("basis") || !doc["basis"].is_array()) throw InputError("basis file needs a \"basis\" array");
  BeurlingLaxReport bl;
  for (const char* key : {"d", "depth"})
    if (!doc.contains(key)) throw InputError(std::string("basis file needs \"") + key + "\"");
  auto fill = [&](Json e) {
    e["kind"] = kind;
    e["d"] = doc["d"];
    e["k"] = doc.value("k", 1);
    e["depth"] = doc["depth"];
    return e;
  };
  Json theta = Json::object();
  if (kind == "fock") {
    std::vector<FockPoly> basis;
    for (const Json& e : doc["basis"]) basis.push_back(fock_from_json(fill(e)));
    bl = beurling_lax(basis, r.tol);
    for (const auto& [w, c] : bl.theta.ncCoeffs) theta[w.str()] = to_json(c);
  } else if (kind == "ball") {
    std::vector<BallPoly> basis;
    for (const Json& e : doc["basis"]) basis.push_back(ball_from_json(fill(e)));
    bl = beurling_lax(basis, r.tol);
    for (const auto& [n, c] : bl.theta.commCoeffs) theta[n.str()] = to_json(c);
  } else {
    throw InputError("basis kind must be fock or ball");
  }
  Outcome out;
  out.report = {{"flavor", to_string(bl.theta.flavor)},
                {"theta", theta},
                {"inputDim", bl.theta.inDim},
                {"normEstimate", bl.theta.normEstimate},
                {"normBounded", bl.normBounded},
                {"shiftInvariant", bl.shiftInvariant},
                {"invarianceResidual", bl.invarianceResidual},
                {"contractive", verdict_json(bl.contractive)},
                {"adjointStability", to_string(bl.adjointStability)},
                {"hypothesesHold", bl.hypothesesHold},
                {"partialIsometry", bl.partialIsometry},
                {"coisometryResidual", bl.coisometryResidual},
                {"collarDepth", bl.collarDepth},
                {"collarIsometryResidual", bl.collarIsometryResidual},
                {"tol", r.tol}};
  out.ok = bl.hypothesesHold && bl.partialIsometry && bl.normBounded;
  return out;
}

Outcome cmd_paper_example(const Request& r) {
  const ExampleOutcome e = run_paper_example(r.inputs.at(0), r.tol, r.seed);
  Outcome out;
  out.report = e.report;
  out.report["verdict"] = e.pass ? "PASS" : "FAIL";
  out.ok = e.pass;
  return out;
}

}  // namespace mdlsys::cli
