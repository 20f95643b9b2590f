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

#include "mdlsys/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mdlsys/errors.hpp"

namespace mdlsys {

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // Turn the byte offset into a line number and show that line.
    std::size_t line = 1, start = 0;
    const std::size_t at = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < at; ++i)
      if (text[i] == '\n') {
        ++line;
        start = i + 1;
      }
    const std::size_t end = text.find('\n', start);
    throw InputError(source + ":" + std::to_string(line) + ": " + e.what() + "\n  " +
                     text.substr(start, end == std::string::npos ? std::string::npos : end - start));
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

namespace {

// Recursive descent over complex numbers.
class ExprParser {
 public:
  ExprParser(const std::string& s, const Params& p) : s_(s), params_(p) {}

  cplx parse() {
    cplx v = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& why) {
    throw InputError("expression '" + s_ + "': " + why);
  }

  cplx sum() {
    cplx v = product();
    for (;;) {
      if (eat('+')) v += product();
      else if (eat('-')) v -= product();
      else return v;
    }
  }
  cplx product() {
    cplx v = unary();
    for (;;) {
      if (eat('*')) v *= unary();
      else if (eat('/')) {
        const cplx r = unary();
        if (r == cplx(0.0)) fail("division by zero");
        v /= r;
      } else return v;
    }
  }
  cplx unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return atom();
  }
  cplx atom() {
    skip();
    if (eat('(')) {
      cplx v = sum();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      const double x = std::stod(s_.substr(pos_), &used);
      pos_ += used;
      return x;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t b = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      const std::string name = s_.substr(b, pos_ - b);
      if (auto it = params_.find(name); it != params_.end()) return it->second;
      if (name == "i") return cplx(0.0, 1.0);
      if (name == "sqrt") {
        if (!eat('(')) fail("sqrt needs '('");
        cplx v = sum();
        if (!eat(')')) fail("missing ')'");
        return std::sqrt(v);
      }
      fail("unknown parameter '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  const Params& params_;
  std::size_t pos_ = 0;
};

}  // namespace

cplx eval_expression(const std::string& expr, const Params& params) {
  return ExprParser(expr, params).parse();
}

cplx read_entry(const Json& j, const Params& params) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return eval_expression(j.get<std::string>(), params);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InputError("bad matrix entry " + j.dump());
}

Mat read_matrix(const Json& j, const Params& params) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw InputError("matrix must be a non-empty array of rows: " + j.dump());
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  Mat M(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw DimensionError("matrix row " + std::to_string(r) + " has the wrong length");
    for (Eigen::Index c = 0; c < cols; ++c) M(r, c) = read_entry(row[static_cast<std::size_t>(c)], params);
  }
  return M;
}

Vec read_vector(const Json& j, const Params& params) {
  if (!j.is_array()) throw InputError("vector must be an array: " + j.dump());
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = read_entry(j[i], params);
  return v;
}

Params read_params(const Json& doc, const Params& overrides) {
  Params p;
  if (doc.contains("params")) {
    if (!doc["params"].is_object()) throw InputError("\"params\" must be an object");
    for (const auto& [k, v] : doc["params"].items()) p[k] = read_entry(v, {});
  }
  for (const auto& [k, v] : overrides) p[k] = v;
  return p;
}

namespace {

int get_int(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer())
    throw InputError(std::string("system file needs integer \"") + key + "\"");
  return doc[key].get<int>();
}

}  // namespace

SystemRealization read_system(const Json& doc, const Params& overrides) {
  if (!doc.is_object()) throw InputError("system file must be a JSON object");
  const Params params = read_params(doc, overrides);
  const int d = get_int(doc, "d");
  const int m = get_int(doc, "stateDim");
  const int p = get_int(doc, "outputDim");
  const int q = doc.contains("inputDim") ? get_int(doc, "inputDim") : 1;
  if (d < 1 || m < 1 || p < 1 || q < 1) throw DimensionError("dimensions must be >= 1");
  if (!doc.contains("A") || !doc["A"].is_array() || static_cast<int>(doc["A"].size()) != d)
    throw DimensionError("\"A\" must list d = " + std::to_string(d) + " matrices");
  if (!doc.contains("C")) throw InputError("system file needs \"C\"");
  auto check = [](const Mat& M, Eigen::Index r, Eigen::Index c, const std::string& what) {
    if (M.rows() != r || M.cols() != c)
      throw DimensionError(what + " is " + std::to_string(M.rows()) + " x " +
                           std::to_string(M.cols()) + ", expected " + std::to_string(r) +
                           " x " + std::to_string(c));
  };
  Tuple A, B;
  for (int j = 0; j < d; ++j) {
    A.push_back(read_matrix(doc["A"][j], params));
    check(A.back(), m, m, "A_" + std::to_string(j + 1));
  }
  if (doc.contains("B")) {
    if (!doc["B"].is_array() || static_cast<int>(doc["B"].size()) != d)
      throw DimensionError("\"B\" must list d matrices");
    for (int j = 0; j < d; ++j) {
      B.push_back(read_matrix(doc["B"][j], params));
      check(B.back(), m, q, "B_" + std::to_string(j + 1));
    }
  } else {
    B.assign(d, Mat::Zero(m, q));
  }
  Mat C = read_matrix(doc["C"], params);
  check(C, p, m, "C");
  Mat D = doc.contains("D") ? read_matrix(doc["D"], params) : Mat::Zero(p, q);
  check(D, p, q, "D");
  return SystemRealization(OutputPair(std::move(C), std::move(A)), std::move(B), std::move(D));
}

SystemRealization read_system_file(const std::string& path, const Params& overrides) {
  const Json doc = read_json_file(path);
  try {
    return read_system(doc, overrides);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const DimensionError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::vector<Point> read_points(const Json& j) {
  const Json& list = j.is_object() && j.contains("points") ? j["points"] : j;
  if (!list.is_array()) throw InputError("points must be an array of points");
  std::vector<Point> out;
  for (const Json& pt : list) {
    if (!pt.is_array()) throw InputError("point must be an array of coordinates");
    Point p;
    for (const Json& c : pt) p.push_back(read_entry(c, {}));
    out.push_back(std::move(p));
  }
  return out;
}

SimulationInput read_simulation_input(const Json& j, int d, Eigen::Index m, Eigen::Index q) {
  SimulationInput in;
  in.x0 = j.contains("x0") ? read_vector(j["x0"], {}) : Vec::Zero(m);
  if (in.x0.size() != m) throw DimensionError("x0 must have stateDim entries");
  if (j.contains("u")) {
    if (!j["u"].is_object()) throw InputError("\"u\" must map words to vectors");
    for (const auto& [w, v] : j["u"].items()) {
      Vec u = read_vector(v, {});
      if (u.size() != q) throw DimensionError("input at word '" + w + "' must have inputDim entries");
      in.u[Word::parse(w, d)] = u;
    }
  }
  return in;
}

Json to_json(cplx z) {
  if (z.imag() == 0.0) return z.real();
  return Json::array({z.real(), z.imag()});
}

Json to_json(const Mat& M) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(to_json(M(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
  return a;
}

Json to_json(const Tuple& T) {
  Json a = Json::array();
  for (const Mat& M : T) a.push_back(to_json(M));
  return a;
}

Json system_to_json(const SystemRealization& sys) {
  Json j;
  j["d"] = sys.d();
  j["stateDim"] = sys.pair.m();
  j["outputDim"] = sys.pair.p();
  j["inputDim"] = sys.q();
  j["A"] = to_json(sys.pair.A);
  j["B"] = to_json(sys.B);
  j["C"] = to_json(sys.pair.C);
  j["D"] = to_json(sys.D);
  return j;
}

Json to_json(const FockPoly& f) {
  Json j;
  j["kind"] = "fock";
  j["d"] = f.d;
  j["k"] = f.k;
  j["depth"] = f.depth;
  Json c = Json::object();
  for (const auto& [w, v] : f.coeffs) c[w.str()] = to_json(v);
  j["coeffs"] = c;
  return j;
}

FockPoly fock_from_json(const Json& j) {
  if (!j.is_object() || j.value("kind", "fock") != "fock")
    throw InputError("expected a fock polynomial");
  const int d = j.at("d").get<int>();
  const Eigen::Index k = j.value("k", 1);
  FockPoly f = FockPoly::zero(d, k, j.at("depth").get<int>());
  for (const auto& [w, v] : j.at("coeffs").items()) {
    Vec y = read_vector(v, {});
    if (y.size() != k) throw DimensionError("coefficient at '" + w + "' must have k entries");
    f.add(Word::parse(w, d), y);
  }
  if (f.leakage > 0.0) throw InputError("coefficient beyond the declared depth");
  return f;
}

Json to_json(const BallPoly& f) {
  Json j;
  j["kind"] = "ball";
  j["d"] = f.d;
  j["k"] = f.k;
  j["depth"] = f.depth;
  Json c = Json::array();
  for (const auto& [n, v] : f.coeffs) c.push_back({{"index", n.n}, {"value", to_json(v)}});
  j["coeffs"] = c;
  return j;
}

BallPoly ball_from_json(const Json& j) {
  if (!j.is_object() || j.value("kind", "") != "ball") throw InputError("expected a ball polynomial");
  const int d = j.at("d").get<int>();
  const Eigen::Index k = j.value("k", 1);
  BallPoly f = BallPoly::zero(d, k, j.at("depth").get<int>());
  for (const Json& e : j.at("coeffs")) {
    MultiIndex n(e.at("index").get<std::vector<int>>());
    if (n.dim() != d) throw DimensionError("multi-index " + n.str() + " has the wrong length");
    Vec y = read_vector(e.at("value"), {});
    if (y.size() != k) throw DimensionError("coefficient at " + n.str() + " must have k entries");
    f.add(n, y);
  }
  if (f.leakage > 0.0) throw InputError("coefficient beyond the declared depth");
  return f;
}

namespace {

void dump_float(std::string& out, double x) {
  if (std::isnan(x)) {
    out += "\"nan\"";
    return;
  }
  if (std::isinf(x)) {
    out += x > 0 ? "\"inf\"" : "\"-inf\"";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s = buf;
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  out += s;
}

void dump(std::string& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(k).dump() + ": ";
        dump(out, v, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const Json& e : j)
        if (e.is_structured() && !(e.is_array() && e.size() == 2 && e[0].is_number())) flat = false;
      out += flat ? "[" : "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += flat ? ", " : ",\n";
        if (!flat) out += inner;
        dump(out, j[i], indent + 1);
      }
      out += flat ? "]" : "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float:
      dump_float(out, j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

std::string canonical_dump(const Json& j) {
  std::string out;
  dump(out, j, 0);
  out += "\n";
  return out;
}

}  // namespace mdlsys
