#include "stcf/problem_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace stcf {

void check_format(const Json& doc) {
  if (!doc.is_object()) throw InputError("(root)", "expected a JSON object");
  if (!doc.contains("format")) return;
  const Json& f = doc["format"];
  if (!f.is_string() || f.get<std::string>() != kFormatTag) {
    throw InputError("format", std::string("unsupported format (expected \"") + kFormatTag + "\")");
  }
}

namespace {

double number(const Json& v, const std::string& field) {
  if (!v.is_number()) throw InputError(field, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw InputError(field, "must be finite");
  return d;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

Vec vector_of(const Json& v, const std::string& field) {
  if (!v.is_array()) throw InputError(field, "expected an array of numbers");
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = number(v[i], field + "[" + std::to_string(i) + "]");
  }
  return out;
}

std::size_t index_of(const Json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 0) throw InputError(field, "expected a non-negative integer");
  return static_cast<std::size_t>(v.get<long long>());
}

const Json& require(const Json& obj, const char* key, const std::string& field) {
  if (!obj.is_object()) throw InputError(field, "expected an object");
  if (!obj.contains(key)) throw InputError(field + "." + key, "missing");
  return obj[key];
}

Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

}  // namespace

double parse_lambda(const Json& v, const std::string& field) {
  if (v.is_string()) {
    const std::string s = lower(v.get<std::string>());
    if (s == "inf" || s == "+inf" || s == "infinity") return kInf;
    throw InputError(field, "expected a number or \"inf\"");
  }
  const double d = number(v, field);
  return d;
}

Json lambda_to_json(double lambda) { return lambda == kInf ? Json("inf") : Json(lambda); }

TruncatedQuadratic parse_truncated_quadratic(const Json& v, const std::string& field, std::size_t dim) {
  const Json& jA = require(v, "A", field);
  const Json& jb = require(v, "b", field);
  Mat A;
  Vec b;
  if (jA.is_number()) {
    A = Mat::Constant(1, 1, number(jA, field + ".A"));
  } else {
    if (!jA.is_array() || jA.empty()) throw InputError(field + ".A", "expected a square matrix");
    const std::size_t n = jA.size();
    A.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const std::string fr = field + ".A[" + std::to_string(i) + "]";
      if (!jA[i].is_array() || jA[i].size() != n) throw InputError(fr, "expected a row of length " + std::to_string(n));
      for (std::size_t j = 0; j < n; ++j) {
        A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            number(jA[i][j], fr + "[" + std::to_string(j) + "]");
      }
    }
  }
  if (jb.is_number()) {
    b = Vec::Constant(1, number(jb, field + ".b"));
  } else {
    b = vector_of(jb, field + ".b");
  }
  if (b.size() != A.rows()) throw InputError(field + ".b", "length differs from the size of A");
  if (dim != 0 && static_cast<std::size_t>(b.size()) != dim) {
    throw InputError(field + ".A", "expected dimension " + std::to_string(dim));
  }
  const double c = v.contains("c") ? number(v["c"], field + ".c") : 0.0;
  const double lambda = v.contains("lambda") ? parse_lambda(v["lambda"], field + ".lambda") : kInf;
  const Mat As = 0.5 * (A + A.transpose());
  if (As.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(As, Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, As.cwiseAbs().maxCoeff());
    if (eig.eigenvalues().minCoeff() < -1e-12 * scale) throw InputError(field + ".A", "must be positive semidefinite");
  }
  return TruncatedQuadratic{Quadratic(As, b, c), lambda};
}

Json truncated_quadratic_to_json(const TruncatedQuadratic& tq) {
  Json A = Json::array();
  for (Eigen::Index i = 0; i < tq.q.A().rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < tq.q.A().cols(); ++j) row.push_back(tq.q.A()(i, j));
    A.push_back(row);
  }
  return Json{{"A", A}, {"b", vec_json(tq.q.b())}, {"c", tq.q.c()}, {"lambda", lambda_to_json(tq.lambda)}};
}

std::vector<TruncatedQuadratic> parse_quadratic_problem(const Json& doc, std::size_t dim) {
  check_format(doc);
  const Json& terms = require(doc, "terms", "(root)");
  if (!terms.is_array() || terms.empty()) throw InputError("terms", "expected a non-empty array");
  std::vector<TruncatedQuadratic> fs;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    fs.push_back(parse_truncated_quadratic(terms[i], "terms[" + std::to_string(i) + "]", dim));
    if (fs.back().q.dim() != fs.front().q.dim()) {
      throw InputError("terms[" + std::to_string(i) + "].A", "dimension differs from terms[0]");
    }
  }
  return fs;
}

Json quadratic_problem_to_json(const std::vector<TruncatedQuadratic>& fs) {
  Json terms = Json::array();
  for (const auto& f : fs) terms.push_back(truncated_quadratic_to_json(f));
  return Json{{"format", kFormatTag}, {"terms", terms}};
}

SparseTruncatedSum parse_sparse_problem(const Json& doc, Vec* x0) {
  check_format(doc);
  const std::size_t dim = index_of(require(doc, "dim", "(root)"), "dim");
  if (dim == 0) throw InputError("dim", "must be positive");
  const Json& terms = require(doc, "terms", "(root)");
  if (!terms.is_array()) throw InputError("terms", "expected an array");
  SparseTruncatedSum p(dim);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string field = "terms[" + std::to_string(t) + "]";
    const Json& js = require(terms[t], "support", field);
    if (!js.is_array() || js.empty()) throw InputError(field + ".support", "expected a non-empty index list");
    std::vector<std::size_t> support;
    for (std::size_t k = 0; k < js.size(); ++k) {
      const std::string fk = field + ".support[" + std::to_string(k) + "]";
      support.push_back(index_of(js[k], fk));
      if (support.back() >= dim) throw InputError(fk, "index out of range");
      if (std::count(support.begin(), support.end(), support.back()) > 1) throw InputError(fk, "repeated index");
    }
    const double lambda =
        terms[t].contains("lambda") ? parse_lambda(terms[t]["lambda"], field + ".lambda") : kInf;
    if (terms[t].contains("coefs")) {
      const Vec z = vector_of(terms[t]["coefs"], field + ".coefs");
      if (static_cast<std::size_t>(z.size()) != support.size()) {
        throw InputError(field + ".coefs", "length differs from support");
      }
      const double a = number(require(terms[t], "a", field), field + ".a");
      if (a < 0.0) throw InputError(field + ".a", "must be non-negative");
      const double b = terms[t].contains("b") ? number(terms[t]["b"], field + ".b") : 0.0;
      const double c = terms[t].contains("c") ? number(terms[t]["c"], field + ".c") : 0.0;
      p.add_ridge(std::move(support), std::vector<double>(z.data(), z.data() + z.size()), Parabola{a, b, c}, lambda);
    } else {
      TruncatedQuadratic tq = parse_truncated_quadratic(terms[t], field, support.size());
      p.add_quadratic(std::move(support), tq.q, lambda);
    }
  }
  if (x0) {
    if (doc.contains("x0")) {
      *x0 = vector_of(doc["x0"], "x0");
      if (static_cast<std::size_t>(x0->size()) != dim) throw InputError("x0", "length differs from dim");
    } else {
      *x0 = Vec::Zero(static_cast<Eigen::Index>(dim));
    }
  }
  return p;
}

Json solution_to_json(const Solution& s) {
  Json active = Json::array();
  for (auto k : s.active) active.push_back(k);
  return Json{{"format", kFormatTag},   {"value", s.value},          {"x", vec_json(s.x)},
              {"active", active},       {"converged", s.converged},  {"iterations", s.iterations},
              {"pieces_visited", s.pieces_visited}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("input", "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("input", std::string("invalid JSON: ") + e.what());
  }
}

std::size_t CsvTable::column(const std::string& name, const std::string& source) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw InputError(source, "missing column '" + name + "'");
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace

CsvTable read_csv(std::istream& in, const std::string& source) {
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  bool first_data = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty()) continue;
    if (s[0] == '#') {
      const auto pos = s.find("format:");
      if (pos != std::string::npos && trim(s.substr(pos + 7)) != kFormatTag) {
        throw InputError(source, "unsupported format line '" + s + "'");
      }
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!s.empty() && s.back() == ',') cells.push_back("");
    std::vector<double> row;
    bool numeric = true;
    for (const auto& c : cells) {
      double d;
      if (!parse_double(c, d)) {
        numeric = false;
        break;
      }
      row.push_back(d);
    }
    if (first_data && !numeric) {
      t.header = cells;
      first_data = false;
      continue;
    }
    first_data = false;
    const std::string where = source + " line " + std::to_string(lineno);
    if (!numeric) throw InputError(where, "non-numeric cell");
    for (double d : row) {
      if (!std::isfinite(d)) throw InputError(where, "non-finite value");
    }
    const std::size_t width = t.header.empty() ? (t.rows.empty() ? row.size() : t.rows.front().size()) : t.header.size();
    if (row.size() != width) throw InputError(where, "expected " + std::to_string(width) + " columns");
    t.rows.push_back(std::move(row));
  }
  if (t.rows.empty()) throw InputError(source, "no data rows");
  return t;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path, "cannot open file");
  return read_csv(in, path);
}

std::string fmt(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  std::string s = buf;
  if (s == "-0.000000000000") s = "0.000000000000";
  return s;
}

}  // namespace stcf
