#include "stcf/satred.hpp"

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace stcf {

namespace {

constexpr std::size_t kMaxEnumVars = 24;

}  // namespace

void Formula3Sat::validate() const {
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    const auto& l = clauses[i].lits;
    for (const auto& lit : l) {
      if (lit.var >= num_vars) {
        throw std::invalid_argument("clauses[" + std::to_string(i) + "]: variable out of range");
      }
    }
    if (l[0].var == l[1].var || l[0].var == l[2].var || l[1].var == l[2].var) {
      throw std::invalid_argument("clauses[" + std::to_string(i) + "]: variables must be distinct");
    }
  }
}

OrthantReduction reduce(const Formula3Sat& f) {
  f.validate();
  OrthantReduction r;
  r.num_vars = f.num_vars;
  for (const Clause& c : f.clauses) {
    ClauseReduction cr;
    for (std::size_t j = 0; j < 3; ++j) cr.vars[j] = c.lits[j].var;
    for (unsigned t = 1; t <= 7; ++t) {
      for (std::size_t j = 0; j < 3; ++j) {
        const bool digit = (t >> (2 - j)) & 1u;  // j-th digit from the left
        // sign(digit - 1/2) == sign(literal)  <=>  digit == positive
        cr.patterns[t - 1][j] = digit == c.lits[j].positive;
      }
    }
    r.clauses.push_back(cr);
  }
  return r;
}

int clause_value(const ClauseReduction& c, const std::vector<bool>& positive) {
  int v = 0;
  for (const auto& pat : c.patterns) {
    bool in = true;
    for (std::size_t j = 0; j < 3; ++j) in = in && positive[c.vars[j]] == pat[j];
    v += in ? 0 : 1;
  }
  return v;
}

long long min_by_orthants(const OrthantReduction& r) {
  if (r.num_vars > kMaxEnumVars) throw std::invalid_argument("min_by_orthants: too many variables to enumerate");
  if (r.clauses.empty()) return 0;
  long long best = std::numeric_limits<long long>::max();
  std::vector<bool> positive(r.num_vars);
  const std::uint64_t total = std::uint64_t{1} << r.num_vars;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (std::size_t k = 0; k < r.num_vars; ++k) positive[k] = (mask >> k) & 1u;
    long long s = 0;
    for (const auto& c : r.clauses) s += clause_value(c, positive);
    if (s < best) best = s;
  }
  return best;
}

bool brute_force_sat(const Formula3Sat& f) {
  if (f.num_vars > kMaxEnumVars) throw std::invalid_argument("brute_force_sat: too many variables");
  const std::uint64_t total = std::uint64_t{1} << f.num_vars;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    bool all = true;
    for (const Clause& c : f.clauses) {
      bool sat = false;
      for (const auto& lit : c.lits) sat = sat || ((((mask >> lit.var) & 1u) != 0) == lit.positive);
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

Formula3Sat parse_dimacs(std::istream& in) {
  Formula3Sat f;
  bool have_header = false;
  std::size_t declared_clauses = 0;
  std::vector<long long> pending;
  std::string line;
  std::size_t lineno = 0;
  std::size_t pending_line = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first[0] == 'c') continue;
    if (first == "%") break;  // SATLIB terminator
    if (first == "p") {
      std::string fmt;
      long long nv = -1, nc = -1;
      if (have_header) throw DimacsError("duplicate problem line", lineno);
      if (!(ls >> fmt >> nv >> nc) || fmt != "cnf" || nv < 0 || nc < 0) {
        throw DimacsError("malformed problem line (expected 'p cnf <vars> <clauses>')", lineno);
      }
      have_header = true;
      f.num_vars = static_cast<std::size_t>(nv);
      declared_clauses = static_cast<std::size_t>(nc);
      continue;
    }
    if (!have_header) throw DimacsError("clause before the problem line", lineno);
    ls.clear();
    ls.str(line);
    std::string tok;
    while (ls >> tok) {
      char* end = nullptr;
      const long long v = std::strtoll(tok.c_str(), &end, 10);
      if (end == tok.c_str() || *end != '\0') throw DimacsError("invalid literal '" + tok + "'", lineno);
      if (pending.empty()) pending_line = lineno;
      if (v != 0) {
        if (static_cast<std::size_t>(std::llabs(v)) > f.num_vars) {
          throw DimacsError("literal " + tok + " exceeds the declared variable count", lineno);
        }
        pending.push_back(v);
        continue;
      }
      if (pending.size() != 3) {
        throw DimacsError("clause has width " + std::to_string(pending.size()) + ", expected 3", pending_line);
      }
      Clause c;
      for (std::size_t j = 0; j < 3; ++j) {
        c.lits[j] = Literal{static_cast<std::size_t>(std::llabs(pending[j]) - 1), pending[j] > 0};
      }
      if (c.lits[0].var == c.lits[1].var || c.lits[0].var == c.lits[2].var || c.lits[1].var == c.lits[2].var) {
        throw DimacsError("clause repeats a variable", pending_line);
      }
      f.clauses.push_back(c);
      pending.clear();
    }
  }
  if (!have_header) throw DimacsError("missing problem line", lineno);
  if (!pending.empty()) throw DimacsError("last clause is not terminated by 0", pending_line);
  if (f.clauses.size() != declared_clauses) {
    throw DimacsError("declared " + std::to_string(declared_clauses) + " clauses, found " +
                          std::to_string(f.clauses.size()),
                      lineno);
  }
  return f;
}

}  // namespace stcf
