#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace stcf {

struct Literal {
  std::size_t var = 0;  // 0-based
  bool positive = true;
};

struct Clause {
  std::array<Literal, 3> lits;
};

struct Formula3Sat {
  std::size_t num_vars = 0;
  std::vector<Clause> clauses;

  /// Throws std::invalid_argument unless every clause names three distinct
  /// variables below num_vars.
  void validate() const;
};

/// The seven sign patterns of one clause on which its indicator terms vanish.
/// patterns[t-1][j] is true when pattern t requires x_{vars[j]} > 0 and false
/// when it requires x_{vars[j]} <= 0.
struct ClauseReduction {
  std::array<std::size_t, 3> vars{};
  std::array<std::array<bool, 3>, 7> patterns{};
};

struct OrthantReduction {
  std::size_t num_vars = 0;
  std::vector<ClauseReduction> clauses;
};

/// Pattern t (binary digits b1 b2 b3, left to right) requires x > 0 on the
/// j-th variable exactly when (b_j - 1/2) has the sign of the literal.
OrthantReduction reduce(const Formula3Sat& f);

/// Sum over the seven patterns of min{g_t(x), 1}, where g_t is 0 on its
/// orthant and +inf elsewhere. positive[k] encodes x_k > 0.
int clause_value(const ClauseReduction& c, const std::vector<bool>& positive);

/// Exact minimum of the reduced objective over all 2^n sign vectors.
long long min_by_orthants(const OrthantReduction& r);

/// Independent satisfiability check by enumerating assignments.
bool brute_force_sat(const Formula3Sat& f);

class DimacsError : public std::runtime_error {
 public:
  DimacsError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads DIMACS CNF; rejects clauses that are not three distinct variables.
Formula3Sat parse_dimacs(std::istream& in);

}  // namespace stcf
