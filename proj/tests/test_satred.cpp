#include <doctest.h>

#include <sstream>

#include "stcf/bench.hpp"
#include "stcf/satred.hpp"

using namespace stcf;

namespace {

Formula3Sat parse(const std::string& text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

// Every sign combination over three variables: unsatisfiable.
const char* kAllEight =
    "c all eight clauses\n"
    "p cnf 3 8\n"
    "1 2 3 0\n1 2 -3 0\n1 -2 3 0\n1 -2 -3 0\n"
    "-1 2 3 0\n-1 2 -3 0\n-1 -2 3 0\n-1 -2 -3 0\n";

}  // namespace

TEST_CASE("clause patterns follow the binary digits of t") {
  const auto f = parse("p cnf 3 1\n1 -2 3 0\n");
  const auto r = reduce(f);
  REQUIRE(r.clauses.size() == 1);
  const auto& pat = r.clauses[0].patterns;
  CHECK(pat[6] == std::array<bool, 3>{true, false, true});   // t = 7
  CHECK(pat[0] == std::array<bool, 3>{false, true, true});   // t = 1
  // The excluded pattern t = 0 is the falsifying assignment.
  CHECK(clause_value(r.clauses[0], {false, true, false}) == 7);
  CHECK(clause_value(r.clauses[0], {true, true, true}) == 6);
}

TEST_CASE("unsatisfiable formula sits one above the satisfiable bound") {
  const auto f = parse(kAllEight);
  CHECK_FALSE(brute_force_sat(f));
  CHECK(min_by_orthants(reduce(f)) == 49);
}

TEST_CASE("empty formula") {
  const auto f = parse("p cnf 0 0\n");
  CHECK(min_by_orthants(reduce(f)) == 0);
  CHECK(brute_force_sat(f));
}

TEST_CASE("minimum equals 6m exactly for satisfiable formulas") {
  Rng rng(81);
  for (int t = 0; t < 200; ++t) {
    Formula3Sat f;
    f.num_vars = 3 + rng.next() % 5;
    const std::size_t m = 1 + rng.next() % 12;
    for (std::size_t k = 0; k < m; ++k) {
      Clause c;
      std::size_t a = rng.next() % f.num_vars, b, d;
      do b = rng.next() % f.num_vars; while (b == a);
      do d = rng.next() % f.num_vars; while (d == a || d == b);
      c.lits = {Literal{a, rng.uniform() < 0.5}, Literal{b, rng.uniform() < 0.5}, Literal{d, rng.uniform() < 0.5}};
      f.clauses.push_back(c);
    }
    const long long v = min_by_orthants(reduce(f));
    CHECK(v >= static_cast<long long>(6 * m));
    CHECK((v == static_cast<long long>(6 * m)) == brute_force_sat(f));
  }
}

TEST_CASE("DIMACS errors carry line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      parse(text);
    } catch (const DimacsError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("1 2 3 0\n") == 1);
  CHECK(line_of("p cnf 3 1\n1 2 0\n") == 2);
  CHECK(line_of("p cnf 3 1\n1 2 4 0\n") == 2);
  CHECK(line_of("p cnf 3 1\n1 1 2 0\n") == 2);
  CHECK(line_of("p cnf 3 1\n1 x 2 0\n") == 2);
  CHECK(line_of("p cnf 3 2\n1 2 3 0\n") == 2);
  CHECK(line_of("p cnf 3 1\n1 2 3\n") == 2);
  CHECK(line_of("p dnf 3 1\n") == 1);
  CHECK(line_of("c only\n") == 1);
  // Clauses may span lines and the SATLIB '%' terminator is honoured.
  const auto f = parse("p cnf 4 2\n1 -2\n 3 0 2 3 -4 0\n%\n0\n");
  CHECK(f.clauses.size() == 2);
  CHECK(f.clauses[1].lits[2].var == 3);
  CHECK_FALSE(f.clauses[1].lits[2].positive);
}
