#include <doctest.h>

#include <cmath>
#include <vector>

#include "stcf/bench.hpp"
#include "stcf/oracle.hpp"
#include "stcf/solver1d.hpp"

using namespace stcf;

namespace {

std::vector<Term1d> figure_terms() {
  return {Term1d::parabola(8.0, 0.0, 1.0, 3.0), Term1d::parabola(4.0, -4.0, 4.0, 4.0)};
}

}  // namespace

TEST_CASE("events of two truncated parabolas") {
  const auto fs = figure_terms();
  const auto ev = sweep_events(fs);
  REQUIRE(ev.size() == 4);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(ev[0].position == doctest::Approx(-r));
  CHECK(ev[0].kind == EventKind::Enter);
  CHECK(ev[0].func_index == 0);
  CHECK(ev[1].position == doctest::Approx(0.0));
  CHECK(ev[1].kind == EventKind::Enter);
  CHECK(ev[1].func_index == 1);
  CHECK(ev[2].position == doctest::Approx(r));
  CHECK(ev[2].kind == EventKind::Leave);
  CHECK(ev[3].position == doctest::Approx(2.0));
  CHECK(ev[3].kind == EventKind::Leave);
}

TEST_CASE("minimum of two truncated parabolas") {
  const auto fs = figure_terms();
  const auto s = minimize_sum_1d(fs);
  CHECK(s.x(0) == doctest::Approx(1.0 / 3.0));
  CHECK(s.value == doctest::Approx(13.0 / 3.0));
  CHECK(s.active == std::vector<std::size_t>{0, 1});
}

TEST_CASE("ties at one position put leaves before enters") {
  // [-1, 0] and [0, 1] touch at zero.
  const std::vector<Term1d> fs = {Term1d::parabola(2.0, 1.0, 0.0, 0.0), Term1d::parabola(2.0, -1.0, 0.0, 0.0)};
  const auto ev = sweep_events(fs);
  REQUIRE(ev.size() == 4);
  CHECK(ev[1].position == doctest::Approx(0.0));
  CHECK(ev[1].kind == EventKind::Leave);
  CHECK(ev[2].kind == EventKind::Enter);
}

TEST_CASE("degenerate terms") {
  SUBCASE("no terms") { CHECK_THROWS(minimize_sum_1d(std::span<const Term1d>{})); }
  SUBCASE("all truncated everywhere") {
    const std::vector<Term1d> fs = {Term1d::parabola(2.0, 0.0, 5.0, 1.0), Term1d::parabola(2.0, 0.0, 7.0, 2.0)};
    const auto s = minimize_sum_1d(fs);
    CHECK(s.value == doctest::Approx(3.0));
    CHECK(s.active.empty());
  }
  SUBCASE("untruncated term dominates") {
    const std::vector<Term1d> fs = {Term1d::parabola(2.0, -2.0, 0.0), Term1d::parabola(2.0, 10.0, 0.0, 1.0)};
    const auto s = minimize_sum_1d(fs);
    CHECK(s.value == doctest::Approx(objective_1d(fs, s.x(0))));
    CHECK(s.value <= objective_1d(fs, 1.0) + 1e-12);
  }
}

TEST_CASE("agreement with the subset oracle on random instances") {
  Rng rng(11);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng.next() % 10;
    const auto tq = gen_quadratics_1d(n, t % 2 ? 1.0 : 10.0, rng);
    std::vector<Term1d> fs;
    for (const auto& q : tq) fs.push_back(Term1d::from(q));
    const auto s = minimize_sum_1d(fs);
    const auto o = subset_oracle(fs);
    CHECK(std::abs(s.value - o.value) <= 1e-8 * (1.0 + std::abs(o.value)));
    CHECK(std::abs(objective_1d(fs, s.x(0)) - s.value) <= 1e-8 * (1.0 + std::abs(s.value)));
  }
}

TEST_CASE("generic convex terms mix with parabolas") {
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    std::vector<Term1d> fs;
    const std::size_t n = 2 + rng.next() % 5;
    for (std::size_t k = 0; k < n; ++k) {
      const double y = std::floor(rng.uniform(0.0, 10.0));
      if (k % 2 == 0) {
        fs.push_back(Term1d::convex(poisson_term(rng.uniform(-1, 1), rng.uniform(0.3, 2.0), y), rng.uniform(0.5, 4.0)));
      } else {
        fs.push_back(Term1d::parabola(rng.uniform(0.5, 4.0), rng.uniform(-3, 3), 0.0, rng.uniform(0.5, 4.0)));
      }
    }
    const auto s = minimize_sum_1d(fs);
    const auto g = grid_oracle_1d([&](double x) { return objective_1d(fs, x); }, -20.0, 20.0, 40001);
    CHECK(s.value <= g.value + 1e-9);
    CHECK(s.value >= g.value - 0.05);
  }
}

TEST_CASE("sweep state is reusable") {
  Sweep1d sweep;
  const auto fs = figure_terms();
  const auto r1 = sweep.solve(fs);
  const std::vector<Term1d> other = {Term1d::parabola(2.0, -6.0, 0.0)};
  const auto r2 = sweep.solve(other);
  CHECK(r2.x == doctest::Approx(3.0));
  const auto r3 = sweep.solve(fs);
  CHECK(r1.value == doctest::Approx(r3.value));
  CHECK(sweep.last_active(fs) == std::vector<std::size_t>{0, 1});
}
