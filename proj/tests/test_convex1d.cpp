#include <doctest.h>

#include <cmath>

#include "stcf/bench.hpp"
#include "stcf/convex1d.hpp"
#include "stcf/quadform.hpp"

using namespace stcf;

namespace {

// Reference root of f - level on [lo, hi] by plain bisection.
double bisect(const ConvexScalarFn& f, double level, double lo, double hi) {
  const bool lo_above = f(lo) > level;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) > level) == lo_above) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("sublevel intervals of simple functions") {
  const auto sq = quadratic_fn(2.0, 0.0, 0.0);
  const auto iv = crossing_interval(sq, 4.0);
  REQUIRE(iv);
  CHECK(iv->first == doctest::Approx(-2.0));
  CHECK(iv->second == doctest::Approx(2.0));
  CHECK_FALSE(crossing_interval(quadratic_fn(2.0, 0.0, 5.0), 1.0));
}

TEST_CASE("Poisson sublevel end-points agree with bisection") {
  const auto f = poisson_term(0.0, 1.0, 3.0);  // e^x - 3x
  const double level = 3.0 - 3.0 * std::log(3.0) + 3.0;
  const auto iv = crossing_interval(f, level);
  REQUIRE(iv);
  const double xm = std::log(3.0);
  CHECK(iv->first == doctest::Approx(bisect(f, level, xm - 50.0, xm)).epsilon(1e-10));
  CHECK(iv->second == doctest::Approx(bisect(f, level, xm, xm + 50.0)).epsilon(1e-10));
}

TEST_CASE("sum minimization") {
  SUBCASE("two symmetric parabolas") {
    const std::vector<ConvexScalarFn> fs = {quadratic_fn(2.0, 0.0, 0.0), quadratic_fn(2.0, -4.0, 4.0)};
    const auto m = minimize_convex_sum(fs);
    CHECK(m.x == doctest::Approx(1.0));
    CHECK(m.value == doctest::Approx(2.0));
  }
  SUBCASE("exponential minus linear") {
    const auto m = minimize_convex(poisson_term(0.0, 1.0, 1.0));
    CHECK(m.x == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(m.value == doctest::Approx(1.0));
  }
  SUBCASE("two Poisson terms") {
    const std::vector<ConvexScalarFn> fs = {poisson_term(0.0, 1.0, 2.0), poisson_term(0.0, 1.0, 4.0)};
    const auto m = minimize_convex_sum(fs);
    CHECK(m.x == doctest::Approx(std::log(3.0)).epsilon(1e-10));
    CHECK(m.value == doctest::Approx(6.0 - 6.0 * std::log(3.0)).epsilon(1e-10));
  }
  SUBCASE("linear functions have no minimizer") {
    const std::vector<ConvexScalarFn> fs = {quadratic_fn(0.0, 1.0, 0.0)};
    CHECK_THROWS_AS(minimize_convex_sum(fs), UnboundedError);
  }
}

TEST_CASE("agreement with closed-form quadratic minimization") {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    std::vector<ConvexScalarFn> fs;
    Quadratic total(1);
    const int n = 1 + static_cast<int>(rng.next() % 5);
    for (int k = 0; k < n; ++k) {
      const double a = rng.uniform(0.1, 10.0), b = rng.uniform(-10.0, 10.0), c = rng.uniform(-5.0, 5.0);
      fs.push_back(quadratic_fn(a, b, c));
      total += Quadratic::scalar(a, b, c);
    }
    const auto m = minimize_convex_sum(fs);
    const auto ref = minimize(total);
    CHECK(m.x == doctest::Approx(ref.x(0)).epsilon(1e-8));
    CHECK(std::abs(m.value - ref.value) <= 1e-8 * (1.0 + std::abs(ref.value)));
  }
}

TEST_CASE("crossing end-points round-trip for random quadratics and Poisson terms") {
  Rng rng(4);
  int checked = 0;
  for (int t = 0; t < 1000; ++t) {
    ConvexScalarFn f;
    if (t % 2 == 0) {
      f = quadratic_fn(rng.uniform(0.01, 50.0), rng.uniform(-20.0, 20.0), rng.uniform(-5.0, 5.0));
    } else {
      f = poisson_term(rng.uniform(-1.0, 1.0), rng.uniform(0.2, 3.0), std::floor(rng.uniform(0.0, 20.0)));
    }
    const auto fm = minimize_convex(f);
    const double level = fm.value + rng.uniform(0.0, 10.0);
    const auto iv = crossing_interval(f, level);
    REQUIRE(iv);
    if (std::isfinite(iv->first)) {
      CHECK(std::abs(f(iv->first) - level) <= 1e-10 * (1.0 + std::abs(level)) * 10.0);
      ++checked;
    }
    CHECK(std::abs(f(iv->second) - level) <= 1e-10 * (1.0 + std::abs(level)) * 10.0);
    CHECK(iv->first <= iv->second);
  }
  CHECK(checked > 400);
}
