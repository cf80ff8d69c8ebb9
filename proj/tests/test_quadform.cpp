#include <doctest.h>

#include <map>

#include "stcf/quadform.hpp"
#include "test_helpers.hpp"

using namespace stcf;

TEST_CASE("evaluation of scalar quadratics") {
  CHECK(Quadratic::scalar(2.0, 0.0, 0.0).eval(Vec::Constant(1, 3.0)) == doctest::Approx(9.0));
  CHECK(Quadratic::scalar(8.0, 0.0, 1.0).eval(Vec::Constant(1, 0.0)) == doctest::Approx(1.0));
  // 2(x-1)^2 + 2 = 2x^2 - 4x + 4
  CHECK(Quadratic::scalar(4.0, -4.0, 4.0).eval(Vec::Constant(1, 1.0)) == doctest::Approx(2.0));
}

TEST_CASE("dimension mismatches are rejected") {
  const Quadratic q(2);
  CHECK_THROWS_AS(q.eval(Vec::Zero(3)), DimensionError);
  CHECK_THROWS_AS(Quadratic(Mat::Identity(2, 2), Vec::Zero(3), 0.0), DimensionError);
  Quadratic a(2);
  CHECK_THROWS_AS(a += Quadratic(3), DimensionError);
}

TEST_CASE("the matrix is symmetrized on construction") {
  Mat A(2, 2);
  A << 2.0, 1.0, 3.0, 4.0;
  const Quadratic q(A, Vec::Zero(2), 0.0);
  CHECK(q.A()(0, 1) == doctest::Approx(2.0));
  CHECK(q.A()(1, 0) == doctest::Approx(2.0));
}

TEST_CASE("active sum of two parabolas") {
  ActiveSum s(1);
  CHECK(s.total().A()(0, 0) == 0.0);
  CHECK(s.total().c() == 0.0);
  const Quadratic f1 = Quadratic::scalar(8.0, 0.0, 1.0);
  const Quadratic f2 = Quadratic::scalar(4.0, -4.0, 4.0);
  s.add(0, f1);
  s.add(1, f2);
  // 6x^2 - 4x + 5
  CHECK(s.total().A()(0, 0) == doctest::Approx(12.0));
  CHECK(s.total().b()(0) == doctest::Approx(-4.0));
  CHECK(s.total().c() == doctest::Approx(5.0));
  CHECK_THROWS(s.add(0, f1));
  s.remove(1, f2);
  CHECK_THROWS(s.remove(1, f2));
  CHECK(s.total().A()(0, 0) == doctest::Approx(8.0).epsilon(1e-12));
  const auto m = minimize(f1 + f2);
  CHECK(m.x(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(m.value == doctest::Approx(13.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("active sum matches a from-scratch sum under random updates") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 1 + static_cast<int>(rng.next() % 3);
    std::vector<Quadratic> pool;
    for (int k = 0; k < 12; ++k) pool.push_back(testing::random_quadratic(rng, dim));
    ActiveSum s(static_cast<std::size_t>(dim));
    std::map<std::size_t, bool> in;
    const int ops = 1 + static_cast<int>(rng.next() % 100);
    for (int op = 0; op < ops; ++op) {
      const std::size_t k = rng.next() % pool.size();
      if (in[k]) {
        s.remove(k, pool[k]);
        in[k] = false;
      } else {
        s.add(k, pool[k]);
        in[k] = true;
      }
      Quadratic ref(static_cast<std::size_t>(dim));
      for (auto [idx, on] : in)
        if (on) ref += pool[idx];
      const double scale = 1.0 + ref.scale();
      REQUIRE((s.total().A() - ref.A()).cwiseAbs().maxCoeff() <= 1e-9 * scale);
      REQUIRE((s.total().b() - ref.b()).cwiseAbs().maxCoeff() <= 1e-9 * scale);
      REQUIRE(std::abs(s.total().c() - ref.c()) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("closed-form minimization") {
  SUBCASE("isotropic bowl") {
    const auto m = minimize(Quadratic(2.0 * Mat::Identity(2, 2), Vec::Zero(2), 0.0));
    CHECK(m.kind == MinKind::Unique);
    CHECK(m.x.norm() == doctest::Approx(0.0));
    CHECK(m.value == doctest::Approx(0.0));
  }
  SUBCASE("rank-one form with consistent linear part is flat") {
    Mat A(2, 2);
    A << 2.0, 2.0, 2.0, 2.0;  // (x + y)^2
    const auto m = minimize(Quadratic(A, Vec::Zero(2), 0.0));
    CHECK(m.kind == MinKind::Flat);
    CHECK(m.value == doctest::Approx(0.0));
    CHECK(m.x.norm() == doctest::Approx(0.0));
  }
  SUBCASE("flat minimizer is least-norm") {
    Mat A(2, 2);
    A << 2.0, 2.0, 2.0, 2.0;
    Vec b(2);
    b << -2.0, -2.0;  // (x + y - 1)^2 - 1
    const auto m = minimize(Quadratic(A, b, 0.0));
    CHECK(m.kind == MinKind::Flat);
    CHECK(m.x(0) == doctest::Approx(0.5));
    CHECK(m.x(1) == doctest::Approx(0.5));
    CHECK(m.value == doctest::Approx(-1.0));
  }
  SUBCASE("linear part outside the range is unbounded") {
    Mat A = Mat::Zero(2, 2);
    A(0, 0) = 2.0;
    Vec b(2);
    b << 0.0, 1.0;
    CHECK_FALSE(minimize(Quadratic(A, b, 0.0)).bounded());
    CHECK_FALSE(minimize(Quadratic::scalar(0.0, 1.0, 0.0)).bounded());
  }
  SUBCASE("indefinite forms are unbounded") {
    Mat A(2, 2);
    A << 1.0, 0.0, 0.0, -1.0;
    CHECK_FALSE(minimize(Quadratic(A, Vec::Zero(2), 0.0)).bounded());
  }
}

TEST_CASE("minimizers satisfy the first-order condition and the value is consistent") {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int dim = 1 + static_cast<int>(rng.next() % 4);
    const int rank = static_cast<int>(rng.next() % 2) == 0 ? dim : std::max(1, dim - 1);
    Quadratic q = testing::random_quadratic(rng, dim, rank);
    if (rank < dim) {
      // Put b in range(A) so a minimizer exists.
      Vec z(dim);
      for (int i = 0; i < dim; ++i) z(i) = rng.uniform(-1.0, 1.0);
      q = Quadratic(q.A(), q.A() * z, q.c());
    }
    const auto m = minimize(q);
    REQUIRE(m.bounded());
    const double grad = (q.A() * m.x + q.b()).norm();
    CHECK(grad <= 1e-8 * (1.0 + q.b().norm()));
    CHECK(std::abs(q.eval(m.x) - m.value) <= 1e-10 * (1.0 + std::abs(m.value)));
  }
}
