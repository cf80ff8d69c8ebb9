#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

#include "stcf/bench.hpp"
#include "stcf/oracle.hpp"
#include "stcf/solver2d.hpp"

using namespace stcf;

namespace {

// |x - m|^2 - r^2, truncated at zero: the disk boundary is the truncation curve.
TruncatedQuadratic disk(double mx, double my, double r) {
  const Vec m = Vec2(mx, my);
  return {Quadratic(Mat::Identity(2, 2) * 2.0, -2.0 * m, m.squaredNorm() - r * r), 0.0};
}

TruncatedQuadratic ellipse_term(double mx, double my, double a, double b, double theta, double lambda) {
  const double c = std::cos(theta), s = std::sin(theta);
  Mat R(2, 2);
  R << c, -s, s, c;
  Mat D = Mat::Zero(2, 2);
  D(0, 0) = 2.0 / (a * a);
  D(1, 1) = 2.0 / (b * b);
  const Mat H = R * D * R.transpose();
  const Vec m = Vec2(mx, my);
  return {Quadratic(H, -H * m, 0.5 * m.dot(H * m)), lambda};
}

using Sets = std::vector<std::vector<std::size_t>>;

Sets sorted(Sets s) {
  std::sort(s.begin(), s.end());
  return s;
}

double time_solve(const std::vector<TruncatedQuadratic>& fs) {
  double best = 1e300;
  for (int k = 0; k < 7; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto s = minimize_sum_2d(fs);
    const auto t1 = std::chrono::steady_clock::now();
    CHECK(std::isfinite(s.value));
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

TEST_CASE("three overlapping disks give every subset as a candidate") {
  const std::vector<TruncatedQuadratic> fs = {disk(0, 0, 1), disk(1, 0, 1), disk(0.5, 0.8, 1)};
  const auto sets = enumerate_candidate_sets(fs);
  CHECK(sets.size() == 8);
  const auto s = minimize_sum_2d(fs);
  CHECK(s.active.size() == 3);
  CHECK(s.value == doctest::Approx(subset_oracle(fs).value));
}

TEST_CASE("nested ellipses") {
  const std::vector<TruncatedQuadratic> fs = {ellipse_term(0, 0, 2.0, 1.0, 0.3, 1.0),
                                              ellipse_term(0.1, 0, 0.5, 0.25, 1.0, 1.0)};
  CHECK(sorted(enumerate_candidate_sets(fs)) == Sets{{}, {0}, {0, 1}});
}

TEST_CASE("single term") {
  const std::vector<TruncatedQuadratic> fs = {disk(0.3, 0.4, 0.5)};
  CHECK(sorted(enumerate_candidate_sets(fs)) == Sets{{}, {0}});
  const auto s = minimize_sum_2d(fs);
  CHECK(s.value == doctest::Approx(-0.25));
  CHECK(s.x(0) == doctest::Approx(0.3));
  CHECK(s.x(1) == doctest::Approx(0.4));
}

TEST_CASE("strips and untruncated terms") {
  Mat A = Mat::Zero(2, 2);
  A(0, 0) = 2.0;
  std::vector<TruncatedQuadratic> fs = {{Quadratic(A, Vec2(-2.0, 0.0), 1.0), 0.5},
                                        {Quadratic(Mat::Identity(2, 2) * 0.02, Vec::Zero(2), 0.0), kInf},
                                        disk(1.0, 0.2, 0.6)};
  const auto s = minimize_sum_2d(fs);
  const auto o = subset_oracle(fs);
  CHECK(s.value == doctest::Approx(o.value).epsilon(1e-9));
  CHECK(objective_sum(fs, s.x) == doctest::Approx(s.value).epsilon(1e-9));
}

TEST_CASE("agreement with the subset oracle, invariant under permutation") {
  Rng rng(31);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 1 + rng.next() % 9;
    auto fs = gen_quadratics_2d(n, t % 3 == 0 ? 10.0 : 1.0, rng);
    const auto s = minimize_sum_2d(fs);
    const auto o = subset_oracle(fs);
    CHECK(std::abs(s.value - o.value) <= 1e-8 * (1.0 + std::abs(o.value)));
    std::reverse(fs.begin(), fs.end());
    CHECK(std::abs(subset_oracle(fs).value - o.value) <= 1e-10 * (1.0 + std::abs(o.value)));
    CHECK(std::abs(minimize_sum_2d(fs).value - o.value) <= 1e-8 * (1.0 + std::abs(o.value)));
  }
}

TEST_CASE("identical terms are merged") {
  const std::vector<TruncatedQuadratic> fs = {disk(0, 0, 1), disk(0, 0, 1), disk(1.5, 0, 1)};
  const auto s = minimize_sum_2d(fs);
  CHECK(s.value == doctest::Approx(subset_oracle(fs).value));
}

TEST_CASE("doubling the term count stays near quadratic time") {
  Rng rng(32);
  const auto f50 = gen_quadratics_2d(50, 1.0, rng);
  const auto f100 = gen_quadratics_2d(100, 1.0, rng);
  const double ratio = time_solve(f100) / time_solve(f50);
  MESSAGE("time ratio n=100 / n=50: " << ratio);
  CHECK(ratio <= 4.8);
}
