#include "stcf/convex1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stcf {

namespace {

constexpr int kMaxIter = 200;
// Bracket expansion gives up beyond this magnitude and declares the
// function monotone in that direction.
constexpr double kFar = 1e12;

enum class MinShape { Attained, DescendsRight, DescendsLeft };

struct MinLocation {
  MinShape shape = MinShape::Attained;
  double x = 0.0;
};

// Safeguarded Newton on a nondecreasing function g with g(lo) <= 0 <= g(hi).
template <class G, class H>
double solve_increasing(G&& g, H&& h, double lo, double hi, double x, double tol) {
  for (int it = 0; it < kMaxIter; ++it) {
    const double gx = g(x);
    if (std::abs(gx) <= tol) return x;
    if (gx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::abs(lo) + std::abs(hi))) {
      return 0.5 * (lo + hi);
    }
    const double hx = h(x);
    double step = (hx > 0.0 && std::isfinite(hx)) ? -gx / hx : std::numeric_limits<double>::quiet_NaN();
    double next = x + step;
    int halvings = 0;
    while (std::isfinite(step) && !(next > lo && next < hi) && halvings < 60) {
      step *= 0.5;
      next = x + step;
      ++halvings;
    }
    if (!std::isfinite(next) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    // Newton that barely moves the bracket is replaced by bisection.
    if (it % 8 == 7) next = 0.5 * (lo + hi);
    x = next;
  }
  throw ConvergenceError("convex solve did not converge", lo, hi);
}

// Finds where the nondecreasing derivative g changes sign.
template <class G, class H>
MinLocation locate_minimum(G&& g, H&& h, double x0, double tol) {
  const double g0 = g(x0);
  if (std::abs(g0) <= tol) return {MinShape::Attained, x0};
  double lo, hi;
  double step = std::max(1.0, std::abs(x0));
  if (g0 < 0.0) {
    lo = x0;
    hi = x0 + step;
    while (g(hi) < 0.0) {
      lo = hi;
      step *= 2.0;
      hi = x0 + step;
      if (hi > kFar) return {MinShape::DescendsRight, lo};
    }
  } else {
    hi = x0;
    lo = x0 - step;
    while (g(lo) > 0.0) {
      hi = lo;
      step *= 2.0;
      lo = x0 - step;
      if (lo < -kFar) return {MinShape::DescendsLeft, hi};
    }
  }
  return {MinShape::Attained, solve_increasing(g, h, lo, hi, 0.5 * (lo + hi), tol)};
}

// Root of f - level between a point `inside` with f <= level and the far
// side in direction `dir` (+1 right, -1 left). Returns +-inf if f stays
// at or below level out to kFar.
double find_crossing(const ConvexScalarFn& f, double level, double inside, int dir) {
  const double tol = 1e-10 * (1.0 + std::abs(level));
  double step = std::max(1.0, std::abs(inside)) * 1e-3 + 1e-3;
  double near = inside;
  double far = inside + dir * step;
  while (f(far) <= level) {
    near = far;
    step *= 2.0;
    far = inside + dir * step;
    if (step > kFar) return dir * std::numeric_limits<double>::infinity();
  }
  // phi = f - level goes from <= 0 at near to > 0 at far.
  double a = near, b = far;  // a: phi <= 0, b: phi > 0
  double x = a;
  for (int it = 0; it < kMaxIter; ++it) {
    const double phi = f(x) - level;
    if (std::abs(phi) <= tol) return x;
    if (phi > 0.0) {
      b = x;
    } else {
      a = x;
    }
    const double lo = std::min(a, b), hi = std::max(a, b);
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lo) + std::abs(hi))) {
      return a;
    }
    const double dphi = f.d1(x);
    double step_n = (dphi != 0.0 && std::isfinite(dphi)) ? -phi / dphi : std::numeric_limits<double>::quiet_NaN();
    double next = x + step_n;
    int halvings = 0;
    while (std::isfinite(step_n) && !(next > lo && next < hi) && halvings < 60) {
      step_n *= 0.5;
      next = x + step_n;
      ++halvings;
    }
    if (!std::isfinite(next) || !(next > lo && next < hi) || it % 8 == 7) next = 0.5 * (lo + hi);
    x = next;
  }
  throw ConvergenceError("crossing search did not converge", std::min(a, b), std::max(a, b));
}

}  // namespace

ScalarMinimum minimize_convex_sum(std::span<const ConvexScalarFn> fs) {
  if (fs.empty()) throw std::invalid_argument("minimize_convex_sum: empty list");
  auto g = [&](double x) {
    double s = 0.0;
    for (const auto& f : fs) s += f.d1(x);
    return s;
  };
  auto h = [&](double x) {
    double s = 0.0;
    for (const auto& f : fs) s += f.d2(x);
    return s;
  };
  double x0 = 0.0;
  int hints = 0;
  for (const auto& f : fs) {
    if (f.hint) {
      x0 += *f.hint;
      ++hints;
    }
  }
  if (hints > 0) x0 /= hints;
  double scale = 1.0;
  for (const auto& f : fs) scale += std::abs(f.d1(0.0));
  const double tol = 1e-9 * scale;

  const MinLocation loc = locate_minimum(g, h, x0, tol);
  if (loc.shape != MinShape::Attained) {
    throw UnboundedError("convex sum has no finite minimizer (decreasing towards " +
                         std::string(loc.shape == MinShape::DescendsRight ? "+inf)" : "-inf)"));
  }
  ScalarMinimum m;
  m.x = loc.x;
  for (const auto& f : fs) m.value += f.value(loc.x);
  return m;
}

ScalarMinimum minimize_convex(const ConvexScalarFn& f) {
  return minimize_convex_sum(std::span<const ConvexScalarFn>(&f, 1));
}

std::optional<std::pair<double, double>> crossing_interval(const ConvexScalarFn& f, double level) {
  auto g = [&](double x) { return f.d1(x); };
  auto h = [&](double x) { return f.d2(x); };
  const double x0 = f.hint.value_or(0.0);
  const double tol = 1e-9 * (1.0 + std::abs(f.d1(0.0)));
  const MinLocation loc = locate_minimum(g, h, x0, tol);
  if (loc.shape == MinShape::Attained) {
    return crossing_interval(f, level, ScalarMinimum{loc.x, f.value(loc.x)});
  }
  // Monotone: the infimum is approached at one infinity.
  const int dir = loc.shape == MinShape::DescendsRight ? 1 : -1;
  double inside = loc.x;
  for (double s = 1.0; !(f.value(inside) <= level); s *= 2.0) {
    if (s > 4.0 * kFar) return std::nullopt;
    inside = loc.x + dir * s;
  }
  const double other = find_crossing(f, level, inside, -dir);
  const double inf_end = dir > 0 ? std::numeric_limits<double>::infinity()
                                 : -std::numeric_limits<double>::infinity();
  return dir > 0 ? std::make_pair(other, inf_end) : std::make_pair(inf_end, other);
}

std::optional<std::pair<double, double>> crossing_interval(const ConvexScalarFn& f, double level,
                                                           const ScalarMinimum& fmin) {
  if (fmin.value > level) return std::nullopt;
  const double l = find_crossing(f, level, fmin.x, -1);
  const double r = find_crossing(f, level, fmin.x, +1);
  return std::make_pair(l, r);
}

ConvexScalarFn poisson_term(double offset, double slope, double y) {
  ConvexScalarFn f;
  f.value = [=](double x) {
    const double t = offset + slope * x;
    return std::exp(t) - t * y;
  };
  f.d1 = [=](double x) { return slope * (std::exp(offset + slope * x) - y); };
  f.d2 = [=](double x) { return slope * slope * std::exp(offset + slope * x); };
  if (y > 0.0 && slope != 0.0) f.hint = (std::log(y) - offset) / slope;
  return f;
}

ConvexScalarFn quadratic_fn(double a, double b, double c) {
  ConvexScalarFn f;
  f.value = [=](double x) { return 0.5 * a * x * x + b * x + c; };
  f.d1 = [=](double x) { return a * x + b; };
  f.d2 = [=](double) { return a; };
  if (a > 0.0) f.hint = -b / a;
  return f;
}

}  // namespace stcf
