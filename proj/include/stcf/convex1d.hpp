#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stcf {

/// A convex function of one variable given by value and first two derivatives.
struct ConvexScalarFn {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  /// Point near the minimizer, used to seed bracketing.
  std::optional<double> hint;

  double operator()(double x) const { return value(x); }
};

/// Raised when an iterative scalar routine fails to converge.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double lo, double hi)
      : std::runtime_error(what + " (bracket [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "])"),
        lo_(lo),
        hi_(hi) {}
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_, hi_;
};

/// Raised when a convex sum has no finite minimizer.
class UnboundedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
};

/// Minimizer of a convex sum, found as the root of the summed derivative.
ScalarMinimum minimize_convex_sum(std::span<const ConvexScalarFn> fs);
ScalarMinimum minimize_convex(const ConvexScalarFn& f);

/// Sublevel interval {x : f(x) <= level} as its two end-points, or nullopt
/// when the minimum of f is above level.
std::optional<std::pair<double, double>> crossing_interval(const ConvexScalarFn& f, double level);

/// Same as above with a precomputed minimum of f.
std::optional<std::pair<double, double>> crossing_interval(const ConvexScalarFn& f, double level,
                                                           const ScalarMinimum& fmin);

/// Poisson log-likelihood term e^{a + s x} - (a + s x) y, convex in x.
ConvexScalarFn poisson_term(double offset, double slope, double y);

/// Convex scalar quadratic 1/2 a x^2 + b x + c (a >= 0).
ConvexScalarFn quadratic_fn(double a, double b, double c);

}  // namespace stcf
