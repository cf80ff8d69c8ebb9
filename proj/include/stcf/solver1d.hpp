#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "stcf/convex1d.hpp"
#include "stcf/quadform.hpp"

namespace stcf {

/// 1/2 a x^2 + b x + c with a >= 0.
struct Parabola {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double operator()(double x) const { return (0.5 * a * x + b) * x + c; }
};

/// A truncated convex function of one variable.
struct Term1d {
  std::variant<Parabola, ConvexScalarFn> f;
  double lambda = kInf;

  double untruncated(double x) const;
  double eval(double x) const;

  static Term1d parabola(double a, double b, double c, double lambda = kInf) {
    return Term1d{Parabola{a, b, c}, lambda};
  }
  static Term1d convex(ConvexScalarFn fn, double lambda = kInf) {
    return Term1d{std::move(fn), lambda};
  }
  /// From a 1-D truncated quadratic; throws DimensionError otherwise.
  static Term1d from(const TruncatedQuadratic& tq);
};

/// Result of an exact or iterative solve.
struct Solution {
  Vec x;
  double value = 0.0;
  std::vector<std::size_t> active;  // untruncated terms of the winning piece
  std::size_t pieces_visited = 0;
  std::size_t iterations = 0;       // full cycles; 0 for exact solvers
  bool converged = true;
  std::size_t terms_touched = 0;    // term slices built (coordinate descent)
};

/// A solver failure tied to specific input terms.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::vector<std::size_t> indices)
      : std::runtime_error(what), indices_(std::move(indices)) {}
  const std::vector<std::size_t>& indices() const { return indices_; }

 private:
  std::vector<std::size_t> indices_;
};

enum class EventKind { Leave = 0, Enter = 1 };

struct SweepEvent {
  double position = 0.0;
  std::size_t func_index = 0;
  EventKind kind = EventKind::Enter;
};

/// End-points of all nonempty truncation intervals, ordered by
/// (position, Leave before Enter, index). Infinite end-points are kept.
std::vector<SweepEvent> sweep_events(std::span<const Term1d> fs);

double objective_1d(std::span<const Term1d> fs, double x);

/// Global minimum of sum_i min{f_i(x), lambda_i}.
Solution minimize_sum_1d(std::span<const Term1d> fs);
Solution minimize_sum_1d(std::span<const TruncatedQuadratic> fs);

/// Reusable sweep state; one instance per thread.
class Sweep1d {
 public:
  struct Result {
    double x = 0.0;
    double value = 0.0;  // objective at x, recomputed from the terms
    std::size_t pieces = 0;
  };

  Result solve(std::span<const Term1d> fs);
  /// Untruncated terms of the winning piece of the last solve.
  std::vector<std::size_t> last_active(std::span<const Term1d> fs) const;

 private:
  enum class Role { Base, Constant, Swept };

  void classify(std::span<const Term1d> fs);

  std::vector<Role> roles_;
  std::vector<SweepEvent> events_;
  std::vector<const ConvexScalarFn*> generic_;
  std::vector<std::size_t> generic_idx_;
  std::vector<ConvexScalarFn> scratch_;
  std::vector<char> state_;
  std::size_t best_batch_end_ = 0;  // events [0, best_batch_end_) applied at the optimum
};

}  // namespace stcf
