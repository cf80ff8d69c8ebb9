#pragma once

#include <cstddef>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace stcf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Thrown when two operands disagree on dimension.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// q(x) = 1/2 x'Ax + b'x + c with A kept symmetric.
class Quadratic {
 public:
  Quadratic() = default;
  /// Zero quadratic in `dim` variables.
  explicit Quadratic(std::size_t dim);
  /// A is symmetrized on construction: (A + A')/2.
  Quadratic(Mat A, Vec b, double c);

  static Quadratic scalar(double a, double b, double c);

  std::size_t dim() const { return static_cast<std::size_t>(b_.size()); }
  const Mat& A() const { return A_; }
  const Vec& b() const { return b_; }
  double c() const { return c_; }

  double eval(const Vec& x) const;
  Vec gradient(const Vec& x) const;

  Quadratic& operator+=(const Quadratic& o);
  Quadratic& operator-=(const Quadratic& o);
  Quadratic operator+(const Quadratic& o) const;
  Quadratic operator-(const Quadratic& o) const;
  Quadratic operator*(double s) const;
  /// Same form shifted by a constant.
  Quadratic plus_constant(double k) const;

  /// Largest absolute coefficient, used for relative tolerances.
  double scale() const;

 private:
  void check_dim(const Quadratic& o) const;

  Mat A_;
  Vec b_;
  double c_ = 0.0;
};

/// min{q(x), lambda}; lambda may be +inf for loss terms that never truncate.
struct TruncatedQuadratic {
  Quadratic q;
  double lambda = kInf;

  double eval(const Vec& x) const;
  bool never_truncated() const { return lambda == kInf; }
};

enum class MinKind { Unique, Flat, Unbounded };

struct QuadMinimum {
  MinKind kind = MinKind::Unbounded;
  Vec x;  // minimizer (least-norm when Flat); empty when Unbounded
  double value = -kInf;

  bool bounded() const { return kind != MinKind::Unbounded; }
};

/// Closed-form minimization. Singular PSD forms return the least-norm
/// minimizer when b lies in range(A), otherwise Unbounded. Indefinite forms
/// are Unbounded.
QuadMinimum minimize(const Quadratic& q);

/// Running sum of an index set of quadratics.
class ActiveSum {
 public:
  explicit ActiveSum(std::size_t dim = 1) : total_(dim) {}

  void add(std::size_t k, const Quadratic& qk);
  void remove(std::size_t k, const Quadratic& qk);
  bool contains(std::size_t k) const { return indices_.count(k) != 0; }
  void clear();

  const std::set<std::size_t>& indices() const { return indices_; }
  const Quadratic& total() const { return total_; }
  std::size_t dim() const { return total_.dim(); }

 private:
  std::set<std::size_t> indices_;
  Quadratic total_;
};

}  // namespace stcf
