#include "stcf/quadform.hpp"

#include <algorithm>
#include <cmath>

namespace stcf {

Quadratic::Quadratic(std::size_t dim)
    : A_(Mat::Zero(dim, dim)), b_(Vec::Zero(dim)), c_(0.0) {}

Quadratic::Quadratic(Mat A, Vec b, double c) : A_(std::move(A)), b_(std::move(b)), c_(c) {
  if (A_.rows() != A_.cols() || A_.rows() != b_.size()) {
    throw DimensionError("quadratic: A must be square with size matching b");
  }
  A_ = (0.5 * (A_ + A_.transpose())).eval();
}

Quadratic Quadratic::scalar(double a, double b, double c) {
  Mat A(1, 1);
  A(0, 0) = a;
  Vec v(1);
  v(0) = b;
  return Quadratic(std::move(A), std::move(v), c);
}

double Quadratic::eval(const Vec& x) const {
  if (x.size() != b_.size()) {
    throw DimensionError("eval: point has dimension " + std::to_string(x.size()) +
                         ", quadratic has " + std::to_string(b_.size()));
  }
  return 0.5 * x.dot(A_ * x) + b_.dot(x) + c_;
}

Vec Quadratic::gradient(const Vec& x) const {
  if (x.size() != b_.size()) throw DimensionError("gradient: dimension mismatch");
  return A_ * x + b_;
}

void Quadratic::check_dim(const Quadratic& o) const {
  if (o.dim() != dim()) {
    throw DimensionError("quadratic arithmetic: dimensions " + std::to_string(dim()) + " and " +
                         std::to_string(o.dim()));
  }
}

Quadratic& Quadratic::operator+=(const Quadratic& o) {
  check_dim(o);
  A_ += o.A_;
  b_ += o.b_;
  c_ += o.c_;
  return *this;
}

Quadratic& Quadratic::operator-=(const Quadratic& o) {
  check_dim(o);
  A_ -= o.A_;
  b_ -= o.b_;
  c_ -= o.c_;
  return *this;
}

Quadratic Quadratic::operator+(const Quadratic& o) const {
  Quadratic r = *this;
  r += o;
  return r;
}

Quadratic Quadratic::operator-(const Quadratic& o) const {
  Quadratic r = *this;
  r -= o;
  return r;
}

Quadratic Quadratic::operator*(double s) const {
  Quadratic r = *this;
  r.A_ *= s;
  r.b_ *= s;
  r.c_ *= s;
  return r;
}

Quadratic Quadratic::plus_constant(double k) const {
  Quadratic r = *this;
  r.c_ += k;
  return r;
}

double Quadratic::scale() const {
  double s = std::abs(c_);
  if (A_.size() > 0) s = std::max(s, A_.cwiseAbs().maxCoeff());
  if (b_.size() > 0) s = std::max(s, b_.cwiseAbs().maxCoeff());
  return s;
}

double TruncatedQuadratic::eval(const Vec& x) const { return std::min(q.eval(x), lambda); }

namespace {

// Tolerance on the component of b outside range(A), relative to |b|.
constexpr double kRangeTol = 1e-9;
// Pivot tolerance for the rank decision, relative to max|A|.
constexpr double kPivotTol = 1e-12;

QuadMinimum minimize_scalar(const Quadratic& q) {
  const double a = q.A()(0, 0);
  const double b = q.b()(0);
  QuadMinimum m;
  m.x = Vec::Zero(1);
  if (a > 0.0) {
    m.kind = MinKind::Unique;
    m.x(0) = -b / a;
    m.value = q.c() - 0.5 * b * b / a;
    return m;
  }
  if (a < 0.0) {
    return QuadMinimum{};
  }
  if (b != 0.0) return QuadMinimum{};
  m.kind = MinKind::Flat;
  m.value = q.c();
  return m;
}

QuadMinimum minimize_pd2(const Quadratic& q) {
  // Direct 2x2 solve; caller has established positive definiteness.
  const double a = q.A()(0, 0), bb = q.A()(0, 1), d = q.A()(1, 1);
  const double det = a * d - bb * bb;
  const double g0 = q.b()(0), g1 = q.b()(1);
  QuadMinimum m;
  m.kind = MinKind::Unique;
  m.x.resize(2);
  m.x(0) = -(d * g0 - bb * g1) / det;
  m.x(1) = -(-bb * g0 + a * g1) / det;
  // Evaluating at x is second-order in the solve error; c + b'x/2 is first-order.
  m.value = q.eval(m.x);
  return m;
}

}  // namespace

QuadMinimum minimize(const Quadratic& q) {
  const std::size_t d = q.dim();
  if (d == 0) {
    QuadMinimum m;
    m.kind = MinKind::Flat;
    m.x = Vec();
    m.value = q.c();
    return m;
  }
  if (d == 1) return minimize_scalar(q);

  const double amax = q.A().cwiseAbs().maxCoeff();
  if (d == 2 && amax > 0.0) {
    const double a = q.A()(0, 0), bb = q.A()(0, 1), dd = q.A()(1, 1);
    const double det = a * dd - bb * bb;
    // Well-conditioned PD case avoids the eigen-decomposition.
    if (a > 0.0 && det > 1e-8 * amax * amax) return minimize_pd2(q);
  }

  Eigen::SelfAdjointEigenSolver<Mat> eig(q.A());
  const Vec& mu = eig.eigenvalues();
  const Mat& V = eig.eigenvectors();
  const double tol = kPivotTol * std::max(amax, 1e-300);
  if (amax > 0.0 && mu.minCoeff() < -tol) return QuadMinimum{};  // indefinite
  const Vec proj = V.transpose() * q.b();
  const double bnorm = q.b().norm();
  Vec x = Vec::Zero(static_cast<Eigen::Index>(d));
  bool flat = false;
  double null_sq = 0.0;
  for (Eigen::Index k = 0; k < mu.size(); ++k) {
    if (amax > 0.0 && mu(k) > tol) {
      x -= (proj(k) / mu(k)) * V.col(k);
    } else {
      flat = true;
      null_sq += proj(k) * proj(k);
    }
  }
  if (flat && std::sqrt(null_sq) > kRangeTol * (1.0 + bnorm)) return QuadMinimum{};
  QuadMinimum m;
  m.kind = flat ? MinKind::Flat : MinKind::Unique;
  m.value = q.eval(x);
  m.x = std::move(x);
  return m;
}

void ActiveSum::add(std::size_t k, const Quadratic& qk) {
  if (!indices_.insert(k).second) {
    throw std::invalid_argument("ActiveSum::add: index " + std::to_string(k) + " already present");
  }
  total_ += qk;
}

void ActiveSum::remove(std::size_t k, const Quadratic& qk) {
  if (indices_.erase(k) == 0) {
    throw std::invalid_argument("ActiveSum::remove: index " + std::to_string(k) + " not present");
  }
  total_ -= qk;
  // An empty sum is exactly zero; this discards accumulated rounding.
  if (indices_.empty()) total_ = Quadratic(total_.dim());
}

void ActiveSum::clear() {
  indices_.clear();
  total_ = Quadratic(total_.dim());
}

}  // namespace stcf
