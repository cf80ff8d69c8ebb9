#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stcf/convex1d.hpp"
#include "stcf/quadform.hpp"
#include "stcf/solver1d.hpp"

namespace stcf {

/// Sum of truncated convex terms, each reading a few coordinates.
///
/// Two term shapes are supported: a ridge term g(z . x_S) with g a scalar
/// parabola or generic convex function, and a general quadratic over its
/// support. The inverse index coordinate -> terms is kept in step with the
/// supports.
class SparseTruncatedSum {
 public:
  explicit SparseTruncatedSum(std::size_t dim);

  std::size_t add_ridge(std::vector<std::size_t> support, std::vector<double> coefs, Parabola g,
                        double lambda = kInf);
  std::size_t add_ridge(std::vector<std::size_t> support, std::vector<double> coefs, ConvexScalarFn g,
                        double lambda = kInf);
  /// q is expressed in the local coordinates x_S (q.dim() == support size).
  std::size_t add_quadratic(std::vector<std::size_t> support, Quadratic q, double lambda = kInf);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return terms_.size(); }
  std::span<const std::size_t> terms_of(std::size_t j) const { return index_.at(j); }
  std::span<const std::size_t> support(std::size_t t) const;
  double lambda(std::size_t t) const { return terms_.at(t).lambda; }

  double untruncated(std::size_t t, const Vec& x) const;
  double term_value(std::size_t t, const Vec& x) const;
  double objective(const Vec& x) const;

  /// Terms touching coordinate j as functions of x_j alone, others frozen at x.
  void slice_1d(std::size_t j, const Vec& x, std::vector<Term1d>& out) const;
  std::vector<Term1d> slice_1d(std::size_t j, const Vec& x) const;

 private:
  enum class Kind { RidgeParabola, RidgeGeneric, Quadratic };
  struct Rec {
    Kind kind;
    std::size_t off;
    std::size_t len;
    double lambda;
    Parabola g;
    std::size_t aux;  // generic function or quadratic slot
  };

  std::size_t add_rec(std::vector<std::size_t>& support, Rec rec);
  double linear_part(const Rec& r, const Vec& x, std::size_t skip, double& zj) const;

  std::size_t dim_;
  std::vector<Rec> terms_;
  std::vector<std::size_t> sup_;
  std::vector<double> coef_;
  std::vector<ConvexScalarFn> fns_;
  std::vector<Quadratic> quads_;
  std::vector<std::vector<std::size_t>> index_;
};

struct CcdOptions {
  double tol = 1e-8;
  std::size_t max_iter = 10000;
};

/// Scratch space reused across coordinate updates.
struct CcdWorkspace {
  Sweep1d sweep;
  std::vector<Term1d> slice;
};

/// Exact minimization over x_j with the other coordinates fixed. x_j is left
/// unchanged if the slice minimum would not lower the objective. Returns the
/// absolute change in x_j.
double update_coordinate(const SparseTruncatedSum& p, std::size_t j, Vec& x, CcdWorkspace& ws);

/// Cyclic coordinate descent in ascending coordinate order. Stops when the
/// max-abs change over a full cycle is below tol or max_iter cycles ran.
/// If `trace` is given it receives the objective after every cycle.
Solution minimize_ccd(const SparseTruncatedSum& p, Vec x0, const CcdOptions& opt = {},
                      std::vector<double>* trace = nullptr);

}  // namespace stcf
