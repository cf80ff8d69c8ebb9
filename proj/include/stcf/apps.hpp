#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "stcf/geometry2d.hpp"
#include "stcf/quadform.hpp"
#include "stcf/solver1d.hpp"
#include "stcf/solverhd.hpp"

namespace stcf {

// ---------------------------------------------------------------------------
// Outlier detection in linear and Poisson regression.

enum class Family { Gaussian, Poisson };

struct RegressionProblem {
  Mat X;  // n x p; include a column of ones for an intercept
  Vec y;
  double lambda = 6.25;
  Family family = Family::Gaussian;

  std::size_t n() const { return static_cast<std::size_t>(X.rows()); }
  std::size_t p() const { return static_cast<std::size_t>(X.cols()); }
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct OutlierFit {
  Vec beta;
  Vec gamma;  // -inf for a flagged Poisson count of zero
  std::vector<bool> flags;
  double objective = 0.0;
  std::string method;
};

/// One truncated rank-one quadratic min{(y_i - x_i'beta)^2, lambda} per row.
std::vector<TruncatedQuadratic> reduce_outliers_gaussian(const RegressionProblem& rp);

/// Truncation level of a Poisson row: lambda - y log y + y (0 log 0 = 0).
double poisson_lambda_star(double lambda, double y);

/// Penalized objective in (beta, gamma) for the problem's family.
double outlier_objective(const RegressionProblem& rp, const Vec& beta, const Vec& gamma);

/// Rows whose loss exceeds their truncation level get a nonzero gamma that
/// fits them exactly; the rest keep gamma = 0.
OutlierFit outlier_fit_from_beta(const RegressionProblem& rp, const Vec& beta);

/// Exact for Gaussian p <= 2 and Poisson p == 1; coordinate descent otherwise.
OutlierFit detect_outliers(const RegressionProblem& rp, const CcdOptions& opt = {});

// ---------------------------------------------------------------------------
// Translating a convex shape to cover the heaviest set of points.

enum class ShapeKind { Circle, Square, Hexagon };

struct ShapeSpec {
  ShapeKind kind = ShapeKind::Circle;
  double size = 0.1;  // radius, side length, or hexagon circumradius
  std::vector<Vec2> points;
  std::vector<double> weights;  // empty means unit weights

  void validate() const;
  double weight(std::size_t i) const { return weights.empty() ? 1.0 : weights[i]; }
};

struct Placement {
  Vec2 location = Vec2::Zero();
  double weight = 0.0;
  std::vector<std::size_t> covered;
};

/// Region of shape centers that cover point p: p - S0 (or p + S0 unmirrored).
BoundaryCurve shape_region(const ShapeSpec& spec, const Vec2& p, bool mirror = true);
/// Closed containment of `point` in the shape centered at `location`.
bool shape_covers(const ShapeSpec& spec, const Vec2& location, const Vec2& point);
Placement place_shape(const ShapeSpec& spec, bool mirror = true);

// ---------------------------------------------------------------------------
// Edge-preserving restoration of signals (chain) and images (4-neighbor grid).

struct RestorationProblem {
  Vec observations;        // row-major for images
  std::size_t width = 0;   // 0 for a signal
  std::size_t height = 0;
  double w = 4.0;
  double lambda = 9.0;

  bool is_image() const { return width > 0; }
  void validate() const;
};

/// Neighbor pairs (i, j) with i < j: chain links, or right and down links.
std::vector<std::pair<std::size_t, std::size_t>> neighbor_pairs(const RestorationProblem& rp);

/// Data terms (x_i - y_i)^2 and neighbor terms min{w (x_j - x_i)^2, w lambda}.
SparseTruncatedSum assemble_restoration(const RestorationProblem& rp);
double restoration_objective(const RestorationProblem& rp, const Vec& x);

Vec restore_signal(const RestorationProblem& rp, const CcdOptions& opt = {}, Solution* diag = nullptr);
Vec restore_image(const RestorationProblem& rp, const CcdOptions& opt = {}, Solution* diag = nullptr);

}  // namespace stcf
