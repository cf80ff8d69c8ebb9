#include "stcf/apps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stcf/solver2d.hpp"

namespace stcf {

void RegressionProblem::validate() const {
  if (X.rows() == 0 || X.cols() == 0) throw std::invalid_argument("X: design matrix is empty");
  if (y.size() != X.rows()) throw std::invalid_argument("y: length differs from the rows of X");
  if (X.rows() < X.cols()) throw std::invalid_argument("X: fewer rows than columns");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda: must be positive and finite");
  if (!X.allFinite() || !y.allFinite()) throw std::invalid_argument("X/y: non-finite entries");
  if (family == Family::Poisson) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (y(i) < 0.0) throw std::invalid_argument("y: Poisson counts must be nonnegative");
    }
  }
}

std::vector<TruncatedQuadratic> reduce_outliers_gaussian(const RegressionProblem& rp) {
  rp.validate();
  if (rp.family != Family::Gaussian) throw std::invalid_argument("family: expected Gaussian");
  std::vector<TruncatedQuadratic> out;
  out.reserve(rp.n());
  for (Eigen::Index i = 0; i < rp.X.rows(); ++i) {
    const Vec x = rp.X.row(i).transpose();
    const double yi = rp.y(i);
    out.push_back({Quadratic(2.0 * x * x.transpose(), -2.0 * yi * x, yi * yi), rp.lambda});
  }
  return out;
}

double poisson_lambda_star(double lambda, double y) {
  const double ylogy = y > 0.0 ? y * std::log(y) : 0.0;
  return lambda - ylogy + y;
}

double outlier_objective(const RegressionProblem& rp, const Vec& beta, const Vec& gamma) {
  const Vec eta = rp.X * beta;
  double s = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double g = gamma(i);
    if (g != 0.0) s += rp.lambda;
    if (rp.family == Family::Gaussian) {
      const double r = rp.y(i) - eta(i) - g;
      s += r * r;
    } else if (g == -kInf) {
      // exp(t) - t y -> 0 as t -> -inf only for y = 0.
      s += rp.y(i) == 0.0 ? 0.0 : kInf;
    } else {
      const double t = eta(i) + g;
      s += std::exp(t) - t * rp.y(i);
    }
  }
  return s;
}

OutlierFit outlier_fit_from_beta(const RegressionProblem& rp, const Vec& beta) {
  OutlierFit fit;
  fit.beta = beta;
  const Vec eta = rp.X * beta;
  fit.gamma = Vec::Zero(eta.size());
  fit.flags.assign(static_cast<std::size_t>(eta.size()), false);
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double yi = rp.y(i);
    bool flag;
    double g = 0.0;
    if (rp.family == Family::Gaussian) {
      const double r = yi - eta(i);
      flag = r * r > rp.lambda;
      g = r;
    } else {
      const double loss = std::exp(eta(i)) - eta(i) * yi;
      flag = loss > poisson_lambda_star(rp.lambda, yi);
      g = yi > 0.0 ? std::log(yi) - eta(i) : -kInf;
    }
    // An exact fit (g == 0) needs no outlier parameter.
    if (flag && g != 0.0) {
      fit.gamma(i) = g;
      fit.flags[static_cast<std::size_t>(i)] = true;
    }
  }
  fit.objective = outlier_objective(rp, fit.beta, fit.gamma);
  return fit;
}

namespace {

SparseTruncatedSum regression_sum(const RegressionProblem& rp) {
  const std::size_t p = rp.p();
  SparseTruncatedSum sum(p);
  std::vector<std::size_t> support(p);
  for (std::size_t j = 0; j < p; ++j) support[j] = j;
  for (Eigen::Index i = 0; i < rp.X.rows(); ++i) {
    std::vector<double> z(p);
    for (std::size_t j = 0; j < p; ++j) z[j] = rp.X(i, static_cast<Eigen::Index>(j));
    const double yi = rp.y(i);
    if (rp.family == Family::Gaussian) {
      sum.add_ridge(support, z, Parabola{2.0, -2.0 * yi, yi * yi}, rp.lambda);
    } else {
      sum.add_ridge(support, z, poisson_term(0.0, 1.0, yi), poisson_lambda_star(rp.lambda, yi));
    }
  }
  return sum;
}

}  // namespace

OutlierFit detect_outliers(const RegressionProblem& rp, const CcdOptions& opt) {
  rp.validate();
  const std::size_t p = rp.p();
  Vec beta;
  std::string method;
  if (rp.family == Family::Gaussian && p <= 2) {
    const auto terms = reduce_outliers_gaussian(rp);
    if (p == 1) {
      beta = minimize_sum_1d(terms).x;
      method = "exact-1d";
    } else {
      beta = minimize_sum_2d(terms).x;
      method = "exact-2d";
    }
  } else if (rp.family == Family::Poisson && p == 1) {
    std::vector<Term1d> terms;
    for (Eigen::Index i = 0; i < rp.X.rows(); ++i) {
      const double yi = rp.y(i);
      terms.push_back(Term1d::convex(poisson_term(0.0, rp.X(i, 0), yi), poisson_lambda_star(rp.lambda, yi)));
    }
    beta = minimize_sum_1d(terms).x;
    method = "exact-1d";
  } else {
    const SparseTruncatedSum sum = regression_sum(rp);
    beta = minimize_ccd(sum, Vec::Zero(static_cast<Eigen::Index>(p)), opt).x;
    method = "ccd";
  }
  OutlierFit fit = outlier_fit_from_beta(rp, beta);
  fit.method = method;
  return fit;
}

// ---------------------------------------------------------------------------

void ShapeSpec::validate() const {
  if (!(size > 0.0) || !std::isfinite(size)) throw std::invalid_argument("size: shape parameter must be positive");
  if (points.empty()) throw std::invalid_argument("points: at least one point is required");
  if (!weights.empty() && weights.size() != points.size()) {
    throw std::invalid_argument("weights: count differs from the number of points");
  }
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("weights: must be positive");
  }
  for (const auto& p : points) {
    if (!p.allFinite()) throw std::invalid_argument("points: non-finite coordinate");
  }
}

namespace {

std::vector<Vec2> shape_vertices(const ShapeSpec& spec) {
  std::vector<Vec2> v;
  if (spec.kind == ShapeKind::Square) {
    const double h = 0.5 * spec.size;
    v = {Vec2(-h, -h), Vec2(h, -h), Vec2(h, h), Vec2(-h, h)};
  } else if (spec.kind == ShapeKind::Hexagon) {
    // Flat-top: vertices at 0, 60, ..., 300 degrees.
    for (int k = 0; k < 6; ++k) {
      const double a = k * std::numbers::pi / 3.0;
      v.emplace_back(spec.size * std::cos(a), spec.size * std::sin(a));
    }
  }
  return v;
}

}  // namespace

BoundaryCurve shape_region(const ShapeSpec& spec, const Vec2& p, bool mirror) {
  if (spec.kind == ShapeKind::Circle) return BoundaryCurve(Circle{p, spec.size});
  std::vector<Vec2> v = shape_vertices(spec);
  // Point reflection keeps counter-clockwise order.
  for (auto& q : v) q = mirror ? Vec2(p - q) : Vec2(p + q);
  return BoundaryCurve(ConvexPolygon{std::move(v)});
}

bool shape_covers(const ShapeSpec& spec, const Vec2& location, const Vec2& point) {
  return shape_region(spec, point).contains(location);
}

namespace {

class CoverageVisitor : public ArrangementVisitor {
 public:
  explicit CoverageVisitor(const ShapeSpec& spec) : spec_(spec), in_group_(spec.points.size(), 0) {}

  void reset(std::size_t, std::span<const std::size_t> group, const std::vector<char>& inside) override {
    std::fill(in_group_.begin(), in_group_.end(), 0);
    group_weight_ = 0.0;
    for (std::size_t r : group) {
      in_group_[r] = 1;
      group_weight_ += spec_.weight(r);
    }
    others_ = 0.0;
    for (std::size_t r = 0; r < inside.size(); ++r) {
      if (inside[r] && !in_group_[r]) others_ += spec_.weight(r);
    }
  }
  void toggle(std::size_t r, bool now) override {
    if (in_group_[r]) return;
    others_ += now ? spec_.weight(r) : -spec_.weight(r);
  }
  void visit(const Vec2& q) override {
    const double w = others_ + group_weight_;
    if (w > best + 1e-12) {
      best = w;
      location = q;
    }
  }

  double best = -kInf;
  Vec2 location = Vec2::Zero();

 private:
  const ShapeSpec& spec_;
  std::vector<char> in_group_;
  double group_weight_ = 0.0;
  double others_ = 0.0;
};

}  // namespace

Placement place_shape(const ShapeSpec& spec, bool mirror) {
  spec.validate();
  std::vector<BoundaryCurve> regions;
  regions.reserve(spec.points.size());
  for (std::size_t i = 0; i < spec.points.size(); ++i) {
    regions.push_back(shape_region(spec, spec.points[i], mirror));
    regions.back().set_owner(i);
  }
  CoverageVisitor v(spec);
  traverse_arrangement(regions, [&](std::size_t r, const Vec2& x) { return regions[r].contains(x); }, v);

  Placement out;
  out.location = v.location;
  for (std::size_t i = 0; i < spec.points.size(); ++i) {
    if (regions[i].contains(out.location)) {
      out.covered.push_back(i);
      out.weight += spec.weight(i);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

void RestorationProblem::validate() const {
  if (observations.size() == 0) throw std::invalid_argument("observations: empty input");
  if (!observations.allFinite()) throw std::invalid_argument("observations: non-finite values");
  if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("w: must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda: must be positive");
  if (is_image() && (height == 0 || width * height != static_cast<std::size_t>(observations.size()))) {
    throw std::invalid_argument("width/height: grid size does not match the number of observations");
  }
}

std::vector<std::pair<std::size_t, std::size_t>> neighbor_pairs(const RestorationProblem& rp) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (!rp.is_image()) {
    const auto d = static_cast<std::size_t>(rp.observations.size());
    for (std::size_t i = 0; i + 1 < d; ++i) out.emplace_back(i, i + 1);
    return out;
  }
  for (std::size_t r = 0; r < rp.height; ++r) {
    for (std::size_t c = 0; c < rp.width; ++c) {
      const std::size_t i = r * rp.width + c;
      if (c + 1 < rp.width) out.emplace_back(i, i + 1);
      if (r + 1 < rp.height) out.emplace_back(i, i + rp.width);
    }
  }
  return out;
}

SparseTruncatedSum assemble_restoration(const RestorationProblem& rp) {
  rp.validate();
  const auto d = static_cast<std::size_t>(rp.observations.size());
  SparseTruncatedSum sum(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double y = rp.observations(static_cast<Eigen::Index>(i));
    sum.add_ridge({i}, {1.0}, Parabola{2.0, -2.0 * y, y * y});
  }
  for (const auto& [i, j] : neighbor_pairs(rp)) {
    sum.add_ridge({i, j}, {-1.0, 1.0}, Parabola{2.0 * rp.w, 0.0, 0.0}, rp.w * rp.lambda);
  }
  return sum;
}

double restoration_objective(const RestorationProblem& rp, const Vec& x) {
  double s = (x - rp.observations).squaredNorm();
  for (const auto& [i, j] : neighbor_pairs(rp)) {
    const double d = x(static_cast<Eigen::Index>(j)) - x(static_cast<Eigen::Index>(i));
    s += rp.w * std::min(d * d, rp.lambda);
  }
  return s;
}

namespace {

Vec restore(const RestorationProblem& rp, const CcdOptions& opt, Solution* diag) {
  const SparseTruncatedSum sum = assemble_restoration(rp);
  Solution s = minimize_ccd(sum, rp.observations, opt);
  Vec x = s.x;
  if (diag) *diag = std::move(s);
  return x;
}

}  // namespace

Vec restore_signal(const RestorationProblem& rp, const CcdOptions& opt, Solution* diag) {
  if (rp.is_image()) throw std::invalid_argument("width: restore_signal expects a signal (width 0)");
  return restore(rp, opt, diag);
}

Vec restore_image(const RestorationProblem& rp, const CcdOptions& opt, Solution* diag) {
  if (!rp.is_image()) throw std::invalid_argument("width: restore_image expects a grid");
  return restore(rp, opt, diag);
}

}  // namespace stcf
