#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "stcf/quadform.hpp"

namespace stcf {

using Vec2 = Eigen::Vector2d;

/// Semi-axis `a` lies along direction theta; a >= b > 0.
struct Ellipse {
  Vec2 center = Vec2::Zero();
  double a = 1.0;
  double b = 1.0;
  double theta = 0.0;
};

struct Circle {
  Vec2 center = Vec2::Zero();
  double radius = 1.0;
};

/// {p : o1 <= normal . p <= o2}; the boundary is two parallel lines.
struct Strip {
  Vec2 normal = Vec2(1.0, 0.0);
  double o1 = -1.0;
  double o2 = 1.0;
};

/// Strictly convex polygon, counter-clockwise vertices.
struct ConvexPolygon {
  std::vector<Vec2> vertices;
};

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Boundary of a convex region C, traversed component by component.
///
/// Closed curves (ellipse, circle, polygon) have one component traversed
/// clockwise with arc key in [0, period). A strip has two line components
/// (0: normal.p = o1, 1: normal.p = o2), each keyed by its signed parameter
/// along direction (-n_y, n_x).
class BoundaryCurve {
 public:
  using Shape = std::variant<Ellipse, Circle, Strip, ConvexPolygon>;

  BoundaryCurve(Shape shape, std::size_t owner = 0);

  const Shape& shape() const { return shape_; }
  std::size_t owner() const { return owner_; }
  void set_owner(std::size_t o) { owner_ = o; }

  std::size_t components() const;
  bool closed() const;
  /// Key range of a closed component; infinity for lines.
  double period() const;
  Vec2 point_at(std::size_t component, double key) const;
  double key_of(std::size_t component, const Vec2& p) const;
  /// Component nearest to p (always 0 for closed curves).
  std::size_t component_of(const Vec2& p) const;

  /// Scale-free implicit function: negative inside, zero on the boundary.
  double level(const Vec2& p) const;
  bool contains(const Vec2& p, double tol = 1e-9) const { return level(p) <= tol; }

  /// Axis-aligned bounding box {xmin, ymin, xmax, ymax}; infinite for strips.
  Eigen::Vector4d bbox() const;

  /// True when both curves describe the same point set up to rounding.
  bool same_as(const BoundaryCurve& other) const;

 private:
  Shape shape_;
  std::size_t owner_;
  // Cached polygon perimeter data (clockwise cumulative lengths).
  std::vector<double> cum_;
};

struct CurvePoint {
  Vec2 point = Vec2::Zero();
  double arc_key = 0.0;
  std::size_t other = 0;
};

/// Sorted points on one boundary component plus a probe point lying strictly
/// between the last and first points (through infinity for lines).
struct ComponentOrder {
  std::size_t component = 0;
  std::vector<CurvePoint> points;
  Vec2 probe = Vec2::Zero();
  double probe_key = 0.0;
};

/// Truncation boundary {f = lambda} of a 2-D PSD quadratic. Ellipse (or
/// Circle when isotropic) for a PD Hessian, Strip for rank one; nullopt for
/// lambda = +inf, an empty region, or a region that is the whole plane.
/// Throws GeometryError for indefinite Hessians or terms unbounded below.
std::optional<BoundaryCurve> boundary_of(const TruncatedQuadratic& tq, std::size_t owner = 0);

/// All real intersection points, deduplicated at spacing 1e-7. Coincident
/// or parallel curves yield no points.
std::vector<Vec2> intersect(const BoundaryCurve& c1, const BoundaryCurve& c2);

/// Intersection points tagged with the component of each curve they lie on.
struct TaggedPoint {
  Vec2 point;
  std::size_t comp1;
  std::size_t comp2;
};
std::vector<TaggedPoint> intersect_tagged(const BoundaryCurve& c1, const BoundaryCurve& c2);

/// Closed-set membership f(p) <= lambda + 1e-9 (1 + |lambda|).
bool contains(const TruncatedQuadratic& tq, const Vec2& p);

std::vector<ComponentOrder> sort_along(const BoundaryCurve& curve, std::span<const CurvePoint> points);

}  // namespace stcf
