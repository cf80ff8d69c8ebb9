#include "stcf/geometry2d.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace stcf {

namespace {

using Mat2 = Eigen::Matrix2d;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDedup = 1e-7;

Mat2 rotation(double theta) {
  Mat2 R;
  R << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return R;
}

double wrap_key(double key) {
  double k = std::fmod(key, kTwoPi);
  if (k < 0.0) k += kTwoPi;
  if (k >= kTwoPi) k = 0.0;
  return k;
}

double cross(const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); }

Vec2 line_dir(const Vec2& n) { return Vec2(-n.y(), n.x()); }

// Clockwise vertex order starting at vertex 0 of a CCW polygon.
Vec2 cw_vertex(const ConvexPolygon& p, std::size_t j) {
  const std::size_t m = p.vertices.size();
  return p.vertices[(m - j % m) % m];
}

// Parametrized pieces of a boundary used by the intersection kernel.
struct Prim {
  enum Kind { Conic, Line, Segment } kind = Conic;
  std::size_t comp = 0;
  // Conic: p = c + U (cos t, sin t);  implicit (p-c)' M (p-c) - 1.
  Vec2 c = Vec2::Zero();
  Mat2 U = Mat2::Identity();
  Mat2 M = Mat2::Identity();
  // Line/Segment: p = q + s d with unit d; s in [0, len] for segments.
  Vec2 q = Vec2::Zero();
  Vec2 d = Vec2(1.0, 0.0);
  double len = kInf;

  double implicit(const Vec2& p) const {
    if (kind == Conic) {
      const Vec2 w = p - c;
      return w.dot(M * w) - 1.0;
    }
    return cross(d, p - q);
  }
  Vec2 grad(const Vec2& p) const {
    if (kind == Conic) return 2.0 * M * (p - c);
    return Vec2(-d.y(), d.x());
  }
};

std::vector<Prim> prims_of(const BoundaryCurve& curve) {
  std::vector<Prim> out;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ellipse>) {
          Prim p;
          const Mat2 R = rotation(s.theta);
          p.c = s.center;
          p.U = R * Eigen::Vector2d(s.a, s.b).asDiagonal();
          p.M = R * Eigen::Vector2d(1.0 / (s.a * s.a), 1.0 / (s.b * s.b)).asDiagonal() * R.transpose();
          out.push_back(p);
        } else if constexpr (std::is_same_v<T, Circle>) {
          Prim p;
          p.c = s.center;
          p.U = s.radius * Mat2::Identity();
          p.M = Mat2::Identity() / (s.radius * s.radius);
          out.push_back(p);
        } else if constexpr (std::is_same_v<T, Strip>) {
          for (std::size_t k = 0; k < 2; ++k) {
            Prim p;
            p.kind = Prim::Line;
            p.comp = k;
            p.q = (k == 0 ? s.o1 : s.o2) * s.normal;
            p.d = line_dir(s.normal);
            out.push_back(p);
          }
        } else {
          const std::size_t m = s.vertices.size();
          for (std::size_t j = 0; j < m; ++j) {
            Prim p;
            p.kind = Prim::Segment;
            const Vec2 a = s.vertices[j], b = s.vertices[(j + 1) % m];
            p.q = a;
            p.len = (b - a).norm();
            p.d = (b - a) / p.len;
            out.push_back(p);
          }
        }
      },
      curve.shape());
  return out;
}

bool on_segment(const Prim& p, double s) {
  if (p.kind != Prim::Segment) return true;
  const double slack = 1e-12 * (1.0 + p.len);
  return s >= -slack && s <= p.len + slack;
}

// Ellipse parameter polynomial h(t) = al c^2 + be c s + ga s^2 + de c + ep s + ze
// of the conic Q evaluated along the parametrization c + U (cos t, sin t).
struct Trig {
  double al, be, ga, de, ep, ze;

  double operator()(double t) const {
    const double c = std::cos(t), s = std::sin(t);
    return al * c * c + be * c * s + ga * s * s + de * c + ep * s + ze;
  }
  double deriv(double t) const {
    const double c = std::cos(t), s = std::sin(t);
    return -2.0 * al * c * s + be * (c * c - s * s) + 2.0 * ga * s * c - de * s + ep * c;
  }
  double scale() const {
    return std::abs(al) + std::abs(be) + std::abs(ga) + std::abs(de) + std::abs(ep) + std::abs(ze);
  }
};

Trig trig_of(const Vec2& center, const Mat2& U, const Prim& Q) {
  const Mat2 K = U.transpose() * Q.M * U;
  const Vec2 dc = center - Q.c;
  const Vec2 g = 2.0 * U.transpose() * (Q.M * dc);
  return Trig{K(0, 0), 2.0 * K(0, 1), K(1, 1), g.x(), g.y(), dc.dot(Q.M * dc) - 1.0};
}

// Two Newton steps on the bivariate system {P = 0, Q = 0}, kept only when
// the residual improves.
Vec2 polish(const Prim& P, const Prim& Q, Vec2 x) {
  for (int it = 0; it < 2; ++it) {
    const Vec2 F(P.implicit(x), Q.implicit(x));
    Mat2 J;
    J.row(0) = P.grad(x).transpose();
    J.row(1) = Q.grad(x).transpose();
    const double det = J.determinant();
    if (std::abs(det) <= 1e-8 * J.row(0).norm() * J.row(1).norm()) break;  // tangent
    const Vec2 y = x - J.inverse() * F;
    if (std::abs(P.implicit(y)) + std::abs(Q.implicit(y)) < F.cwiseAbs().sum()) {
      x = y;
    } else {
      break;
    }
  }
  return x;
}

void conic_conic(const Prim& P, const Prim& Q, std::vector<Vec2>& out) {
  const Trig base = trig_of(P.c, P.U, Q);
  // Rotate the parameter origin so that t0 + pi (u = inf) is far from a root.
  double t0 = 0.0, best = -1.0;
  for (int k = 0; k < 8; ++k) {
    const double t = k * std::numbers::pi / 4.0;
    const double v = std::abs(base(t + std::numbers::pi));
    if (v > best) {
      best = v;
      t0 = t;
    }
  }
  const double scale = base.scale();
  if (best <= 1e-13 * (1.0 + scale)) return;  // curves coincide (or nearly so)
  const Trig h = trig_of(P.c, P.U * rotation(t0), Q);

  // u = tan(s/2): cos = (1-u^2)/(1+u^2), sin = 2u/(1+u^2).
  const double c4 = h.al - h.de + h.ze;
  const double c3 = -2.0 * h.be + 2.0 * h.ep;
  const double c2 = -2.0 * h.al + 4.0 * h.ga + 2.0 * h.ze;
  const double c1 = 2.0 * h.be + 2.0 * h.ep;
  const double c0 = h.al + h.de + h.ze;

  Eigen::Matrix4d C = Eigen::Matrix4d::Zero();
  C(0, 0) = -c3 / c4;
  C(0, 1) = -c2 / c4;
  C(0, 2) = -c1 / c4;
  C(0, 3) = -c0 / c4;
  C(1, 0) = C(2, 1) = C(3, 2) = 1.0;
  Eigen::EigenSolver<Eigen::Matrix4d> es(C, false);
  if (es.info() != Eigen::Success) {
    throw GeometryError("quartic solve failed for coefficients [" + std::to_string(c4) + ", " +
                        std::to_string(c3) + ", " + std::to_string(c2) + ", " +
                        std::to_string(c1) + ", " + std::to_string(c0) + "]");
  }
  const double accept = 1e-9 * (1.0 + scale);
  for (int k = 0; k < 4; ++k) {
    const std::complex<double> u = es.eigenvalues()(k);
    if (std::abs(u.imag()) > 1e-4 * (1.0 + std::abs(u.real()))) continue;
    double t = t0 + 2.0 * std::atan(u.real());
    for (int it = 0; it < 8; ++it) {
      const double d = base.deriv(t);
      if (d == 0.0) break;
      const double step = base(t) / d;
      if (!std::isfinite(step) || std::abs(step) > 0.5) break;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    if (std::abs(base(t)) > accept) continue;
    const Vec2 p0 = P.c + P.U * Vec2(std::cos(t), std::sin(t));
    out.push_back(polish(P, Q, p0));
  }
}

void conic_line(const Prim& E, const Prim& L, std::vector<Vec2>& out) {
  const Vec2 w = L.q - E.c;
  const double A = L.d.dot(E.M * L.d);
  const double B = L.d.dot(E.M * w);
  const double C = w.dot(E.M * w) - 1.0;
  const double disc = B * B - A * C;
  auto push = [&](double s) {
    if (on_segment(L, s)) out.push_back(L.q + s * L.d);
  };
  if (std::abs(disc) <= 1e-10 * (B * B + std::abs(A * C))) {
    push(-B / A);
    return;
  }
  if (disc < 0.0) return;
  const double r = std::sqrt(disc);
  const double s1 = (B >= 0.0) ? (-B - r) / A : (-B + r) / A;
  const double s2 = (s1 != 0.0) ? C / (A * s1) : -2.0 * B / A;
  push(s1);
  push(s2);
}

void line_line(const Prim& P, const Prim& Q, std::vector<Vec2>& out) {
  const double den = cross(P.d, Q.d);
  if (std::abs(den) <= 1e-14) return;  // parallel or coincident
  const Vec2 w = Q.q - P.q;
  const double s = cross(w, Q.d) / den;
  const double t = cross(w, P.d) / den;
  if (on_segment(P, s) && on_segment(Q, t)) out.push_back(P.q + s * P.d);
}

void intersect_prims(const Prim& P, const Prim& Q, std::vector<Vec2>& out) {
  const bool pc = P.kind == Prim::Conic, qc = Q.kind == Prim::Conic;
  if (pc && qc) {
    conic_conic(P, Q, out);
  } else if (pc) {
    conic_line(P, Q, out);
  } else if (qc) {
    conic_line(Q, P, out);
  } else {
    line_line(P, Q, out);
  }
}

bool boxes_overlap(const Eigen::Vector4d& a, const Eigen::Vector4d& b) {
  const double m = 1e-9 * (1.0 + a.cwiseAbs().maxCoeff() + b.cwiseAbs().maxCoeff());
  return !(a(2) + m < b(0) || b(2) + m < a(0) || a(3) + m < b(1) || b(3) + m < a(1));
}

bool near(double x, double y, double tol) { return std::abs(x - y) <= tol * (1.0 + std::abs(x) + std::abs(y)); }

}  // namespace

BoundaryCurve::BoundaryCurve(Shape shape, std::size_t owner) : shape_(std::move(shape)), owner_(owner) {
  if (const auto* e = std::get_if<Ellipse>(&shape_)) {
    if (!(e->a > 0.0 && e->b > 0.0)) throw GeometryError("ellipse semi-axes must be positive");
    if (e->a < e->b) throw GeometryError("ellipse requires a >= b");
  } else if (const auto* c = std::get_if<Circle>(&shape_)) {
    if (!(c->radius > 0.0)) throw GeometryError("circle radius must be positive");
  } else if (auto* s = std::get_if<Strip>(&shape_)) {
    const double n = s->normal.norm();
    if (!(n > 0.0)) throw GeometryError("strip normal must be nonzero");
    s->normal /= n;
    s->o1 /= n;
    s->o2 /= n;
    if (!(s->o1 < s->o2)) throw GeometryError("strip offsets must satisfy o1 < o2");
  } else {
    const auto& v = std::get<ConvexPolygon>(shape_).vertices;
    const std::size_t m = v.size();
    if (m < 3) throw GeometryError("polygon needs at least 3 vertices");
    for (std::size_t j = 0; j < m; ++j) {
      const Vec2 e1 = v[(j + 1) % m] - v[j];
      const Vec2 e2 = v[(j + 2) % m] - v[(j + 1) % m];
      if (!(cross(e1, e2) > 0.0)) throw GeometryError("polygon must be strictly convex and CCW");
    }
    cum_.assign(m + 1, 0.0);
    const auto& poly = std::get<ConvexPolygon>(shape_);
    for (std::size_t j = 0; j < m; ++j) {
      cum_[j + 1] = cum_[j] + (cw_vertex(poly, j + 1) - cw_vertex(poly, j)).norm();
    }
  }
}

std::size_t BoundaryCurve::components() const { return std::holds_alternative<Strip>(shape_) ? 2 : 1; }

bool BoundaryCurve::closed() const { return !std::holds_alternative<Strip>(shape_); }

double BoundaryCurve::period() const {
  if (std::holds_alternative<Strip>(shape_)) return kInf;
  if (std::holds_alternative<ConvexPolygon>(shape_)) return cum_.back();
  return kTwoPi;
}

Vec2 BoundaryCurve::point_at(std::size_t component, double key) const {
  return std::visit(
      [&](const auto& s) -> Vec2 {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ellipse>) {
          const double t = -key;
          return s.center + rotation(s.theta) * Vec2(s.a * std::cos(t), s.b * std::sin(t));
        } else if constexpr (std::is_same_v<T, Circle>) {
          return s.center + s.radius * Vec2(std::cos(key), -std::sin(key));
        } else if constexpr (std::is_same_v<T, Strip>) {
          return (component == 0 ? s.o1 : s.o2) * s.normal + key * line_dir(s.normal);
        } else {
          const double per = cum_.back();
          double k = std::fmod(key, per);
          if (k < 0.0) k += per;
          auto it = std::upper_bound(cum_.begin(), cum_.end(), k);
          std::size_t j = static_cast<std::size_t>(it - cum_.begin());
          j = std::clamp<std::size_t>(j, 1, s.vertices.size()) - 1;
          const Vec2 a = cw_vertex(s, j), b = cw_vertex(s, j + 1);
          const double len = cum_[j + 1] - cum_[j];
          return a + ((k - cum_[j]) / len) * (b - a);
        }
      },
      shape_);
}

double BoundaryCurve::key_of(std::size_t component, const Vec2& p) const {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ellipse>) {
          const Vec2 u = rotation(s.theta).transpose() * (p - s.center);
          return wrap_key(-std::atan2(u.y() / s.b, u.x() / s.a));
        } else if constexpr (std::is_same_v<T, Circle>) {
          const Vec2 u = p - s.center;
          return wrap_key(-std::atan2(u.y(), u.x()));
        } else if constexpr (std::is_same_v<T, Strip>) {
          (void)component;
          return line_dir(s.normal).dot(p);
        } else {
          const std::size_t m = s.vertices.size();
          double best = kInf, key = 0.0;
          for (std::size_t j = 0; j < m; ++j) {
            const Vec2 a = cw_vertex(s, j), b = cw_vertex(s, j + 1);
            const double len = cum_[j + 1] - cum_[j];
            const double t = std::clamp((p - a).dot(b - a) / (len * len), 0.0, 1.0);
            const double dist = (a + t * (b - a) - p).norm();
            if (dist < best) {
              best = dist;
              key = cum_[j] + t * len;
            }
          }
          return key >= cum_.back() ? 0.0 : key;
        }
      },
      shape_);
}

std::size_t BoundaryCurve::component_of(const Vec2& p) const {
  if (const auto* s = std::get_if<Strip>(&shape_)) {
    const double v = s->normal.dot(p);
    return std::abs(v - s->o1) <= std::abs(v - s->o2) ? 0 : 1;
  }
  return 0;
}

double BoundaryCurve::level(const Vec2& p) const {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ellipse>) {
          const Vec2 u = rotation(s.theta).transpose() * (p - s.center);
          return (u.x() / s.a) * (u.x() / s.a) + (u.y() / s.b) * (u.y() / s.b) - 1.0;
        } else if constexpr (std::is_same_v<T, Circle>) {
          return (p - s.center).squaredNorm() / (s.radius * s.radius) - 1.0;
        } else if constexpr (std::is_same_v<T, Strip>) {
          const double h = 0.5 * (s.o2 - s.o1), m = 0.5 * (s.o1 + s.o2);
          const double z = (s.normal.dot(p) - m) / h;
          return z * z - 1.0;
        } else {
          const std::size_t m = s.vertices.size();
          Vec2 centroid = Vec2::Zero();
          for (const auto& v : s.vertices) centroid += v;
          centroid /= static_cast<double>(m);
          double r = 0.0;
          for (const auto& v : s.vertices) r = std::max(r, (v - centroid).norm());
          double worst = -kInf;
          for (std::size_t j = 0; j < m; ++j) {
            const Vec2 e = s.vertices[(j + 1) % m] - s.vertices[j];
            const Vec2 nrm = Vec2(e.y(), -e.x()).normalized();
            worst = std::max(worst, nrm.dot(p - s.vertices[j]));
          }
          return worst / r;
        }
      },
      shape_);
}

Eigen::Vector4d BoundaryCurve::bbox() const {
  return std::visit(
      [&](const auto& s) -> Eigen::Vector4d {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ellipse>) {
          const double c = std::cos(s.theta), sn = std::sin(s.theta);
          const double hx = std::sqrt(s.a * s.a * c * c + s.b * s.b * sn * sn);
          const double hy = std::sqrt(s.a * s.a * sn * sn + s.b * s.b * c * c);
          return Eigen::Vector4d(s.center.x() - hx, s.center.y() - hy, s.center.x() + hx, s.center.y() + hy);
        } else if constexpr (std::is_same_v<T, Circle>) {
          const double r = s.radius;
          return Eigen::Vector4d(s.center.x() - r, s.center.y() - r, s.center.x() + r, s.center.y() + r);
        } else if constexpr (std::is_same_v<T, Strip>) {
          return Eigen::Vector4d(-kInf, -kInf, kInf, kInf);
        } else {
          Eigen::Vector4d b(kInf, kInf, -kInf, -kInf);
          for (const auto& v : s.vertices) {
            b(0) = std::min(b(0), v.x());
            b(1) = std::min(b(1), v.y());
            b(2) = std::max(b(2), v.x());
            b(3) = std::max(b(3), v.y());
          }
          return b;
        }
      },
      shape_);
}

bool BoundaryCurve::same_as(const BoundaryCurve& other) const {
  constexpr double tol = 1e-12;
  if (shape_.index() != other.shape_.index()) return false;
  if (const auto* e = std::get_if<Ellipse>(&shape_)) {
    const auto& f = std::get<Ellipse>(other.shape_);
    if (!near(e->center.x(), f.center.x(), tol) || !near(e->center.y(), f.center.y(), tol)) return false;
    if (!near(e->a, f.a, tol) || !near(e->b, f.b, tol)) return false;
    const double dtheta = std::remainder(e->theta - f.theta, std::numbers::pi);
    return std::abs(dtheta) <= tol * (1.0 + std::abs(e->theta) + std::abs(f.theta));
  }
  if (const auto* c = std::get_if<Circle>(&shape_)) {
    const auto& d = std::get<Circle>(other.shape_);
    return near(c->center.x(), d.center.x(), tol) && near(c->center.y(), d.center.y(), tol) &&
           near(c->radius, d.radius, tol);
  }
  if (const auto* s = std::get_if<Strip>(&shape_)) {
    const auto& t = std::get<Strip>(other.shape_);
    auto match = [&](const Vec2& n, double o1, double o2) {
      return near(s->normal.x(), n.x(), tol) && near(s->normal.y(), n.y(), tol) && near(s->o1, o1, tol) &&
             near(s->o2, o2, tol);
    };
    return match(t.normal, t.o1, t.o2) || match(-t.normal, -t.o2, -t.o1);
  }
  const auto& p = std::get<ConvexPolygon>(shape_).vertices;
  const auto& q = std::get<ConvexPolygon>(other.shape_).vertices;
  if (p.size() != q.size()) return false;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (!near(p[j].x(), q[j].x(), tol) || !near(p[j].y(), q[j].y(), tol)) return false;
  }
  return true;
}

std::optional<BoundaryCurve> boundary_of(const TruncatedQuadratic& tq, std::size_t owner) {
  if (tq.q.dim() != 2) {
    throw DimensionError("boundary_of: expected a 2-D quadratic, got dimension " + std::to_string(tq.q.dim()));
  }
  if (tq.lambda == kInf) return std::nullopt;
  const Mat& A = tq.q.A();
  const double amax = A.cwiseAbs().maxCoeff();
  const Mat2 A2 = A;
  Eigen::SelfAdjointEigenSolver<Mat2> eig(A2);
  const Vec2 mu = eig.eigenvalues();
  const double tol = 1e-12 * amax;
  if (mu(0) < -tol) throw GeometryError("indefinite Hessian has no convex truncation region");
  const QuadMinimum m = minimize(tq.q);
  if (!m.bounded()) throw GeometryError("quadratic term is unbounded below");
  if (!(m.value < tq.lambda)) return std::nullopt;  // C is empty (or a single point)
  if (amax == 0.0 || mu(1) <= tol) return std::nullopt;  // constant below lambda: whole plane
  const double slack = 2.0 * (tq.lambda - m.value);
  const Vec2 xs(m.x(0), m.x(1));
  if (mu(0) <= tol) {
    const Vec2 n = eig.eigenvectors().col(1);
    const double o = n.dot(xs);
    const double h = std::sqrt(slack / mu(1));
    return BoundaryCurve(Strip{n, o - h, o + h}, owner);
  }
  const double a = std::sqrt(slack / mu(0));
  const double b = std::sqrt(slack / mu(1));
  if (std::abs(a - b) <= 1e-12 * a) return BoundaryCurve(Circle{xs, a}, owner);
  const Vec2 v = eig.eigenvectors().col(0);
  return BoundaryCurve(Ellipse{xs, a, b, std::atan2(v.y(), v.x())}, owner);
}

std::vector<TaggedPoint> intersect_tagged(const BoundaryCurve& c1, const BoundaryCurve& c2) {
  std::vector<TaggedPoint> out;
  if (!boxes_overlap(c1.bbox(), c2.bbox())) return out;
  const auto p1 = prims_of(c1);
  const auto p2 = prims_of(c2);
  std::vector<Vec2> pts;
  for (const Prim& a : p1) {
    for (const Prim& b : p2) {
      pts.clear();
      intersect_prims(a, b, pts);
      for (const Vec2& p : pts) {
        const bool dup = std::any_of(out.begin(), out.end(),
                                     [&](const TaggedPoint& t) { return (t.point - p).norm() <= kDedup; });
        if (!dup) out.push_back({p, a.comp, b.comp});
      }
    }
  }
  return out;
}

std::vector<Vec2> intersect(const BoundaryCurve& c1, const BoundaryCurve& c2) {
  std::vector<Vec2> out;
  for (const auto& t : intersect_tagged(c1, c2)) out.push_back(t.point);
  return out;
}

bool contains(const TruncatedQuadratic& tq, const Vec2& p) {
  if (tq.lambda == kInf) return true;
  const double v = tq.q.eval(Vec(p));
  return v <= tq.lambda + 1e-9 * (1.0 + std::abs(tq.lambda));
}

std::vector<ComponentOrder> sort_along(const BoundaryCurve& curve, std::span<const CurvePoint> points) {
  std::vector<ComponentOrder> out(curve.components());
  for (std::size_t k = 0; k < out.size(); ++k) out[k].component = k;
  for (const CurvePoint& cp : points) {
    const std::size_t k = curve.component_of(cp.point);
    CurvePoint q = cp;
    q.arc_key = curve.key_of(k, cp.point);
    out[k].points.push_back(q);
  }
  for (auto& co : out) {
    std::sort(co.points.begin(), co.points.end(), [](const CurvePoint& l, const CurvePoint& r) {
      if (l.arc_key != r.arc_key) return l.arc_key < r.arc_key;
      return l.other < r.other;
    });
    if (co.points.empty()) {
      co.probe_key = 0.0;
    } else if (curve.closed()) {
      const double per = curve.period();
      double k = 0.5 * (co.points.back().arc_key + co.points.front().arc_key + per);
      if (k >= per) k -= per;
      co.probe_key = k;
    } else {
      co.probe_key = co.points.front().arc_key - 1.0;
    }
    co.probe = curve.point_at(co.component, co.probe_key);
  }
  return out;
}

}  // namespace stcf
