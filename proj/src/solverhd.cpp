#include "stcf/solverhd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stcf {

SparseTruncatedSum::SparseTruncatedSum(std::size_t dim) : dim_(dim), index_(dim) {
  if (dim == 0) throw std::invalid_argument("SparseTruncatedSum: dimension must be positive");
}

std::size_t SparseTruncatedSum::add_rec(std::vector<std::size_t>& support, Rec rec) {
  if (support.empty()) throw std::invalid_argument("term support must be nonempty");
  if (std::isnan(rec.lambda)) throw std::invalid_argument("term has NaN truncation level");
  std::vector<std::size_t> sorted = support;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("term support repeats a coordinate");
  }
  if (sorted.back() >= dim_) {
    throw std::out_of_range("term support coordinate " + std::to_string(sorted.back()) + " >= dimension " +
                            std::to_string(dim_));
  }
  const std::size_t t = terms_.size();
  rec.off = sup_.size();
  rec.len = support.size();
  sup_.insert(sup_.end(), support.begin(), support.end());
  for (std::size_t j : support) index_[j].push_back(t);
  terms_.push_back(rec);
  return t;
}

std::size_t SparseTruncatedSum::add_ridge(std::vector<std::size_t> support, std::vector<double> coefs, Parabola g,
                                          double lambda) {
  if (coefs.size() != support.size()) throw std::invalid_argument("ridge term: coefficient count mismatch");
  if (g.a < 0.0) throw std::invalid_argument("ridge term: parabola must be convex");
  const std::size_t t = add_rec(support, Rec{Kind::RidgeParabola, 0, 0, lambda, g, 0});
  coef_.resize(sup_.size() - coefs.size());
  coef_.insert(coef_.end(), coefs.begin(), coefs.end());
  return t;
}

std::size_t SparseTruncatedSum::add_ridge(std::vector<std::size_t> support, std::vector<double> coefs,
                                          ConvexScalarFn g, double lambda) {
  if (coefs.size() != support.size()) throw std::invalid_argument("ridge term: coefficient count mismatch");
  const std::size_t t = add_rec(support, Rec{Kind::RidgeGeneric, 0, 0, lambda, {}, fns_.size()});
  fns_.push_back(std::move(g));
  coef_.resize(sup_.size() - coefs.size());
  coef_.insert(coef_.end(), coefs.begin(), coefs.end());
  return t;
}

std::size_t SparseTruncatedSum::add_quadratic(std::vector<std::size_t> support, Quadratic q, double lambda) {
  if (q.dim() != support.size()) throw DimensionError("quadratic term: dimension differs from support size");
  const std::size_t t = add_rec(support, Rec{Kind::Quadratic, 0, 0, lambda, {}, quads_.size()});
  quads_.push_back(std::move(q));
  coef_.resize(sup_.size(), 0.0);
  return t;
}

std::span<const std::size_t> SparseTruncatedSum::support(std::size_t t) const {
  const Rec& r = terms_.at(t);
  return {sup_.data() + r.off, r.len};
}

double SparseTruncatedSum::linear_part(const Rec& r, const Vec& x, std::size_t skip, double& zj) const {
  double s = 0.0;
  zj = 0.0;
  for (std::size_t k = 0; k < r.len; ++k) {
    const std::size_t c = sup_[r.off + k];
    const double z = coef_[r.off + k];
    if (c == skip) {
      zj = z;
    } else {
      s += z * x(static_cast<Eigen::Index>(c));
    }
  }
  return s;
}

double SparseTruncatedSum::untruncated(std::size_t t, const Vec& x) const {
  const Rec& r = terms_.at(t);
  if (r.kind == Kind::Quadratic) {
    Vec local(static_cast<Eigen::Index>(r.len));
    for (std::size_t k = 0; k < r.len; ++k) local(static_cast<Eigen::Index>(k)) = x(static_cast<Eigen::Index>(sup_[r.off + k]));
    return quads_[r.aux].eval(local);
  }
  double unused;
  const double u = linear_part(r, x, dim_, unused);
  return r.kind == Kind::RidgeParabola ? r.g(u) : fns_[r.aux](u);
}

double SparseTruncatedSum::term_value(std::size_t t, const Vec& x) const {
  return std::min(untruncated(t, x), terms_.at(t).lambda);
}

double SparseTruncatedSum::objective(const Vec& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_) throw DimensionError("objective: point has wrong dimension");
  double s = 0.0;
  for (std::size_t t = 0; t < terms_.size(); ++t) s += term_value(t, x);
  return s;
}

void SparseTruncatedSum::slice_1d(std::size_t j, const Vec& x, std::vector<Term1d>& out) const {
  out.clear();
  for (std::size_t t : index_.at(j)) {
    const Rec& r = terms_[t];
    switch (r.kind) {
      case Kind::RidgeParabola: {
        // g(z_j x_j + s) with g = 1/2 a u^2 + b u + c.
        double zj;
        const double s = linear_part(r, x, j, zj);
        const Parabola& g = r.g;
        out.push_back(Term1d::parabola(g.a * zj * zj, (g.a * s + g.b) * zj, g(s), r.lambda));
        break;
      }
      case Kind::RidgeGeneric: {
        double zj;
        const double s = linear_part(r, x, j, zj);
        const ConvexScalarFn* g = &fns_[r.aux];
        ConvexScalarFn h;
        h.value = [g, zj, s](double v) { return g->value(zj * v + s); };
        h.d1 = [g, zj, s](double v) { return zj * g->d1(zj * v + s); };
        h.d2 = [g, zj, s](double v) { return zj * zj * g->d2(zj * v + s); };
        if (g->hint && zj != 0.0) h.hint = (*g->hint - s) / zj;
        out.push_back(Term1d::convex(std::move(h), r.lambda));
        break;
      }
      case Kind::Quadratic: {
        const Quadratic& q = quads_[r.aux];
        Eigen::Index pos = 0;
        Vec local(static_cast<Eigen::Index>(r.len));
        for (std::size_t k = 0; k < r.len; ++k) {
          const std::size_t c = sup_[r.off + k];
          if (c == j) {
            pos = static_cast<Eigen::Index>(k);
            local(static_cast<Eigen::Index>(k)) = 0.0;
          } else {
            local(static_cast<Eigen::Index>(k)) = x(static_cast<Eigen::Index>(c));
          }
        }
        const double a = q.A()(pos, pos);
        const double b = q.b()(pos) + q.A().row(pos).dot(local);
        out.push_back(Term1d::parabola(a, b, q.eval(local), r.lambda));
        break;
      }
    }
  }
}

std::vector<Term1d> SparseTruncatedSum::slice_1d(std::size_t j, const Vec& x) const {
  std::vector<Term1d> out;
  slice_1d(j, x, out);
  return out;
}

double update_coordinate(const SparseTruncatedSum& p, std::size_t j, Vec& x, CcdWorkspace& ws) {
  p.slice_1d(j, x, ws.slice);
  if (ws.slice.empty()) return 0.0;
  const auto xj = static_cast<Eigen::Index>(j);
  const double old = x(xj);
  const Sweep1d::Result r = ws.sweep.solve(ws.slice);
  // The slice minimum can only tie or beat the current value; guard rounding.
  if (!(r.value < objective_1d(ws.slice, old))) return 0.0;
  x(xj) = r.x;
  return std::abs(r.x - old);
}

Solution minimize_ccd(const SparseTruncatedSum& p, Vec x0, const CcdOptions& opt, std::vector<double>* trace) {
  if (!(opt.tol > 0.0)) throw std::invalid_argument("minimize_ccd: tol must be positive");
  if (static_cast<std::size_t>(x0.size()) != p.dim()) throw DimensionError("minimize_ccd: x0 has wrong dimension");
  Solution s;
  s.converged = false;
  CcdWorkspace ws;
  Vec x = std::move(x0);
  for (std::size_t it = 0; it < opt.max_iter; ++it) {
    double change = 0.0;
    for (std::size_t j = 0; j < p.dim(); ++j) {
      change = std::max(change, update_coordinate(p, j, x, ws));
      s.terms_touched += p.terms_of(j).size();
    }
    ++s.iterations;
    if (trace) trace->push_back(p.objective(x));
    if (change < opt.tol) {
      s.converged = true;
      break;
    }
  }
  s.value = p.objective(x);
  s.x = std::move(x);
  return s;
}

}  // namespace stcf
