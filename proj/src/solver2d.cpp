#include "stcf/solver2d.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace stcf {

namespace {

// Membership is re-verified from scratch after this many events.
constexpr std::size_t kVerifyEvery = 64;

bool same_key(double a, double b) { return std::abs(a - b) <= 1e-10 * (1.0 + std::abs(a) + std::abs(b)); }

}  // namespace

void traverse_arrangement(std::span<const BoundaryCurve> curves, const MembershipFn& inside,
                          ArrangementVisitor& visitor, TraversalStats* stats) {
  const std::size_t m = curves.size();
  TraversalStats local;
  TraversalStats& st = stats ? *stats : local;

  // Merge identical boundaries under their first occurrence.
  std::vector<std::size_t> leader(m);
  std::vector<std::vector<std::size_t>> group(m);
  std::vector<std::size_t> leaders;
  for (std::size_t r = 0; r < m; ++r) {
    leader[r] = r;
    for (std::size_t l : leaders) {
      if (curves[r].same_as(curves[l])) {
        leader[r] = l;
        break;
      }
    }
    if (leader[r] == r) leaders.push_back(r);
    group[leader[r]].push_back(r);
  }

  std::vector<std::vector<CurvePoint>> events(m);
  for (std::size_t a = 0; a < leaders.size(); ++a) {
    for (std::size_t b = a + 1; b < leaders.size(); ++b) {
      const std::size_t i = leaders[a], k = leaders[b];
      std::vector<TaggedPoint> pts;
      try {
        pts = intersect_tagged(curves[i], curves[k]);
      } catch (const GeometryError& e) {
        throw SolverError(std::string("boundary intersection failed: ") + e.what(),
                          {curves[i].owner(), curves[k].owner()});
      }
      st.intersections += pts.size();
      for (const auto& t : pts) {
        events[i].push_back({t.point, 0.0, k});
        events[k].push_back({t.point, 0.0, i});
      }
    }
  }

  std::vector<char> in(m, 0);
  auto fill_membership = [&](std::size_t traversed, const Vec2& p, std::vector<char>& dst) {
    for (std::size_t l : leaders) {
      const bool v = l == traversed ? true : inside(l, p);
      for (std::size_t r : group[l]) dst[r] = v;
    }
  };
  std::vector<char> fresh(m, 0);

  for (std::size_t i : leaders) {
    const BoundaryCurve& curve = curves[i];
    const auto orders = sort_along(curve, events[i]);
    for (const ComponentOrder& co : orders) {
      ++st.components;
      fill_membership(i, co.probe, in);
      visitor.reset(i, group[i], in);
      visitor.visit(co.probe);

      const auto& pts = co.points;
      std::size_t since_check = 0;
      std::size_t e = 0;
      while (e < pts.size()) {
        std::size_t f = e + 1;
        while (f < pts.size() && same_key(pts[f].arc_key, pts[e].arc_key)) ++f;
        // Point on the arc that follows this batch.
        double next_key;
        if (f < pts.size()) {
          next_key = 0.5 * (pts[e].arc_key + pts[f].arc_key);
        } else if (curve.closed()) {
          next_key = co.probe_key;
        } else {
          next_key = pts[e].arc_key + 1.0;
        }
        const Vec2 q = curve.point_at(co.component, next_key);
        for (std::size_t j = e; j < f; ++j) {
          const std::size_t k = pts[j].other;
          const bool now = inside(k, q);
          if (static_cast<bool>(in[k]) != now) {
            for (std::size_t r : group[k]) {
              in[r] = now;
              visitor.toggle(r, now);
            }
          }
        }
        st.events += f - e;
        since_check += f - e;
        if (since_check >= kVerifyEvery) {
          since_check = 0;
          fill_membership(i, q, fresh);
          if (fresh != in) {
            ++st.reseeds;
            in = fresh;
            visitor.reset(i, group[i], in);
          }
        }
        visitor.visit(q);
        e = f;
      }
    }
  }
}

double objective_sum(std::span<const TruncatedQuadratic> fs, const Vec& x) {
  double s = 0.0;
  for (const auto& t : fs) s += t.eval(x);
  return s;
}

namespace {

// Split of the terms into a fixed part and the terms with a boundary.
struct Prepared {
  Quadratic base{2};
  std::vector<std::size_t> base_terms;
  double constant = 0.0;  // sum of finite lambdas
  std::vector<BoundaryCurve> curves;
  std::vector<Quadratic> shifted;  // f_k - lambda_k, per curve
};

Prepared prepare(std::span<const TruncatedQuadratic> fs) {
  Prepared p;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const TruncatedQuadratic& t = fs[i];
    if (t.q.dim() != 2) {
      throw DimensionError("minimize_sum_2d: term " + std::to_string(i) + " has dimension " +
                           std::to_string(t.q.dim()));
    }
    if (std::isnan(t.lambda)) throw SolverError("term has NaN truncation level", {i});
    if (t.lambda == kInf) {
      if (!minimize(t.q).bounded()) throw SolverError("untruncated term is unbounded below", {i});
      p.base += t.q;
      p.base_terms.push_back(i);
      continue;
    }
    p.constant += t.lambda;
    std::optional<BoundaryCurve> bc;
    try {
      bc = boundary_of(t, i);
    } catch (const GeometryError& e) {
      throw SolverError(e.what(), {i});
    }
    if (bc) {
      p.curves.push_back(std::move(*bc));
      p.shifted.push_back(t.q.plus_constant(-t.lambda));
      continue;
    }
    // No boundary: either C is empty (constant lambda) or the whole plane.
    const QuadMinimum qm = minimize(t.q);
    if (qm.bounded() && qm.value < t.lambda) {
      p.base += t.q.plus_constant(-t.lambda);
      p.base_terms.push_back(i);
    }
  }
  return p;
}

class MinimizingVisitor : public ArrangementVisitor {
 public:
  explicit MinimizingVisitor(const Prepared& p) : p_(p), J_(2) {}

  void reset(std::size_t curve, std::span<const std::size_t> group, const std::vector<char>& inside) override {
    J_.clear();
    in_group_.assign(p_.curves.size(), 0);
    group_sum_ = Quadratic(2);
    for (std::size_t r : group) {
      in_group_[r] = 1;
      group_sum_ += p_.shifted[r];
    }
    (void)curve;
    for (std::size_t r = 0; r < inside.size(); ++r) {
      if (inside[r] && !in_group_[r]) J_.add(r, p_.shifted[r]);
    }
    group_.assign(group.begin(), group.end());
  }

  void toggle(std::size_t region, bool now) override {
    if (in_group_[region]) return;
    if (now) {
      J_.add(region, p_.shifted[region]);
    } else {
      J_.remove(region, p_.shifted[region]);
    }
  }

  void visit(const Vec2&) override {
    Quadratic q = p_.base + J_.total();
    consider(q, false);
    q += group_sum_;
    consider(q, true);
  }

  void consider_base() { consider(p_.base, false, true); }

  bool have = false;
  double best = kInf;
  Vec x;
  std::vector<std::size_t> set;  // curve indices of the winning piece
  std::size_t pieces = 0;

 private:
  void consider(const Quadratic& q, bool with_group, bool empty = false) {
    ++pieces;
    const QuadMinimum m = minimize(q);
    if (!m.bounded()) return;
    const double v = m.value + p_.constant;
    if (have && !(v < best)) return;
    have = true;
    best = v;
    x = m.x;
    set.clear();
    if (empty) return;
    set.assign(J_.indices().begin(), J_.indices().end());
    if (with_group) set.insert(set.end(), group_.begin(), group_.end());
  }

  const Prepared& p_;
  ActiveSum J_;
  Quadratic group_sum_{2};
  std::vector<char> in_group_;
  std::vector<std::size_t> group_;
};

class CollectingVisitor : public ArrangementVisitor {
 public:
  void reset(std::size_t, std::span<const std::size_t> group, const std::vector<char>& inside) override {
    cur_.clear();
    group_.assign(group.begin(), group.end());
    for (std::size_t r = 0; r < inside.size(); ++r) {
      if (inside[r] && std::find(group.begin(), group.end(), r) == group.end()) cur_.insert(r);
    }
  }
  void toggle(std::size_t region, bool now) override {
    if (std::find(group_.begin(), group_.end(), region) != group_.end()) return;
    if (now) {
      cur_.insert(region);
    } else {
      cur_.erase(region);
    }
  }
  void visit(const Vec2&) override {
    std::vector<std::size_t> J(cur_.begin(), cur_.end());
    sets.insert(J);
    std::set<std::size_t> I = cur_;
    I.insert(group_.begin(), group_.end());
    sets.insert(std::vector<std::size_t>(I.begin(), I.end()));
  }

  std::set<std::vector<std::size_t>> sets;

 private:
  std::set<std::size_t> cur_;
  std::vector<std::size_t> group_;
};

MembershipFn quadratic_membership(std::span<const TruncatedQuadratic> fs, const Prepared& p) {
  return [fs, &p](std::size_t r, const Vec2& x) { return contains(fs[p.curves[r].owner()], x); };
}

}  // namespace

Solution minimize_sum_2d(std::span<const TruncatedQuadratic> fs, TraversalStats* stats) {
  if (fs.empty()) throw std::invalid_argument("minimize_sum_2d: no terms");
  const Prepared p = prepare(fs);
  MinimizingVisitor v(p);
  v.consider_base();
  traverse_arrangement(p.curves, quadratic_membership(fs, p), v, stats);
  if (!v.have) throw SolverError("no candidate active set has a finite minimizer", {});

  Solution s;
  s.x = v.x;
  s.value = objective_sum(fs, s.x);
  s.pieces_visited = v.pieces;
  std::set<std::size_t> active(p.base_terms.begin(), p.base_terms.end());
  for (std::size_t r : v.set) active.insert(p.curves[r].owner());
  s.active.assign(active.begin(), active.end());
  return s;
}

std::vector<std::vector<std::size_t>> enumerate_candidate_sets(std::span<const TruncatedQuadratic> fs) {
  const Prepared p = prepare(fs);
  CollectingVisitor v;
  traverse_arrangement(p.curves, quadratic_membership(fs, p), v);
  std::set<std::vector<std::size_t>> out{{}};
  for (const auto& s : v.sets) {
    std::vector<std::size_t> owners;
    for (std::size_t r : s) owners.push_back(p.curves[r].owner());
    std::sort(owners.begin(), owners.end());
    out.insert(owners);
  }
  return {out.begin(), out.end()};
}

}  // namespace stcf
