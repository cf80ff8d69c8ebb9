#include "stcf/solver1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stcf {

double Term1d::untruncated(double x) const {
  return std::visit([x](const auto& fn) { return fn(x); }, f);
}

double Term1d::eval(double x) const { return std::min(untruncated(x), lambda); }

Term1d Term1d::from(const TruncatedQuadratic& tq) {
  if (tq.q.dim() != 1) {
    throw DimensionError("Term1d::from: expected a 1-D quadratic, got dimension " +
                         std::to_string(tq.q.dim()));
  }
  return parabola(tq.q.A()(0, 0), tq.q.b()(0), tq.q.c(), tq.lambda);
}

double objective_1d(std::span<const Term1d> fs, double x) {
  double s = 0.0;
  for (const auto& t : fs) s += t.eval(x);
  return s;
}

namespace {

bool event_less(const SweepEvent& l, const SweepEvent& r) {
  if (l.position != r.position) return l.position < r.position;
  if (l.kind != r.kind) return l.kind < r.kind;
  return l.func_index < r.func_index;
}

}  // namespace

void Sweep1d::classify(std::span<const Term1d> fs) {
  roles_.assign(fs.size(), Role::Constant);
  events_.clear();
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const Term1d& t = fs[i];
    if (std::isnan(t.lambda)) throw SolverError("term has NaN truncation level", {i});
    if (t.lambda == kInf) {
      roles_[i] = Role::Base;
      continue;
    }
    if (const auto* p = std::get_if<Parabola>(&t.f)) {
      if (p->a < 0.0) throw SolverError("quadratic term is not convex", {i});
      if (p->a == 0.0) {
        if (p->b != 0.0) throw SolverError("linear term is unbounded below", {i});
        roles_[i] = p->c < t.lambda ? Role::Base : Role::Constant;
        continue;
      }
      const double center = -p->b / p->a;
      const double lowest = (*p)(center);
      if (!(lowest < t.lambda)) continue;  // min{f, lambda} == lambda everywhere
      const double half = std::sqrt(2.0 * (t.lambda - lowest) / p->a);
      events_.push_back({center - half, i, EventKind::Enter});
      events_.push_back({center + half, i, EventKind::Leave});
      roles_[i] = Role::Swept;
    } else {
      const auto& fn = std::get<ConvexScalarFn>(t.f);
      std::optional<std::pair<double, double>> iv;
      try {
        iv = crossing_interval(fn, t.lambda);
      } catch (const ConvergenceError& e) {
        throw SolverError(std::string("interval search failed: ") + e.what(), {i});
      }
      if (!iv) continue;
      if (iv->first == -kInf && iv->second == kInf) {
        roles_[i] = Role::Base;
        continue;
      }
      events_.push_back({iv->first, i, EventKind::Enter});
      events_.push_back({iv->second, i, EventKind::Leave});
      roles_[i] = Role::Swept;
    }
  }
  std::sort(events_.begin(), events_.end(), event_less);
}

Sweep1d::Result Sweep1d::solve(std::span<const Term1d> fs) {
  classify(fs);

  // Quadratic part of the current candidate sum, with the base kept apart so
  // an empty swept set resets exactly.
  double base_a = 0.0, base_b = 0.0, base_c = 0.0;
  generic_.clear();
  generic_idx_.clear();
  double constant = 0.0;  // lambdas of every finite term
  std::size_t base_generic = 0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (roles_[i] != Role::Base) {
      constant += fs[i].lambda;
      continue;
    }
    if (const auto* p = std::get_if<Parabola>(&fs[i].f)) {
      base_a += p->a;
      base_b += p->b;
      base_c += p->c;
    } else {
      generic_.push_back(&std::get<ConvexScalarFn>(fs[i].f));
      ++base_generic;
    }
  }

  double qa = base_a, qb = base_b, qc = base_c;
  std::size_t swept_parabolas = 0;
  double active_lambda = 0.0;
  state_.assign(fs.size(), 0);  // 1 active, 2 pending cancel

  bool have_best = false;
  double best_value = kInf;
  double best_x = 0.0;
  std::size_t pieces = 0;
  best_batch_end_ = 0;

  auto evaluate = [&](std::size_t batch_end) {
    ++pieces;
    double x, v;
    if (generic_.empty()) {
      if (qa > 0.0) {
        x = -qb / qa;
        v = qc - 0.5 * qb * qb / qa;
      } else if (qb == 0.0) {
        x = 0.0;
        v = qc;
      } else {
        return;
      }
    } else {
      scratch_.clear();
      for (const ConvexScalarFn* g : generic_) scratch_.push_back(*g);
      if (qa != 0.0 || qb != 0.0 || qc != 0.0) scratch_.push_back(quadratic_fn(qa, qb, qc));
      try {
        const ScalarMinimum m = minimize_convex_sum(scratch_);
        x = m.x;
        v = m.value;
      } catch (const UnboundedError&) {
        return;
      }
    }
    v += constant - active_lambda;
    if (!have_best || v < best_value) {
      have_best = true;
      best_value = v;
      best_x = x;
      best_batch_end_ = batch_end;
    }
  };

  auto apply = [&](const SweepEvent& ev, bool enter) {
    const Term1d& t = fs[ev.func_index];
    const double sign = enter ? 1.0 : -1.0;
    active_lambda += sign * t.lambda;
    if (const auto* p = std::get_if<Parabola>(&t.f)) {
      qa += sign * p->a;
      qb += sign * p->b;
      qc += sign * p->c;
      if (enter) {
        ++swept_parabolas;
      } else if (--swept_parabolas == 0) {
        qa = base_a;
        qb = base_b;
        qc = base_c;
      }
    } else {
      const ConvexScalarFn* g = &std::get<ConvexScalarFn>(t.f);
      if (enter) {
        generic_.push_back(g);
        generic_idx_.push_back(ev.func_index);
      } else {
        auto it = std::find(generic_idx_.begin(), generic_idx_.end(), ev.func_index);
        const auto pos = static_cast<std::size_t>(it - generic_idx_.begin());
        generic_idx_.erase(it);
        generic_.erase(generic_.begin() + static_cast<std::ptrdiff_t>(base_generic + pos));
      }
    }
  };

  evaluate(0);
  std::size_t i = 0;
  while (i < events_.size()) {
    const double pos = events_[i].position;
    std::size_t j = i;
    for (; j < events_.size() && events_[j].position == pos; ++j) {
      const SweepEvent& ev = events_[j];
      char& st = state_[ev.func_index];
      if (ev.kind == EventKind::Leave) {
        if (st == 1) {
          apply(ev, false);
          st = 0;
        } else {
          st = 2;  // degenerate interval: its Enter follows in this batch
        }
      } else if (st == 2) {
        st = 0;
      } else {
        apply(ev, true);
        st = 1;
      }
    }
    evaluate(j);
    i = j;
  }
  if (!have_best) throw SolverError("no candidate piece has a finite minimizer", {});

  Result r;
  r.x = best_x;
  r.value = objective_1d(fs, best_x);
  r.pieces = pieces;
  return r;
}

std::vector<std::size_t> Sweep1d::last_active(std::span<const Term1d> fs) const {
  std::vector<char> on(fs.size(), 0);
  for (std::size_t i = 0; i < fs.size(); ++i) on[i] = roles_[i] == Role::Base;
  std::vector<char> pending(fs.size(), 0);
  for (std::size_t e = 0; e < best_batch_end_; ++e) {
    const SweepEvent& ev = events_[e];
    if (ev.kind == EventKind::Leave) {
      if (on[ev.func_index]) {
        on[ev.func_index] = 0;
      } else {
        pending[ev.func_index] = 1;
      }
    } else if (pending[ev.func_index]) {
      pending[ev.func_index] = 0;
    } else {
      on[ev.func_index] = 1;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (on[i]) out.push_back(i);
  }
  return out;
}

std::vector<SweepEvent> sweep_events(std::span<const Term1d> fs) {
  std::vector<SweepEvent> out;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const Term1d& t = fs[i];
    if (t.lambda == kInf) continue;
    if (const auto* p = std::get_if<Parabola>(&t.f)) {
      if (p->a <= 0.0) continue;
      const double center = -p->b / p->a;
      const double lowest = (*p)(center);
      if (!(lowest < t.lambda)) continue;
      const double half = std::sqrt(2.0 * (t.lambda - lowest) / p->a);
      out.push_back({center - half, i, EventKind::Enter});
      out.push_back({center + half, i, EventKind::Leave});
    } else {
      const auto iv = crossing_interval(std::get<ConvexScalarFn>(t.f), t.lambda);
      if (!iv) continue;
      out.push_back({iv->first, i, EventKind::Enter});
      out.push_back({iv->second, i, EventKind::Leave});
    }
  }
  std::sort(out.begin(), out.end(), event_less);
  return out;
}

Solution minimize_sum_1d(std::span<const Term1d> fs) {
  if (fs.empty()) throw std::invalid_argument("minimize_sum_1d: no terms");
  Sweep1d sweep;
  const auto r = sweep.solve(fs);
  Solution s;
  s.x = Vec::Constant(1, r.x);
  s.value = r.value;
  s.active = sweep.last_active(fs);
  s.pieces_visited = r.pieces;
  return s;
}

Solution minimize_sum_1d(std::span<const TruncatedQuadratic> fs) {
  std::vector<Term1d> terms;
  terms.reserve(fs.size());
  for (const auto& tq : fs) terms.push_back(Term1d::from(tq));
  return minimize_sum_1d(terms);
}

}  // namespace stcf
