#include "stcf/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>

namespace stcf {

namespace {

void check_count(std::size_t n) {
  if (n > kMaxOracleTerms) {
    throw std::invalid_argument("subset oracle: " + std::to_string(n) + " truncated terms exceed the limit of " +
                                std::to_string(kMaxOracleTerms));
  }
}

// Calls visit(subset_mask) for every mask of n bits, flipping one bit per step.
template <class Flip, class Visit>
void gray_walk(std::size_t n, Flip&& flip, Visit&& visit) {
  const std::uint64_t total = std::uint64_t{1} << n;
  visit(std::uint64_t{0});
  std::uint64_t gray = 0;
  for (std::uint64_t s = 1; s < total; ++s) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(s));
    gray ^= std::uint64_t{1} << bit;
    flip(bit, (gray >> bit) & 1u);
    visit(gray);
  }
}

std::vector<std::size_t> mask_indices(std::uint64_t mask, const std::vector<std::size_t>& idx) {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < idx.size(); ++b) {
    if ((mask >> b) & 1u) out.push_back(idx[b]);
  }
  return out;
}

}  // namespace

OracleResult subset_oracle(std::span<const TruncatedQuadratic> fs) {
  if (fs.empty()) throw std::invalid_argument("subset oracle: no terms");
  const std::size_t dim = fs.front().q.dim();
  Quadratic base(dim);
  double constant = 0.0;
  std::vector<std::size_t> idx;
  std::vector<Quadratic> shifted;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].q.dim() != dim) throw DimensionError("subset oracle: mixed dimensions");
    if (fs[i].lambda == kInf) {
      base += fs[i].q;
    } else {
      idx.push_back(i);
      shifted.push_back(fs[i].q.plus_constant(-fs[i].lambda));
      constant += fs[i].lambda;
    }
  }
  check_count(idx.size());

  ActiveSum sum(dim);
  OracleResult best;
  gray_walk(
      idx.size(),
      [&](std::size_t b, bool on) {
        if (on) {
          sum.add(b, shifted[b]);
        } else {
          sum.remove(b, shifted[b]);
        }
      },
      [&](std::uint64_t mask) {
        const QuadMinimum m = minimize(base + sum.total());
        if (!m.bounded()) return;
        const double v = m.value + constant;
        if (v < best.value) {
          best.value = v;
          best.x = m.x;
          best.subset = mask_indices(mask, idx);
        }
      });
  return best;
}

OracleResult subset_oracle(std::span<const Term1d> fs) {
  if (fs.empty()) throw std::invalid_argument("subset oracle: no terms");
  // Shifted terms g_k = f_k - lambda_k as convex scalar functions.
  std::vector<ConvexScalarFn> always;
  std::vector<ConvexScalarFn> shifted;
  std::vector<std::size_t> idx;
  double constant = 0.0;
  auto as_fn = [](const Term1d& t, double shift) {
    if (const auto* p = std::get_if<Parabola>(&t.f)) return quadratic_fn(p->a, p->b, p->c - shift);
    ConvexScalarFn g = std::get<ConvexScalarFn>(t.f);
    if (shift != 0.0) {
      g.value = [v = g.value, shift](double x) { return v(x) - shift; };
    }
    return g;
  };
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].lambda == kInf) {
      always.push_back(as_fn(fs[i], 0.0));
    } else {
      idx.push_back(i);
      shifted.push_back(as_fn(fs[i], fs[i].lambda));
      constant += fs[i].lambda;
    }
  }
  check_count(idx.size());

  std::vector<char> on(idx.size(), 0);
  std::vector<ConvexScalarFn> cur;
  OracleResult best;
  gray_walk(
      idx.size(), [&](std::size_t b, bool v) { on[b] = v; },
      [&](std::uint64_t mask) {
        cur = always;
        for (std::size_t b = 0; b < idx.size(); ++b) {
          if (on[b]) cur.push_back(shifted[b]);
        }
        double v, x = 0.0;
        if (cur.empty()) {
          v = 0.0;
        } else {
          try {
            const ScalarMinimum m = minimize_convex_sum(cur);
            v = m.value;
            x = m.x;
          } catch (const UnboundedError&) {
            return;
          }
        }
        v += constant;
        if (v < best.value) {
          best.value = v;
          best.x = Vec::Constant(1, x);
          best.subset = mask_indices(mask, idx);
        }
      });
  return best;
}

GridResult grid_oracle_1d(const std::function<double(double)>& f, double lo, double hi, std::size_t points) {
  if (points < 2 || !(hi > lo)) throw std::invalid_argument("grid oracle: need points >= 2 and lo < hi");
  GridResult r;
  const double h = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = lo + h * static_cast<double>(i);
    const double v = f(x);
    if (v < r.value) {
      r.value = v;
      r.x = Vec::Constant(1, x);
    }
  }
  return r;
}

GridResult grid_oracle_2d(const std::function<double(const Vec2&)>& f, double x0, double x1, double y0, double y1,
                          std::size_t res) {
  if (res < 2 || !(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("grid oracle: invalid box or resolution");
  GridResult r;
  const double hx = (x1 - x0) / static_cast<double>(res - 1);
  const double hy = (y1 - y0) / static_cast<double>(res - 1);
  for (std::size_t i = 0; i < res; ++i) {
    for (std::size_t j = 0; j < res; ++j) {
      const Vec2 p(x0 + hx * static_cast<double>(i), y0 + hy * static_cast<double>(j));
      const double v = f(p);
      if (v < r.value) {
        r.value = v;
        r.x = Vec(p);
      }
    }
  }
  return r;
}

}  // namespace stcf
