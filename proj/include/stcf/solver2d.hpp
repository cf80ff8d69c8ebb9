#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "stcf/geometry2d.hpp"
#include "stcf/quadform.hpp"
#include "stcf/solver1d.hpp"

namespace stcf {

struct TraversalStats {
  std::size_t components = 0;   // boundary components walked
  std::size_t events = 0;       // intersection events processed
  std::size_t reseeds = 0;      // membership drift corrections
  std::size_t intersections = 0;
};

/// Receives the membership changes of a boundary walk.
///
/// Regions are indexed by their position in the curve list. `reset` opens a
/// boundary component of `curve` with the membership of every region at the
/// probe point; members of `group` (regions sharing that boundary) are inside.
/// `visit` is called once per arc with a point on that arc.
class ArrangementVisitor {
 public:
  virtual ~ArrangementVisitor() = default;
  virtual void reset(std::size_t curve, std::span<const std::size_t> group, const std::vector<char>& inside) = 0;
  virtual void toggle(std::size_t region, bool inside) = 0;
  virtual void visit(const Vec2& arc_point) = 0;
};

/// Closed-set membership of point p in region r.
using MembershipFn = std::function<bool(std::size_t region, const Vec2& p)>;

/// Walks every boundary of the arrangement formed by `curves`. Identical
/// curves are merged into one boundary whose regions toggle together.
/// Throws SolverError carrying the owners of a failing curve pair.
void traverse_arrangement(std::span<const BoundaryCurve> curves, const MembershipFn& inside,
                          ArrangementVisitor& visitor, TraversalStats* stats = nullptr);

double objective_sum(std::span<const TruncatedQuadratic> fs, const Vec& x);

/// Exact global minimum of sum_i min{f_i(x), lambda_i} over the plane.
Solution minimize_sum_2d(std::span<const TruncatedQuadratic> fs, TraversalStats* stats = nullptr);

/// Candidate active sets met during the walk, as sorted indices of terms with
/// a truncation boundary; always contains the empty set.
std::vector<std::vector<std::size_t>> enumerate_candidate_sets(std::span<const TruncatedQuadratic> fs);

}  // namespace stcf
