#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "stcf/geometry2d.hpp"
#include "stcf/quadform.hpp"
#include "stcf/solver1d.hpp"

namespace stcf {

/// Largest number of truncated terms the subset oracles will enumerate.
inline constexpr std::size_t kMaxOracleTerms = 20;

struct OracleResult {
  double value = kInf;
  Vec x;                            // minimizer of the winning subset sum
  std::vector<std::size_t> subset;  // finite-lambda terms left untruncated
};

/// Minimum over all subsets S of the finite-lambda terms of
/// min_x sum_{k in S}(f_k - lambda_k) + sum of untruncated terms, plus the
/// sum of finite lambdas. Subsets are visited in Gray-code order.
OracleResult subset_oracle(std::span<const TruncatedQuadratic> fs);
OracleResult subset_oracle(std::span<const Term1d> fs);

struct GridResult {
  double value = kInf;
  Vec x;
};

/// Exhaustive evaluation on `points` equally spaced nodes of [lo, hi].
GridResult grid_oracle_1d(const std::function<double(double)>& f, double lo, double hi, std::size_t points);

/// Exhaustive evaluation on a res x res grid over [x0, x1] x [y0, y1].
GridResult grid_oracle_2d(const std::function<double(const Vec2&)>& f, double x0, double x1, double y0, double y1,
                          std::size_t res);

}  // namespace stcf
