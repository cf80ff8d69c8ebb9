#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stcf/apps.hpp"
#include "stcf/quadform.hpp"
#include "stcf/solver1d.hpp"

namespace stcf {

/// Hard threshold: v if |v| > t, else 0.
inline double hard_threshold(double v, double t) { return std::abs(v) > t ? v : 0.0; }

/// Iterative hard thresholding for outliers: gamma <- Theta(H gamma + r; sqrt(lambda))
/// with H the hat matrix and r = y - H y. An empty gamma0 starts from zero.
OutlierFit theta_ipod(const Mat& X, const Vec& y, double lambda, Vec gamma0 = {}, double tol = 1e-8,
                      std::size_t max_iter = 10000);

/// Difference-of-convex iteration on a sum of truncated quadratics: each step
/// minimizes f1 minus the linearization of f2 = sum (q_i - lambda_i)_+ at the
/// current point. The gate uses strict q_i > lambda_i. Stops when the
/// max-abs step is below tol. `trace` receives the objective per iterate.
Solution dc_minimize(std::span<const TruncatedQuadratic> fs, Vec x0, double tol = 1e-8,
                     std::size_t max_iter = 10000, std::vector<double>* trace = nullptr);

/// Iterative marginal optimization for restoration: alternates the hard
/// threshold a = Theta(Phi x; sqrt(lambda)) with x = (I + w Phi'Phi)^{-1}(y + w Phi'a),
/// factoring the sparse system once. Starts at x = y.
Vec imo_restore(const RestorationProblem& rp, double tol = 1e-8, std::size_t max_iter = 10000,
                std::size_t* iterations = nullptr);

/// Separable Gaussian filter with reflect padding (d c b a | a b c d) and a
/// kernel normalized to sum one. kernel_size must be odd.
Vec gaussian_smooth(const Vec& image, std::size_t width, std::size_t height, double sigma = 1.0,
                    int kernel_size = 5);

}  // namespace stcf
