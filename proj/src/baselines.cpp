#include "stcf/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "stcf/solver2d.hpp"

namespace stcf {

OutlierFit theta_ipod(const Mat& X, const Vec& y, double lambda, Vec gamma0, double tol, std::size_t max_iter) {
  const Eigen::Index n = X.rows();
  if (y.size() != n) throw std::invalid_argument("y: length differs from the rows of X");
  Eigen::LDLT<Mat> xtx(X.transpose() * X);
  if (xtx.info() != Eigen::Success || !xtx.isPositive() ||
      xtx.vectorD().cwiseAbs().minCoeff() <= 1e-12 * xtx.vectorD().cwiseAbs().maxCoeff()) {
    throw std::invalid_argument("X: design is singular (X'X not invertible)");
  }
  const Mat H = X * xtx.solve(X.transpose());
  const Vec r = y - H * y;
  const double t = std::sqrt(lambda);
  Vec gamma = gamma0.size() == 0 ? Vec::Zero(n) : std::move(gamma0);
  if (gamma.size() != n) throw std::invalid_argument("gamma0: length differs from the rows of X");

  for (std::size_t it = 0; it < max_iter; ++it) {
    Vec next = H * gamma + r;
    for (Eigen::Index i = 0; i < n; ++i) next(i) = hard_threshold(next(i), t);
    const double change = (next - gamma).cwiseAbs().maxCoeff();
    gamma = std::move(next);
    if (change < tol) break;
  }

  RegressionProblem rp{X, y, lambda, Family::Gaussian};
  OutlierFit fit;
  fit.beta = xtx.solve(X.transpose() * (y - gamma));
  fit.gamma = gamma;
  fit.flags.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) fit.flags[static_cast<std::size_t>(i)] = gamma(i) != 0.0;
  fit.objective = outlier_objective(rp, fit.beta, fit.gamma);
  fit.method = "theta-ipod";
  return fit;
}

Solution dc_minimize(std::span<const TruncatedQuadratic> fs, Vec x, double tol, std::size_t max_iter,
                     std::vector<double>* trace) {
  if (fs.empty()) throw std::invalid_argument("dc_minimize: no terms");
  const std::size_t d = fs.front().q.dim();
  if (static_cast<std::size_t>(x.size()) != d) throw DimensionError("dc_minimize: x0 has wrong dimension");
  Quadratic f1(d);
  for (const auto& t : fs) f1 += t.q;
  Eigen::LDLT<Mat> fac(f1.A());
  if (fac.info() != Eigen::Success || !fac.isPositive() ||
      fac.vectorD().minCoeff() <= 1e-12 * fac.vectorD().cwiseAbs().maxCoeff()) {
    throw std::invalid_argument("dc_minimize: the summed Hessian is singular");
  }

  Solution s;
  s.converged = false;
  Vec grad2(static_cast<Eigen::Index>(d));
  if (trace) trace->push_back(objective_sum(fs, x));
  for (std::size_t it = 0; it < max_iter; ++it) {
    grad2.setZero();
    for (const auto& t : fs) {
      if (t.q.eval(x) > t.lambda) grad2 += t.q.gradient(x);
    }
    // argmin f1(v) - grad2' v  solves A v = grad2 - b.
    Vec next = fac.solve(grad2 - f1.b());
    const double change = (next - x).cwiseAbs().maxCoeff();
    x = std::move(next);
    ++s.iterations;
    if (trace) trace->push_back(objective_sum(fs, x));
    if (change < tol) {
      s.converged = true;
      break;
    }
  }
  s.value = objective_sum(fs, x);
  s.x = std::move(x);
  return s;
}

Vec imo_restore(const RestorationProblem& rp, double tol, std::size_t max_iter, std::size_t* iterations) {
  rp.validate();
  const auto d = static_cast<Eigen::Index>(rp.observations.size());
  const auto pairs = neighbor_pairs(rp);
  const auto m = static_cast<Eigen::Index>(pairs.size());

  // Phi: one row per neighbor pair, -1 at the first index and +1 at the second.
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * pairs.size());
  for (Eigen::Index k = 0; k < m; ++k) {
    trip.emplace_back(k, static_cast<Eigen::Index>(pairs[static_cast<std::size_t>(k)].first), -1.0);
    trip.emplace_back(k, static_cast<Eigen::Index>(pairs[static_cast<std::size_t>(k)].second), 1.0);
  }
  Eigen::SparseMatrix<double> Phi(m, d);
  Phi.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseMatrix<double> I(d, d);
  I.setIdentity();
  const Eigen::SparseMatrix<double> M = I + rp.w * Eigen::SparseMatrix<double>(Phi.transpose() * Phi);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> fac(M);
  if (fac.info() != Eigen::Success) throw std::runtime_error("imo_restore: factorization failed");

  const double t = std::sqrt(rp.lambda);
  const Vec& y = rp.observations;
  Vec x = y;
  std::size_t it = 0;
  while (it < max_iter) {
    Vec a = Phi * x;
    for (Eigen::Index k = 0; k < a.size(); ++k) a(k) = hard_threshold(a(k), t);
    Vec next = fac.solve(y + rp.w * (Phi.transpose() * a));
    const double change = (next - x).cwiseAbs().maxCoeff();
    x = std::move(next);
    ++it;
    if (change < tol) break;
  }
  if (iterations) *iterations = it;
  return x;
}

Vec gaussian_smooth(const Vec& image, std::size_t width, std::size_t height, double sigma, int kernel_size) {
  if (kernel_size < 1 || kernel_size % 2 == 0) throw std::invalid_argument("kernel_size: must be odd and positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma: must be positive");
  if (width * height != static_cast<std::size_t>(image.size())) {
    throw std::invalid_argument("width/height: grid size does not match the image");
  }
  const int h = kernel_size / 2;
  std::vector<double> k(static_cast<std::size_t>(kernel_size));
  double ksum = 0.0;
  for (int i = -h; i <= h; ++i) {
    k[static_cast<std::size_t>(i + h)] = std::exp(-0.5 * i * i / (sigma * sigma));
    ksum += k[static_cast<std::size_t>(i + h)];
  }
  for (double& v : k) v /= ksum;

  // Half-sample symmetric reflection; repeated for kernels wider than the image.
  auto reflect = [](long i, long n) {
    if (n == 1) return 0L;
    const long period = 2 * n;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - 1 - i;
  };

  const long W = static_cast<long>(width), Hh = static_cast<long>(height);
  Vec tmp(image.size()), out(image.size());
  for (long r = 0; r < Hh; ++r) {
    for (long c = 0; c < W; ++c) {
      double s = 0.0;
      for (int i = -h; i <= h; ++i) s += k[static_cast<std::size_t>(i + h)] * image(r * W + reflect(c + i, W));
      tmp(r * W + c) = s;
    }
  }
  for (long r = 0; r < Hh; ++r) {
    for (long c = 0; c < W; ++c) {
      double s = 0.0;
      for (int i = -h; i <= h; ++i) s += k[static_cast<std::size_t>(i + h)] * tmp(reflect(r + i, Hh) * W + c);
      out(r * W + c) = s;
    }
  }
  return out;
}

}  // namespace stcf
