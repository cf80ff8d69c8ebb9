#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "stcf/apps.hpp"
#include "stcf/quadform.hpp"

namespace stcf {

/// splitmix64. uniform() takes the top 53 bits; exponential() inverts the
/// CDF; normal() is the cosine branch of Box-Muller (two uniforms per draw).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Independent stream for replicate `index` of a run seeded with `seed`.
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next();
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double exponential(double rate);
  double normal(double mean = 0.0, double sd = 1.0);

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Generators

/// n truncated quadratics with lambda = 0 whose zero level sets are random
/// ellipses: orientation U(0, pi), axis along the orientation U(0.01, 0.5)/C,
/// other axis U(0.01, 0.5), center in the unit square, vertex value U(-10, -1).
std::vector<TruncatedQuadratic> gen_quadratics_2d(std::size_t n, double C, Rng& rng);

/// One-dimensional analogue: interval half-width U(0.01, 0.5)/C around a
/// center in [0, 1], vertex value U(-10, -1), lambda = 0.
std::vector<TruncatedQuadratic> gen_quadratics_1d(std::size_t n, double C, Rng& rng);

struct OutlierData {
  RegressionProblem problem;  // X = [1, x], lambda = 6.25
  std::vector<bool> truth;    // first round(frac * n) rows are outliers
};

/// y = 1 + 2x + gamma + N(0, 1) with gamma = Exp(rate 0.1) + 3 on outliers.
/// Outlier x ~ U(L, L+1) when L > 0; every other x ~ U(-15, 15).
OutlierData gen_outlier_data(std::size_t n, double outlier_frac, double leverage, Rng& rng);

struct SignalData {
  Vec truth;
  Vec noisy;
};

/// Noiseless piecewise template of length 100: constant 0, ramp to 5,
/// constant 5, one sine period of amplitude 2 around 5, quadratic decay to 0.
Vec signal_template();
/// Template plus N(0, noise_sd^2) noise.
SignalData gen_signal(Rng& rng, double noise_sd = 1.0);

struct ImageData {
  std::size_t width = 0;
  std::size_t height = 0;
  Vec truth;
  Vec noisy;
};

/// size x size image: 0.2 background with a 0.8 square over the middle half,
/// plus N(0, noise_sd^2) noise.
ImageData gen_step_image(std::size_t size, Rng& rng, double noise_sd = 0.1);

/// res x res grid of candidate centers over [x0, x1] x [y0, y1] (the unit
/// square by default); the covered weight at every node comes from per-row
/// interval rasterization of each point's region.
struct GridPlacement {
  Vec2 location = Vec2::Zero();
  double weight = 0.0;
};
GridPlacement grid_scan_placement(const ShapeSpec& spec, std::size_t res, double x0 = 0.0, double x1 = 1.0,
                                  double y0 = 0.0, double y1 = 1.0);

// ---------------------------------------------------------------------------
// Metrics

inline constexpr double kSuccessTol = 1e-5;

/// Undetected true outliers / true outliers; nullopt when there are none.
std::optional<double> masking(const std::vector<bool>& flags, const std::vector<bool>& truth);
/// Flagged normal rows / normal rows; nullopt when there are none.
std::optional<double> swamping(const std::vector<bool>& flags, const std::vector<bool>& truth);
/// values[m][r]: objective of method m on instance r. Returns per-method
/// fractions of instances within kSuccessTol of the best method.
std::vector<double> success_rates(const std::vector<std::vector<double>>& values);
double relative_loss(double v, double best);
double rmse(const Vec& estimate, const Vec& truth);

// ---------------------------------------------------------------------------
// Experiments

/// One signal-restoration replicate: the proposed coordinate descent, IMO
/// and DC (both started at the observations) on the same objective.
struct SignalOutcome {
  double objective_proposed = 0.0, objective_imo = 0.0, objective_dc = 0.0;
  double rmse_proposed = 0.0, rmse_imo = 0.0, rmse_dc = 0.0, rmse_noisy = 0.0;
};
SignalOutcome run_signal_replicate(Rng& rng, double w = 4.0, double lambda = 9.0);

struct ReportRow {
  std::string method;
  std::string metric;
  double mean = 0.0;
  double stderr_ = 0.0;  // sample SD / sqrt(count)
  std::size_t count = 0;
};

struct ExperimentReport {
  std::string name;
  std::vector<ReportRow> rows;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  double seconds = 0.0;

  const ReportRow* find(const std::string& method, const std::string& metric) const;
};

struct ExperimentParams {
  // outliers
  std::size_t outlier_n = 100;
  std::vector<double> outlier_fracs{0.05, 0.10, 0.20, 0.30, 0.45, 0.60};
  double leverage = 0.0;
  // quadratics2d
  std::size_t quad_n = 50;
  std::vector<double> quad_C{1.0, 5.0, 10.0};
  // placement
  std::size_t place_points = 30;
  std::size_t grid_res = 1500;
  // signal
  double signal_w = 4.0;
  double signal_lambda = 9.0;
};

/// Runs one of: outliers, quadratics2d, placement, signal. Replicates run in
/// parallel, each on Rng::stream(seed, r); the reduction is in replicate
/// order, so the report depends only on the arguments.
ExperimentReport run_experiment(const std::string& name, std::size_t replicates, std::uint64_t seed,
                                const ExperimentParams& params = {});

/// CSV with header method,metric,mean,stderr,replicates,seed.
void write_csv(std::ostream& os, const ExperimentReport& report);
std::string to_csv(const ExperimentReport& report);

}  // namespace stcf
