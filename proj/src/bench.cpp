#include "stcf/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "stcf/baselines.hpp"
#include "stcf/parallel.hpp"
#include "stcf/solver2d.hpp"

namespace stcf {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(mix64(seed + 0x9E3779B97F4A7C15ULL) ^ mix64(index * 0xD1B54A32D192ED03ULL + 1));
}

std::uint64_t Rng::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix64(state_);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::exponential(double rate) { return -std::log1p(-uniform()) / rate; }

double Rng::normal(double mean, double sd) {
  const double u1 = uniform();
  const double u2 = uniform();
  return mean + sd * std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// ---------------------------------------------------------------------------

std::vector<TruncatedQuadratic> gen_quadratics_2d(std::size_t n, double C, Rng& rng) {
  if (!(C > 0.0)) throw std::invalid_argument("C: must be positive");
  std::vector<TruncatedQuadratic> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = rng.uniform(0.0, std::numbers::pi);
    const double a = rng.uniform(0.01, 0.5) / C;
    const double b = rng.uniform(0.01, 0.5);
    const double u = rng.uniform();
    const double v = rng.uniform();
    const double z = rng.uniform(-10.0, -1.0);
    Eigen::Matrix2d R;
    R << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    const Eigen::Vector2d d(2.0 * std::abs(z) / (a * a), 2.0 * std::abs(z) / (b * b));
    const Mat H = R * d.asDiagonal() * R.transpose();
    const Vec m = Eigen::Vector2d(u, v);
    out.push_back({Quadratic(H, -H * m, z + 0.5 * m.dot(H * m)), 0.0});
  }
  return out;
}

std::vector<TruncatedQuadratic> gen_quadratics_1d(std::size_t n, double C, Rng& rng) {
  if (!(C > 0.0)) throw std::invalid_argument("C: must be positive");
  std::vector<TruncatedQuadratic> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = rng.uniform(0.01, 0.5) / C;
    const double u = rng.uniform();
    const double z = rng.uniform(-10.0, -1.0);
    const double h = 2.0 * std::abs(z) / (a * a);
    out.push_back({Quadratic::scalar(h, -h * u, z + 0.5 * h * u * u), 0.0});
  }
  return out;
}

OutlierData gen_outlier_data(std::size_t n, double outlier_frac, double leverage, Rng& rng) {
  if (!(outlier_frac >= 0.0 && outlier_frac < 1.0)) throw std::invalid_argument("outlier_frac: must be in [0, 1)");
  const auto k = static_cast<std::size_t>(std::lround(outlier_frac * static_cast<double>(n)));
  OutlierData d;
  d.problem.X.resize(static_cast<Eigen::Index>(n), 2);
  d.problem.y.resize(static_cast<Eigen::Index>(n));
  d.problem.lambda = 6.25;
  d.truth.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const bool out = i < k;
    const double x = out && leverage > 0.0 ? rng.uniform(leverage, leverage + 1.0) : rng.uniform(-15.0, 15.0);
    const double gamma = out ? rng.exponential(0.1) + 3.0 : 0.0;
    d.problem.X(r, 0) = 1.0;
    d.problem.X(r, 1) = x;
    d.problem.y(r) = 1.0 + 2.0 * x + gamma + rng.normal();
    d.truth[i] = out;
  }
  return d;
}

Vec signal_template() {
  Vec t(100);
  for (int i = 0; i < 100; ++i) {
    double v;
    if (i < 20) {
      v = 0.0;
    } else if (i < 40) {
      v = 5.0 * (i - 20) / 19.0;
    } else if (i < 60) {
      v = 5.0;
    } else if (i < 80) {
      v = 5.0 + 2.0 * std::sin(2.0 * std::numbers::pi * (i - 60) / 20.0);
    } else {
      const double s = (i - 80) / 19.0;
      v = 5.0 * (1.0 - s) * (1.0 - s);
    }
    t(i) = v;
  }
  return t;
}

SignalData gen_signal(Rng& rng, double noise_sd) {
  SignalData s;
  s.truth = signal_template();
  s.noisy = s.truth;
  if (noise_sd > 0.0) {
    for (Eigen::Index i = 0; i < s.noisy.size(); ++i) s.noisy(i) += rng.normal(0.0, noise_sd);
  }
  return s;
}

ImageData gen_step_image(std::size_t size, Rng& rng, double noise_sd) {
  ImageData img;
  img.width = img.height = size;
  img.truth.resize(static_cast<Eigen::Index>(size * size));
  const std::size_t lo = size / 4, hi = size - size / 4;
  for (std::size_t r = 0; r < size; ++r) {
    for (std::size_t c = 0; c < size; ++c) {
      const bool in = r >= lo && r < hi && c >= lo && c < hi;
      img.truth(static_cast<Eigen::Index>(r * size + c)) = in ? 0.8 : 0.2;
    }
  }
  img.noisy = img.truth;
  for (Eigen::Index i = 0; i < img.noisy.size(); ++i) img.noisy(i) += rng.normal(0.0, noise_sd);
  return img;
}

GridPlacement grid_scan_placement(const ShapeSpec& spec, std::size_t res, double x0, double x1, double y0,
                                  double y1) {
  spec.validate();
  if (res < 2) throw std::invalid_argument("res: at least 2 nodes per axis");
  if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("box: empty scan box");
  const double s = spec.size;
  // Half-extents of the (centrally symmetric) shape.
  const double hx = spec.kind == ShapeKind::Square ? 0.5 * s : s;
  const double hy = spec.kind == ShapeKind::Square   ? 0.5 * s
                    : spec.kind == ShapeKind::Hexagon ? s * std::sqrt(3.0) / 2.0
                                                      : s;
  const double dx = (x1 - x0) / static_cast<double>(res - 1);
  const double dy = (y1 - y0) / static_cast<double>(res - 1);
  const long R = static_cast<long>(res);

  // diff[row][col] accumulates +w at the first covered node and -w past the last.
  std::vector<double> diff(res * (res + 1), 0.0);
  for (std::size_t i = 0; i < spec.points.size(); ++i) {
    const Vec2& p = spec.points[i];
    const double w = spec.weight(i);
    const long r0 = std::max(0L, static_cast<long>(std::ceil((p.y() - hy - y0) / dy)));
    const long r1 = std::min(R - 1, static_cast<long>(std::floor((p.y() + hy - y0) / dy)));
    for (long r = r0; r <= r1; ++r) {
      const double t = std::abs(y0 + r * dy - p.y());
      double half;
      switch (spec.kind) {
        case ShapeKind::Circle:
          if (t > s) continue;
          half = std::sqrt(std::max(0.0, s * s - t * t));
          break;
        case ShapeKind::Square:
          if (t > hy) continue;
          half = hx;
          break;
        default:
          if (t > hy) continue;
          half = s - t / std::sqrt(3.0);
          break;
      }
      const long c0 = std::max(0L, static_cast<long>(std::ceil((p.x() - half - x0) / dx)));
      const long c1 = std::min(R - 1, static_cast<long>(std::floor((p.x() + half - x0) / dx)));
      if (c0 > c1) continue;
      diff[static_cast<std::size_t>(r) * (res + 1) + static_cast<std::size_t>(c0)] += w;
      diff[static_cast<std::size_t>(r) * (res + 1) + static_cast<std::size_t>(c1 + 1)] -= w;
    }
  }
  GridPlacement best;
  best.weight = -kInf;
  for (std::size_t r = 0; r < res; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < res; ++c) {
      acc += diff[r * (res + 1) + c];
      if (acc > best.weight + 1e-9) {
        best.weight = acc;
        best.location = Vec2(x0 + static_cast<double>(c) * dx, y0 + static_cast<double>(r) * dy);
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

std::optional<double> masking(const std::vector<bool>& flags, const std::vector<bool>& truth) {
  if (flags.size() != truth.size()) throw std::invalid_argument("flags: length differs from truth");
  std::size_t outliers = 0, missed = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (!truth[i]) continue;
    ++outliers;
    missed += flags[i] ? 0 : 1;
  }
  if (outliers == 0) return std::nullopt;
  return static_cast<double>(missed) / static_cast<double>(outliers);
}

std::optional<double> swamping(const std::vector<bool>& flags, const std::vector<bool>& truth) {
  if (flags.size() != truth.size()) throw std::invalid_argument("flags: length differs from truth");
  std::size_t normals = 0, swamped = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i]) continue;
    ++normals;
    swamped += flags[i] ? 1 : 0;
  }
  if (normals == 0) return std::nullopt;
  return static_cast<double>(swamped) / static_cast<double>(normals);
}

std::vector<double> success_rates(const std::vector<std::vector<double>>& values) {
  std::vector<double> rates(values.size(), 0.0);
  if (values.empty()) return rates;
  const std::size_t reps = values.front().size();
  for (const auto& v : values) {
    if (v.size() != reps) throw std::invalid_argument("values: methods have different instance counts");
  }
  if (reps == 0) return rates;
  for (std::size_t r = 0; r < reps; ++r) {
    double best = kInf;
    for (const auto& v : values) best = std::min(best, v[r]);
    for (std::size_t m = 0; m < values.size(); ++m) {
      if (values[m][r] <= best + kSuccessTol) rates[m] += 1.0;
    }
  }
  for (double& r : rates) r /= static_cast<double>(reps);
  return rates;
}

double relative_loss(double v, double best) {
  if (v == best) return 0.0;
  return std::abs(v - best) / std::abs(best);
}

double rmse(const Vec& estimate, const Vec& truth) {
  if (estimate.size() != truth.size()) throw std::invalid_argument("estimate: length differs from truth");
  if (estimate.size() == 0) return 0.0;
  return std::sqrt((estimate - truth).squaredNorm() / static_cast<double>(estimate.size()));
}

// ---------------------------------------------------------------------------

SignalOutcome run_signal_replicate(Rng& rng, double w, double lambda) {
  const SignalData sig = gen_signal(rng);
  RestorationProblem rp;
  rp.observations = sig.noisy;
  rp.w = w;
  rp.lambda = lambda;

  const Vec prop = restore_signal(rp);
  const Vec imo = imo_restore(rp);

  // DC works on the dense form of the same objective.
  const Eigen::Index d = rp.observations.size();
  std::vector<TruncatedQuadratic> fs;
  for (Eigen::Index i = 0; i < d; ++i) {
    Mat A = Mat::Zero(d, d);
    Vec b = Vec::Zero(d);
    A(i, i) = 2.0;
    b(i) = -2.0 * rp.observations(i);
    fs.push_back({Quadratic(std::move(A), std::move(b), rp.observations(i) * rp.observations(i)), kInf});
  }
  for (const auto& [i, j] : neighbor_pairs(rp)) {
    Mat A = Mat::Zero(d, d);
    const auto a = static_cast<Eigen::Index>(i), c = static_cast<Eigen::Index>(j);
    A(a, a) = A(c, c) = 2.0 * rp.w;
    A(a, c) = A(c, a) = -2.0 * rp.w;
    fs.push_back({Quadratic(std::move(A), Vec::Zero(d), 0.0), rp.w * rp.lambda});
  }
  const Solution dc = dc_minimize(fs, rp.observations);

  SignalOutcome o;
  o.objective_proposed = restoration_objective(rp, prop);
  o.objective_imo = restoration_objective(rp, imo);
  o.objective_dc = restoration_objective(rp, dc.x);
  o.rmse_proposed = rmse(prop, sig.truth);
  o.rmse_imo = rmse(imo, sig.truth);
  o.rmse_dc = rmse(dc.x, sig.truth);
  o.rmse_noisy = rmse(sig.noisy, sig.truth);
  return o;
}

const ReportRow* ExperimentReport::find(const std::string& method, const std::string& metric) const {
  for (const auto& r : rows) {
    if (r.method == method && r.metric == metric) return &r;
  }
  return nullptr;
}

namespace {

/// Per-replicate samples keyed by (method, metric) in first-seen order;
/// replicates that do not report a metric (e.g. masking without outliers)
/// are left out of its mean.
struct Samples {
  std::vector<std::pair<std::string, std::string>> keys;
  std::vector<std::vector<double>> values;

  void add(const std::string& method, const std::string& metric, double v) {
    for (std::size_t k = 0; k < keys.size(); ++k) {
      if (keys[k].first == method && keys[k].second == metric) {
        values[k].push_back(v);
        return;
      }
    }
    keys.emplace_back(method, metric);
    values.push_back({v});
  }
  void add(const std::string& method, const std::string& metric, const std::optional<double>& v) {
    if (v) add(method, metric, *v);
  }
  void merge(const Samples& o) {
    for (std::size_t k = 0; k < o.keys.size(); ++k) {
      for (double v : o.values[k]) add(o.keys[k].first, o.keys[k].second, v);
    }
  }
};

ReportRow summarize(const std::string& method, const std::string& metric, const std::vector<double>& v) {
  ReportRow row{method, metric, 0.0, 0.0, v.size()};
  if (v.empty()) return row;
  double sum = 0.0;
  for (double x : v) sum += x;
  row.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - row.mean) * (x - row.mean);
    row.stderr_ = std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
  }
  return row;
}

std::string pct_tag(const char* prefix, double frac) {
  return std::string(prefix) + std::to_string(std::lround(frac * 100.0));
}

std::string c_tag(double C) {
  std::ostringstream os;
  os << "_C" << C;
  return os.str();
}

Samples outliers_replicate(const ExperimentParams& prm, Rng& rng) {
  Samples s;
  for (double frac : prm.outlier_fracs) {
    const OutlierData d = gen_outlier_data(prm.outlier_n, frac, prm.leverage, rng);
    const OutlierFit prop = detect_outliers(d.problem);
    const OutlierFit ipod = theta_ipod(d.problem.X, d.problem.y, d.problem.lambda);
    for (const OutlierFit* f : {&prop, &ipod}) {
      const std::string m = f == &prop ? "proposed" : "theta-ipod";
      s.add(m, pct_tag("masking_O", frac), masking(f->flags, d.truth));
      s.add(m, pct_tag("swamping_O", frac), swamping(f->flags, d.truth));
      s.add(m, pct_tag("objective_O", frac), f->objective);
    }
  }
  return s;
}

Samples quadratics_replicate(const ExperimentParams& prm, Rng& rng) {
  Samples s;
  for (double C : prm.quad_C) {
    const auto fs = gen_quadratics_2d(prm.quad_n, C, rng);
    const Solution prop = minimize_sum_2d(fs);
    const Solution dc = dc_minimize(fs, Eigen::Vector2d(0.5, 0.5));
    const double best = std::min(prop.value, dc.value);
    const auto rates = success_rates({{prop.value}, {dc.value}});
    s.add("proposed", "success" + c_tag(C), rates[0]);
    s.add("dc", "success" + c_tag(C), rates[1]);
    s.add("proposed", "relative_loss" + c_tag(C), relative_loss(prop.value, best));
    s.add("dc", "relative_loss" + c_tag(C), relative_loss(dc.value, best));
  }
  return s;
}

Samples placement_replicate(const ExperimentParams& prm, Rng& rng) {
  Samples s;
  std::vector<Vec2> pts(prm.place_points);
  for (auto& p : pts) {
    const double x = rng.uniform();
    p = Vec2(x, rng.uniform());
  }
  const std::pair<ShapeKind, const char*> shapes[] = {
      {ShapeKind::Circle, "circle"}, {ShapeKind::Square, "square"}, {ShapeKind::Hexagon, "hexagon"}};
  for (const auto& [kind, label] : shapes) {
    ShapeSpec spec;
    spec.kind = kind;
    spec.size = kind == ShapeKind::Square ? 0.3 : 0.2;
    spec.points = pts;
    const Placement prop = place_shape(spec);
    const GridPlacement grid = grid_scan_placement(spec, prm.grid_res);
    s.add("proposed", std::string("covered_") + label, prop.weight);
    s.add("grid-scan", std::string("covered_") + label, grid.weight);
    s.add("proposed", std::string("matches_grid_") + label, std::abs(prop.weight - grid.weight) < 1e-9 ? 1.0 : 0.0);
  }
  return s;
}

Samples signal_replicate(const ExperimentParams& prm, Rng& rng) {
  const SignalOutcome o = run_signal_replicate(rng, prm.signal_w, prm.signal_lambda);
  Samples s;
  const double best = std::min({o.objective_proposed, o.objective_imo, o.objective_dc});
  const auto rates = success_rates({{o.objective_proposed}, {o.objective_imo}, {o.objective_dc}});
  const std::tuple<const char*, double, double> methods[] = {{"proposed", o.objective_proposed, o.rmse_proposed},
                                                              {"imo", o.objective_imo, o.rmse_imo},
                                                              {"dc", o.objective_dc, o.rmse_dc}};
  for (std::size_t m = 0; m < 3; ++m) {
    const auto& [name, f, err] = methods[m];
    s.add(name, "success", rates[m]);
    s.add(name, "relative_loss", relative_loss(f, best));
    s.add(name, "rmse", err);
    s.add(name, "objective", f);
  }
  s.add("noisy", "rmse", o.rmse_noisy);
  return s;
}

}  // namespace

ExperimentReport run_experiment(const std::string& name, std::size_t replicates, std::uint64_t seed,
                                const ExperimentParams& params) {
  std::function<Samples(const ExperimentParams&, Rng&)> body;
  if (name == "outliers") {
    body = outliers_replicate;
  } else if (name == "quadratics2d") {
    body = quadratics_replicate;
  } else if (name == "placement") {
    body = placement_replicate;
  } else if (name == "signal") {
    body = signal_replicate;
  } else {
    throw std::invalid_argument("name: unknown experiment '" + name +
                                "' (expected outliers, quadratics2d, placement, signal)");
  }
  if (replicates == 0) throw std::invalid_argument("replicates: must be positive");

  const auto start = std::chrono::steady_clock::now();
  std::vector<Samples> per(replicates);
  parallel_for(replicates, [&](std::size_t r) {
    Rng rng = Rng::stream(seed, r);
    per[r] = body(params, rng);
  });
  Samples all;
  for (const auto& s : per) all.merge(s);

  ExperimentReport rep;
  rep.name = name;
  rep.replicates = replicates;
  rep.seed = seed;
  for (std::size_t k = 0; k < all.keys.size(); ++k) {
    rep.rows.push_back(summarize(all.keys[k].first, all.keys[k].second, all.values[k]));
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

void write_csv(std::ostream& os, const ExperimentReport& report) { os << to_csv(report); }

std::string to_csv(const ExperimentReport& report) {
  std::string out = "method,metric,mean,stderr,replicates,seed\n";
  char buf[128];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, ",%.12g,%.12g,%zu,%llu\n", r.mean, r.stderr_, r.count,
                  static_cast<unsigned long long>(report.seed));
    out += r.method + "," + r.metric + buf;
  }
  return out;
}

}  // namespace stcf
