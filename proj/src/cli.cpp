#include "stcf/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "stcf/apps.hpp"
#include "stcf/bench.hpp"
#include "stcf/oracle.hpp"
#include "stcf/pgm.hpp"
#include "stcf/problem_io.hpp"
#include "stcf/satred.hpp"
#include "stcf/solver1d.hpp"
#include "stcf/solver2d.hpp"
#include "stcf/solverhd.hpp"

namespace stcf {

namespace {

std::string join_vec(const Vec& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v(i));
  return s;
}

template <class Seq>
std::string join_idx(const Seq& s) {
  std::string out;
  for (auto k : s) out += (out.empty() ? "" : " ") + std::to_string(k);
  return out;
}

void emit_json(const std::string& path, const Json& doc) {
  if (path.empty()) return;
  write_file_atomic(path, doc.dump(2) + "\n");
}

void print_solution(const Solution& s) {
  std::cout << "value " << fmt(s.value) << "\n";
  std::cout << "x " << join_vec(s.x) << "\n";
}

std::vector<double> parse_list(const std::string& s, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || *end != '\0') throw InputError(field, "expected comma-separated numbers");
    out.push_back(v);
  }
  return out;
}

void check_threads_env() {
  const char* env = std::getenv("STCF_THREADS");
  if (!env) return;
  const std::string s = env;
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw InputError("STCF_THREADS", "expected a non-negative integer");
  }
}

Vec read_signal_csv(const std::string& path) {
  const CsvTable t = read_csv_file(path);
  std::size_t col = 0;
  if (!t.header.empty()) {
    bool found = false;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
      if (t.header[i] == "y") {
        col = i;
        found = true;
      }
    }
    if (!found && t.header.size() != 1) throw InputError(path, "missing column 'y'");
  } else if (t.rows.front().size() != 1) {
    throw InputError(path, "expected a single column of observations");
  }
  Vec y(static_cast<Eigen::Index>(t.rows.size()));
  for (std::size_t i = 0; i < t.rows.size(); ++i) y(static_cast<Eigen::Index>(i)) = t.rows[i][col];
  return y;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Minimization of sums of truncated convex functions", "stcf"};
  app.require_subcommand(1);

  std::string input, output;
  bool emit_candidates = false;
  double tol = 1e-8;
  std::size_t max_iter = 10000;
  std::string grid;
  std::string csv_path, family = "gaussian";
  double lambda = 6.25;
  bool no_intercept = false;
  std::string shape = "circle", points_path;
  double radius = 0.0, side = 0.0;
  bool no_mirror = false;
  double w = 4.0, rlambda = 9.0;
  std::string dimacs;
  std::string bench_name, bench_out;
  std::size_t replicates = 20;
  std::uint64_t seed = 1;

  auto* s1 = app.add_subcommand("solve1d", "Exact minimization of a 1-D truncated quadratic sum");
  s1->add_option("--input", input, "Problem JSON")->required();
  s1->add_option("--output", output, "Solution JSON");

  auto* s2 = app.add_subcommand("solve2d", "Exact minimization of a 2-D truncated quadratic sum");
  s2->add_option("--input", input, "Problem JSON")->required();
  s2->add_option("--output", output, "Solution JSON");
  s2->add_flag("--emit-candidates", emit_candidates, "Include the candidate active sets");

  auto* sh = app.add_subcommand("solvehd", "Coordinate descent on a sparse truncated sum");
  sh->add_option("--input", input, "Problem JSON")->required();
  sh->add_option("--output", output, "Solution JSON");
  sh->add_option("--tol", tol, "Max-abs change per cycle")->capture_default_str();
  sh->add_option("--max-iter", max_iter, "Maximum number of cycles")->capture_default_str();

  auto* so = app.add_subcommand("oracle", "Subset-enumeration (and optional grid) reference minimum");
  so->add_option("--input", input, "Problem JSON")->required();
  so->add_option("--grid", grid, "x0,x1,y0,y1,res (2-D) or x0,x1,res (1-D)");

  auto* sout = app.add_subcommand("outliers", "Outlier detection in linear or Poisson regression");
  sout->add_option("--csv", csv_path, "Data CSV with a 'y' column and covariate columns")->required();
  sout->add_option("--lambda", lambda, "Truncation level")->capture_default_str();
  sout->add_option("--family", family, "gaussian or poisson")
      ->check(CLI::IsMember({"gaussian", "poisson"}))
      ->capture_default_str();
  sout->add_flag("--no-intercept", no_intercept, "Do not prepend a column of ones");
  sout->add_option("--output", output, "Fit JSON");

  auto* sp = app.add_subcommand("place", "Place a convex shape to cover the heaviest point set");
  sp->add_option("--shape", shape, "circle, square or hexagon")
      ->check(CLI::IsMember({"circle", "square", "hexagon"}))
      ->capture_default_str();
  sp->add_option("--radius", radius, "Circle radius or hexagon circumradius");
  sp->add_option("--side", side, "Square side length");
  sp->add_option("--points", points_path, "CSV with x,y[,weight] columns")->required();
  sp->add_flag("--no-mirror", no_mirror, "Use p + S instead of p - S for the regions");
  sp->add_option("--output", output, "Placement JSON");

  auto* ss = app.add_subcommand("denoise-signal", "Edge-preserving restoration of a 1-D signal");
  ss->add_option("--input", input, "CSV of observations")->required();
  ss->add_option("--output", output, "CSV of restored values");
  ss->add_option("--w", w, "Smoothness weight")->capture_default_str();
  ss->add_option("--lambda", rlambda, "Truncation level")->capture_default_str();
  ss->add_option("--tol", tol, "Max-abs change per cycle")->capture_default_str();
  ss->add_option("--max-iter", max_iter, "Maximum number of cycles")->capture_default_str();

  auto* si = app.add_subcommand("denoise-image", "Edge-preserving restoration of a PGM image");
  si->add_option("--input", input, "P5 PGM input")->required();
  si->add_option("--output", output, "P5 PGM output")->required();
  si->add_option("--w", w, "Smoothness weight")->capture_default_str();
  si->add_option("--lambda", rlambda, "Truncation level")->capture_default_str();
  si->add_option("--tol", tol, "Max-abs change per cycle")->capture_default_str();
  si->add_option("--max-iter", max_iter, "Maximum number of cycles")->capture_default_str();

  auto* sr = app.add_subcommand("satred", "Check a 3-SAT formula through its truncated-sum reduction");
  sr->add_option("--dimacs", dimacs, "DIMACS CNF file")->required();

  auto* sb = app.add_subcommand("bench", "Run a seeded simulation study and write a CSV report");
  sb->add_option("name", bench_name, "outliers, quadratics2d, placement or signal")
      ->required()
      ->check(CLI::IsMember({"outliers", "quadratics2d", "placement", "signal"}));
  sb->add_option("--replicates", replicates, "Number of replicates")->capture_default_str();
  sb->add_option("--seed", seed, "Base seed")->capture_default_str();
  sb->add_option("--out", bench_out, "CSV report path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    std::cerr << sub->help();
    return 2;
  }

  try {
    check_threads_env();
    if (*s1) {
      const auto fs = parse_quadratic_problem(read_json_file(input), 1);
      const Solution s = minimize_sum_1d(std::span<const TruncatedQuadratic>(fs));
      print_solution(s);
      emit_json(output, solution_to_json(s));
    } else if (*s2) {
      const auto fs = parse_quadratic_problem(read_json_file(input), 2);
      const Solution s = minimize_sum_2d(fs);
      print_solution(s);
      Json doc = solution_to_json(s);
      if (emit_candidates) {
        const auto sets = enumerate_candidate_sets(fs);
        doc["candidates"] = sets;
        if (output.empty()) {
          for (const auto& c : sets) std::cout << "candidate {" << join_idx(c) << "}\n";
        }
      }
      emit_json(output, doc);
    } else if (*sh) {
      if (!(tol >= 0.0)) throw InputError("tol", "must be non-negative");
      Vec x0;
      const SparseTruncatedSum p = parse_sparse_problem(read_json_file(input), &x0);
      const Solution s = minimize_ccd(p, x0, CcdOptions{tol, max_iter});
      print_solution(s);
      std::cout << "iterations " << s.iterations << "\nconverged " << (s.converged ? "true" : "false") << "\n";
      emit_json(output, solution_to_json(s));
    } else if (*so) {
      const auto fs = parse_quadratic_problem(read_json_file(input));
      if (fs.size() > kMaxOracleTerms) {
        throw InputError("terms", "at most " + std::to_string(kMaxOracleTerms) + " terms can be enumerated");
      }
      const OracleResult r = subset_oracle(fs);
      std::cout << "value " << fmt(r.value) << "\nx " << join_vec(r.x) << "\nsubset {" << join_idx(r.subset)
                << "}\n";
      if (!grid.empty()) {
        const auto g = parse_list(grid, "grid");
        const std::size_t dim = fs.front().q.dim();
        auto f = [&](const Vec& x) {
          double v = 0.0;
          for (const auto& t : fs) v += t.eval(x);
          return v;
        };
        GridResult gr;
        if (dim == 1 && g.size() == 3 && g[2] >= 2) {
          gr = grid_oracle_1d([&](double x) { return f(Vec::Constant(1, x)); }, g[0], g[1],
                              static_cast<std::size_t>(g[2]));
        } else if (dim == 2 && g.size() == 5 && g[4] >= 2) {
          gr = grid_oracle_2d([&](const Vec2& x) { return f(Vec(x)); }, g[0], g[1], g[2], g[3],
                              static_cast<std::size_t>(g[4]));
        } else {
          throw InputError("grid", dim == 1 ? "expected x0,x1,res with res >= 2" : "expected x0,x1,y0,y1,res with res >= 2");
        }
        std::cout << "grid_value " << fmt(gr.value) << "\ngrid_x " << join_vec(gr.x) << "\n";
      }
    } else if (*sout) {
      const CsvTable t = read_csv_file(csv_path);
      if (t.header.empty()) throw InputError(csv_path, "a header row with a 'y' column is required");
      const std::size_t ycol = t.column("y", csv_path);
      const std::size_t n = t.rows.size();
      const std::size_t p = t.header.size() - 1 + (no_intercept ? 0 : 1);
      if (p == 0) throw InputError(csv_path, "no covariate columns");
      RegressionProblem rp;
      rp.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
      rp.y.resize(static_cast<Eigen::Index>(n));
      rp.lambda = lambda;
      rp.family = family == "poisson" ? Family::Poisson : Family::Gaussian;
      for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        Eigen::Index c = 0;
        if (!no_intercept) rp.X(r, c++) = 1.0;
        for (std::size_t j = 0; j < t.header.size(); ++j) {
          if (j != ycol) rp.X(r, c++) = t.rows[i][j];
        }
        rp.y(r) = t.rows[i][ycol];
      }
      const OutlierFit fit = detect_outliers(rp);
      std::vector<std::size_t> flagged;
      for (std::size_t i = 0; i < n; ++i) {
        if (fit.flags[i]) flagged.push_back(i);
      }
      std::cout << "beta " << join_vec(fit.beta) << "\nobjective " << fmt(fit.objective) << "\noutliers "
                << flagged.size() << "\nflagged {" << join_idx(flagged) << "}\nmethod " << fit.method << "\n";
      Json gamma = Json::array();
      for (Eigen::Index i = 0; i < fit.gamma.size(); ++i) gamma.push_back(lambda_to_json(fit.gamma(i)));
      std::vector<double> beta(fit.beta.data(), fit.beta.data() + fit.beta.size());
      emit_json(output, Json{{"format", kFormatTag}, {"beta", beta}, {"gamma", gamma}, {"flagged", flagged},
                             {"objective", fit.objective}, {"method", fit.method}});
    } else if (*sp) {
      ShapeSpec spec;
      spec.kind = shape == "square" ? ShapeKind::Square : shape == "hexagon" ? ShapeKind::Hexagon : ShapeKind::Circle;
      if (spec.kind == ShapeKind::Square) {
        if (side <= 0.0) throw InputError("side", "a positive --side is required for a square");
        spec.size = side;
      } else {
        if (radius <= 0.0) throw InputError("radius", "a positive --radius is required for " + shape);
        spec.size = radius;
      }
      const CsvTable t = read_csv_file(points_path);
      std::size_t cx = 0, cy = 1, cw = 2;
      const bool has_header = !t.header.empty();
      if (has_header) {
        cx = t.column("x", points_path);
        cy = t.column("y", points_path);
        cw = t.header.size();
        for (std::size_t i = 0; i < t.header.size(); ++i) {
          if (t.header[i] == "weight") cw = i;
        }
      } else if (t.rows.front().size() < 2) {
        throw InputError(points_path, "expected x,y[,weight] columns");
      }
      for (const auto& r : t.rows) {
        spec.points.emplace_back(r[cx], r[cy]);
        if (cw < r.size()) spec.weights.push_back(r[cw]);
      }
      const Placement pl = place_shape(spec, !no_mirror);
      std::cout << "location " << fmt(pl.location.x()) << " " << fmt(pl.location.y()) << "\nweight "
                << fmt(pl.weight) << "\ncovered {" << join_idx(pl.covered) << "}\n";
      emit_json(output, Json{{"format", kFormatTag},
                             {"location", {pl.location.x(), pl.location.y()}},
                             {"weight", pl.weight},
                             {"covered", pl.covered}});
    } else if (*ss) {
      RestorationProblem rp;
      rp.observations = read_signal_csv(input);
      rp.w = w;
      rp.lambda = rlambda;
      Solution diag;
      const Vec x = restore_signal(rp, CcdOptions{tol, max_iter}, &diag);
      std::string csv = "# format: stcf-v1\nx\n";
      for (Eigen::Index i = 0; i < x.size(); ++i) csv += fmt(x(i)) + "\n";
      if (output.empty()) {
        std::cout << csv;
      } else {
        write_file_atomic(output, csv);
      }
      std::cerr << "objective " << fmt(diag.value) << " iterations " << diag.iterations << "\n";
    } else if (*si) {
      const GrayImage in = read_pgm(input);
      RestorationProblem rp;
      rp.observations = in.to_unit();
      rp.width = in.width;
      rp.height = in.height;
      rp.w = w;
      rp.lambda = rlambda;
      Solution diag;
      const Vec x = restore_image(rp, CcdOptions{tol, max_iter}, &diag);
      write_pgm(output, GrayImage::from_unit(x, in.width, in.height));
      std::cout << "objective " << fmt(diag.value) << "\niterations " << diag.iterations << "\nconverged "
                << (diag.converged ? "true" : "false") << "\n";
    } else if (*sr) {
      std::ifstream in(dimacs);
      if (!in) throw InputError("dimacs", "cannot open '" + dimacs + "'");
      Formula3Sat f;
      try {
        f = parse_dimacs(in);
      } catch (const DimacsError& e) {
        throw InputError("dimacs", e.what());
      }
      if (f.num_vars > 24) throw InputError("dimacs", "at most 24 variables can be enumerated");
      const long long m = min_by_orthants(reduce(f));
      const long long expected = 6LL * static_cast<long long>(f.clauses.size());
      std::cout << "min=" << m << " expected-if-sat=" << expected << " " << (m == expected ? "SAT" : "UNSAT") << "\n";
    } else if (*sb) {
      if (replicates == 0) throw InputError("replicates", "must be positive");
      const ExperimentReport rep = run_experiment(bench_name, replicates, seed);
      const std::string csv = to_csv(rep);
      if (bench_out.empty()) {
        std::cout << csv;
      } else {
        write_file_atomic(bench_out, csv);
      }
      std::cerr << bench_name << ": " << rep.rows.size() << " rows in " << fmt(rep.seconds) << " s\n";
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PgmError& e) {
    std::cerr << "error: input: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace stcf
