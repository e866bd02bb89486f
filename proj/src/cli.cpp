#include "gradflux/cli.hpp"

#include "gradflux/bregman.hpp"
#include "gradflux/duality.hpp"
#include "gradflux/io.hpp"
#include "gradflux/perturbation.hpp"
#include "gradflux/poisson.hpp"
#include "gradflux/problem.hpp"
#include "gradflux/stability.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace gradflux {

namespace fs = std::filesystem;

namespace {

/// Non-convergence in strict mode.
class StrictFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<std::string> kProblemKeys{
    "n", "problem", "drift", "a_file", "f_file", "h_file", "delta", "seeds"};
const std::vector<std::string> kSolverKeys{"lambda", "tol", "max_iter", "eta",
                                           "threads"};

std::vector<std::string> keys(std::initializer_list<std::vector<std::string>> groups,
                              std::initializer_list<std::string> extra = {}) {
  std::vector<std::string> out;
  for (const auto& g : groups) out.insert(out.end(), g.begin(), g.end());
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ", ") + format_double(x);
  return s;
}

std::string join(const std::vector<std::uint64_t>& v) {
  std::string s;
  for (auto x : v) s += (s.empty() ? "" : ", ") + std::to_string(x);
  return s;
}

struct Options {
  fs::path config;
  fs::path out = ".";
  bool strict = false;
};

SolverConfig read_solver(const Config& c, Settings& s) {
  SolverConfig cfg;
  cfg.lambda = c.real("lambda", 1.0, 1e-12, 1e12);
  cfg.tol = c.real("tol", 1e-7, 1e-15, 1.0);
  cfg.max_iter = c.integer("max_iter", 5000, 1, 100000000);
  if (!(cfg.lambda > 0.0)) throw InputError(c.source() + ": key 'lambda' must be > 0");
  s.emplace_back("lambda", format_double(cfg.lambda));
  s.emplace_back("tol", format_double(cfg.tol));
  s.emplace_back("max_iter", std::to_string(cfg.max_iter));
  return cfg;
}

double read_eta(const Config& c, Settings& s) {
  const double eta = c.real("eta", 1e-8, 1e-300, 1.0);
  s.emplace_back("eta", format_double(eta));
  return eta;
}

int read_threads(const Config& c, Settings& s) {
  const int t = c.integer("threads", 0, 0, 4096);
  s.emplace_back("threads", std::to_string(t));
  return t;
}

int check_grid(const Config& c, const std::string& key, int n, int expected) {
  if (expected > 0 && n != expected) {
    throw InputError(c.path(key).string() + ": grid n = " + std::to_string(n) +
                     " does not match n = " + std::to_string(expected));
  }
  return n;
}

/// Loads the problem named by the config. Noise keys (delta, seeds) turn it
/// into one noisy run of the replication experiment.
ProblemData read_problem(const Config& c, Settings& s) {
  const std::string kind = c.choice("problem", "example1", {"example1", "files"});
  s.emplace_back("problem", kind);
  ProblemData p;
  if (kind == "example1") {
    const int n = c.integer("n", 100, 2, 4096);
    const std::string drift =
        c.choice("drift", "discrete", {"discrete", "analytic"});
    s.emplace_back("n", std::to_string(n));
    s.emplace_back("drift", drift);
    p = example1(GridSpec(n), drift == "discrete" ? DriftAssembly::Discrete
                                                  : DriftAssembly::Analytic);
  } else {
    const ScalarField a = read_field(c.path("a_file"));
    const int n = check_grid(c, "a_file", a.grid().n(), c.integer("n", 0, 0, 4096));
    const FieldFile f = read_field_file(c.path("f_file"));
    check_grid(c, "f_file", f.n, n);
    const ScalarField H = read_field(c.path("h_file"));
    check_grid(c, "h_file", H.grid().n(), n);
    s.emplace_back("n", std::to_string(n));
    s.emplace_back("a_file", c.text("a_file", ""));
    s.emplace_back("f_file", c.text("f_file", ""));
    s.emplace_back("h_file", c.text("h_file", ""));
    p = f.kind == "vector"
            ? make_problem(a, to_vector_field(f), H, "files")
            : make_problem_from_potential(a, to_scalar_field(f), H, "files");
  }

  const double delta = c.real("delta", 0.0, 0.0, 1e6);
  if (delta > 0.0) {
    const auto seeds = c.seeds("seeds", {0});
    if (seeds.size() != 1) {
      throw InputError(c.source() + ": key 'seeds' must hold exactly one seed "
                                    "when delta is set");
    }
    s.emplace_back("delta", format_double(delta));
    s.emplace_back("seeds", std::to_string(seeds.front()));
    try {
      p = table1_instance(p, delta, seeds.front());
    } catch (const NoiseScaleUndefined& e) {
      throw InputError(c.source() + ": key 'delta': " + e.what());
    }
  }
  return p;
}

void write_settings_block(std::ostream& out, const Settings& s) {
  for (const auto& [k, v] : s) out << "# " << k << " = " << v << '\n';
}

std::ofstream open(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError(path.string() + ": cannot open for writing");
  return out;
}

void print_warnings(const ProblemData& p, std::ostream& err) {
  for (const auto& w : validate(p).warnings) err << "warning: " << w << '\n';
}

void write_solution_summary(std::ostream& out, const ProblemData& p,
                            const ScalarField& u) {
  if (!p.exact_u) return;
  out << "rel_l2 = " << format_double(relative_l2(u, *p.exact_u)) << '\n'
      << "max_err = "
      << format_double(norm(ScalarField(u - *p.exact_u), Norm::Linf)) << '\n';
}

// ---------------------------------------------------------------------------

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
  const Config c = Config::load(o.config, keys({kProblemKeys, kSolverKeys}));
  Settings s;
  const ProblemData p = read_problem(c, s);
  SolverConfig cfg = read_solver(c, s);
  const double eta = read_eta(c, s);
  read_threads(c, s);
  cfg.record_history = true;
  print_warnings(p, err);

  const SolveResult r = solve(p, cfg);
  const Certificate cert = certify(r.state.u, p, eta);

  fs::create_directories(o.out);
  write_field(r.state.u, o.out / "u.field", "solution", p.tag);
  {
    std::ofstream f = open(o.out / "certificate.txt");
    write_settings_block(f, s);
    f << "iterations = " << r.iterations << '\n'
      << "converged = " << (r.converged ? "true" : "false") << '\n';
    write_certificate(f, cert);
    write_solution_summary(f, p, r.state.u);
  }
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto& h : r.history) {
      rows.push_back({std::to_string(h.k), format_double(h.rel_change),
                      format_double(h.energy)});
    }
    std::ofstream f = open(o.out / "history.csv");
    write_csv(f, s, {"k", "rel_change", "energy"}, rows);
  }

  out << "iterations = " << r.iterations << '\n'
      << "converged = " << (r.converged ? "true" : "false") << '\n';
  write_certificate(out, cert);
  write_solution_summary(out, p, r.state.u);
  if (o.strict && !r.converged) {
    throw StrictFailure("solver did not converge within max_iter = " +
                        std::to_string(cfg.max_iter));
  }
  return 0;
}

int cmd_certify(const Options& o, std::ostream& out, std::ostream& err) {
  const Config c =
      Config::load(o.config, keys({kProblemKeys}, {"eta", "u_file"}));
  Settings s;
  const ProblemData p = read_problem(c, s);
  const double eta = read_eta(c, s);
  const ScalarField u = read_field(c.path("u_file"));
  check_grid(c, "u_file", u.grid().n(), p.grid.n());
  s.emplace_back("u_file", c.text("u_file", ""));
  print_warnings(p, err);
  if (!u.vanishes_on_boundary()) {
    err << "warning: u does not vanish on the boundary\n";
  }

  const Certificate cert = certify(u, p, eta);
  fs::create_directories(o.out);
  {
    std::ofstream f = open(o.out / "certificate.txt");
    write_settings_block(f, s);
    write_certificate(f, cert);
    write_solution_summary(f, p, u);
  }
  write_certificate(out, cert);
  write_solution_summary(out, p, u);
  return 0;
}

std::vector<std::string> sweep_cells(const SweepRow& r) {
  return {format_double(r.eps),           std::to_string(r.seed),
          format_double(r.err_u_l1),      format_double(r.err_gradu_l1),
          format_double(r.err_sigma_l1),  format_double(r.err_J_l1),
          format_double(r.energy_diff),   format_double(r.misalignment),
          std::to_string(r.iters),        format_double(r.rel_l2)};
}

const std::vector<std::string> kSweepColumns{
    "eps",      "seed",        "err_u_l1",     "err_gradu_l1", "err_sigma_l1",
    "err_J_l1", "energy_diff", "misalignment", "iters",        "rel_l2"};

std::string bound_cells(const std::optional<BoundCheck>& b) {
  if (!b) return "nan,nan,false";
  return format_double(b->lhs) + "," + format_double(b->rhs) + "," +
         (b->holds ? "true" : "false");
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  const Config c = Config::load(
      o.config, keys({kProblemKeys, kSolverKeys},
                     {"param", "epsilons", "mode", "profile", "slack"}));
  Settings s;
  const ProblemData p = read_problem(c, s);

  SweepSpec spec;
  spec.solver = read_solver(c, s);
  spec.eta = read_eta(c, s);
  spec.threads = read_threads(c, s);

  const std::string param = c.choice("param", "a", {"a", "f", "H", "combined"});
  spec.param = param == "a"   ? SweepParam::A
               : param == "f" ? SweepParam::F
               : param == "H" ? SweepParam::H
                              : SweepParam::Combined;
  const std::string mode = c.choice("mode", "constant-shift",
                                    {"constant-shift", "smooth-bump", "noise"});
  spec.mode = mode == "constant-shift" ? SweepMode::ConstantShift
              : mode == "smooth-bump"  ? SweepMode::SmoothBump
                                       : SweepMode::Noise;
  const std::string profile = c.choice("profile", "boundary-active",
                                       {"boundary-active", "interior-bump"});
  spec.profile = profile == "boundary-active" ? PotentialProfile::BoundaryActive
                                              : PotentialProfile::InteriorBump;
  if (!c.has("epsilons")) throw InputError(c.source() + ": missing key 'epsilons'");
  spec.epsilons = c.reals("epsilons", {}, 0.0, 1e6);
  if (spec.epsilons.empty()) {
    throw InputError(c.source() + ": key 'epsilons' is empty");
  }
  for (std::size_t k = 1; k < spec.epsilons.size(); ++k) {
    if (!(spec.epsilons[k] < spec.epsilons[k - 1])) {
      throw InputError(c.source() + ": key 'epsilons' must be strictly decreasing");
    }
  }
  spec.seeds = c.seeds("seeds", {0});
  if (spec.seeds.empty()) throw InputError(c.source() + ": key 'seeds' is empty");
  spec.slack = c.real("slack", 0.1, 0.0, 10.0);
  try {
    spec.check();
  } catch (const std::invalid_argument& e) {
    throw InputError(c.source() + ": " + e.what());
  }
  s.emplace_back("param", param);
  s.emplace_back("mode", mode);
  s.emplace_back("profile", profile);
  s.emplace_back("epsilons", join(spec.epsilons));
  s.emplace_back("seeds", join(spec.seeds));
  s.emplace_back("slack", format_double(spec.slack));
  print_warnings(p, err);

  const StabilityReport rep = run_sweep(p, spec);

  fs::create_directories(o.out);
  std::vector<std::vector<std::string>> rows, mean_rows, checks;
  bool all_valid = rep.base_converged;
  for (const auto& r : rep.rows) {
    rows.push_back(sweep_cells(r));
    all_valid = all_valid && r.valid;
    checks.push_back(
        {format_double(r.eps), std::to_string(r.seed), r.valid ? "true" : "false",
         format_double(r.excluded_fraction),
         format_double(r.min_misalignment_integrand), format_double(r.a_linf),
         format_double(r.F_l1), format_double(r.H_linf), format_double(r.f_w11),
         format_double(r.M), format_double(r.sigma0_est),
         format_double(r.sigma1_est), bound_cells(r.energy_bound),
         bound_cells(r.misalignment_bound), bound_cells(r.flux_bound)});
  }
  for (const auto& r : rep.averaged) {
    auto cells = sweep_cells(r);
    cells.push_back(r.valid ? "true" : "false");
    mean_rows.push_back(std::move(cells));
  }
  Settings base_s = s;
  base_s.emplace_back("base_iterations", std::to_string(rep.base_iterations));
  base_s.emplace_back("base_converged", rep.base_converged ? "true" : "false");
  {
    std::ofstream f = open(o.out / "sweep.csv");
    write_csv(f, base_s, kSweepColumns, rows);
  }
  {
    auto columns = kSweepColumns;
    columns.push_back("valid");
    std::ofstream f = open(o.out / "sweep_mean.csv");
    write_csv(f, base_s, columns, mean_rows);
  }
  {
    std::ofstream f = open(o.out / "sweep_checks.csv");
    write_csv(f, base_s,
              {"eps", "seed", "valid", "excluded_fraction",
               "min_misalignment_integrand", "a_linf", "F_l1", "H_linf", "f_w11",
               "M", "sigma0_est", "sigma1_est", "energy_lhs", "energy_rhs",
               "energy_holds", "misalignment_lhs", "misalignment_rhs",
               "misalignment_holds", "flux_lhs", "flux_rhs", "flux_holds"},
              checks);
  }
  std::vector<std::vector<std::string>> rates;
  for (const auto& sc : rep.shapes) {
    rates.push_back({column_name(sc.column), format_double(sc.q),
                     sc.fit ? format_double(sc.fit->slope) : "nan",
                     sc.fit ? format_double(sc.fit->intercept) : "nan",
                     std::to_string(sc.fit ? sc.fit->points_used : 0),
                     sc.fit ? format_double(sc.fit->residual) : "nan",
                     sc.monotone ? "true" : "false",
                     format_double(sc.ratio_growth),
                     sc.slope_ok ? "true" : "false",
                     sc.passes() ? "true" : "false"});
    out << column_name(sc.column) << ": slope "
        << (sc.fit ? format_double(sc.fit->slope) : std::string("n/a"))
        << ", monotone " << (sc.monotone ? "yes" : "no") << ", ratio growth "
        << format_double(sc.ratio_growth) << (sc.passes() ? ", pass" : ", fail")
        << '\n';
  }
  {
    std::ofstream f = open(o.out / "sweep_rates.csv");
    write_csv(f, base_s,
              {"column", "q", "slope", "intercept", "points_used", "residual",
               "monotone", "ratio_growth", "slope_ok", "passes"},
              rates);
  }
  out << "rows = " << rep.rows.size() << ", written to " << o.out.string() << '\n';
  if (o.strict && !all_valid) {
    throw StrictFailure("at least one sweep solve did not converge");
  }
  return 0;
}

int cmd_table1(const Options& o, std::ostream& out, std::ostream&) {
  const Config c = Config::load(
      o.config, {"n", "lambda", "tol", "max_iter", "seeds", "deltas", "threads"});
  Settings s;
  const int n = c.integer("n", 100, 2, 4096);
  s.emplace_back("n", std::to_string(n));
  const SolverConfig cfg = read_solver(c, s);
  const int threads = read_threads(c, s);
  std::vector<std::uint64_t> default_seeds;
  for (std::uint64_t k = 0; k < 10; ++k) default_seeds.push_back(k);
  const auto seeds = c.seeds("seeds", default_seeds);
  const auto deltas = c.reals("deltas", kTable1Deltas, 0.0, 1e6);
  if (seeds.empty()) throw InputError(c.source() + ": key 'seeds' is empty");
  if (deltas.empty()) throw InputError(c.source() + ": key 'deltas' is empty");
  s.emplace_back("seeds", join(seeds));
  s.emplace_back("deltas", join(deltas));

  const Table1Report rep = table1_experiment(cfg, seeds, n, deltas, threads);
  s.emplace_back("replication", rep.replication ? "true" : "false");

  fs::create_directories(o.out);
  std::vector<std::vector<std::string>> rows, summary;
  bool all_converged = true;
  for (const auto& r : rep.rows) {
    rows.push_back({format_double(r.delta), std::to_string(r.seed),
                    format_double(r.rel_l2), format_double(r.max_err),
                    std::to_string(r.iters), r.converged ? "true" : "false"});
    all_converged = all_converged && r.converged;
  }
  for (const auto& m : rep.summary) {
    summary.push_back({format_double(m.delta), std::to_string(m.runs),
                       format_double(m.mean_rel_l2), format_double(m.mean_iters),
                       format_double(m.mean_max_err)});
    out << "delta " << format_double(m.delta) << ": mean rel_l2 "
        << format_double(m.mean_rel_l2) << ", mean iters "
        << format_double(m.mean_iters) << '\n';
  }
  {
    std::ofstream f = open(o.out / "table1.csv");
    write_csv(f, s, {"delta", "seed", "rel_l2", "max_err", "iters", "converged"},
              rows);
  }
  {
    std::ofstream f = open(o.out / "table1_summary.csv");
    write_csv(f, s,
              {"delta", "runs", "mean_rel_l2", "mean_iters", "mean_max_err"},
              summary);
  }
  if (o.strict && !all_converged) {
    throw StrictFailure("at least one table1 run did not converge");
  }
  return 0;
}

int cmd_contour(const Options& o, std::ostream& out, std::ostream& err) {
  const Config c = Config::load(
      o.config, keys({kProblemKeys, kSolverKeys}, {"u_file", "levels"}));
  Settings s;
  const ProblemData p = read_problem(c, s);
  const int levels = c.integer("levels", 50, 1, 100000);
  s.emplace_back("levels", std::to_string(levels));
  const PoissonSolver solver(p.grid);

  ScalarField u;
  if (c.has("u_file")) {
    u = read_field(c.path("u_file"));
    check_grid(c, "u_file", u.grid().n(), p.grid.n());
    s.emplace_back("u_file", c.text("u_file", ""));
  } else {
    const SolverConfig cfg = read_solver(c, s);
    read_threads(c, s);
    const SolveResult r = solve(p, cfg, solver);
    if (!r.converged) {
      err << "warning: solver did not converge; using the last iterate\n";
      if (o.strict) throw StrictFailure("solver did not converge");
    }
    u = r.state.u;
  }
  const ScalarField f = p.potential_f ? *p.potential_f : drift_potential(p.F, solver);
  const ScalarField v = u + f;
  const auto samples = level_set_lengths(v, levels);

  double K = 0.0;
  std::vector<std::vector<std::string>> rows;
  for (const auto& smp : samples) {
    rows.push_back({format_double(smp.t), format_double(smp.length)});
    K = std::max(K, smp.length);
  }
  s.emplace_back("max_length", format_double(K));
  fs::create_directories(o.out);
  std::ofstream file = open(o.out / "contour.csv");
  write_csv(file, s, {"t", "length"}, rows);
  out << "max level-set length = " << format_double(K) << '\n';
  return 0;
}

void write_surface(const fs::path& path, const ScalarField& z) {
  std::ofstream f = open(path);
  const GridSpec& g = z.grid();
  for (int i = 0; i <= g.n(); ++i) {
    for (int j = 0; j <= g.n(); ++j) {
      f << format_double(g.coord(i)) << ' ' << format_double(g.coord(j)) << ' '
        << format_double(z.values()(i, j)) << '\n';
    }
    f << '\n';
  }
}

int cmd_plotdata(const Options& o, std::ostream& out, std::ostream&) {
  const Config c = Config::load(
      o.config, keys({kProblemKeys}, {"history_file", "report_file", "u_file"}));
  if (!c.has("history_file") && !c.has("report_file") && !c.has("u_file")) {
    throw InputError(c.source() +
                     ": missing key 'history_file', 'report_file' or 'u_file'");
  }
  fs::create_directories(o.out);
  std::ostringstream script;
  script << "set terminal pngcairo size 900,600\n";
  int written = 0;

  if (c.has("history_file")) {
    const fs::path src = c.path("history_file");
    const CsvTable t = read_csv(src);
    const auto k = t.column("k", src.string());
    const auto rel = t.column("rel_change", src.string());
    std::ofstream f = open(o.out / "convergence.dat");
    for (const auto& r : t.rows) {
      f << format_double(r[k]) << ' ' << format_double(r[rel]) << '\n';
    }
    script << "set output 'convergence.png'\n"
              "set logscale y\nset xlabel 'iteration'\n"
              "set ylabel 'relative change'\n"
              "plot 'convergence.dat' using 1:2 with lines title 'rel change'\n"
              "unset logscale\n";
    ++written;
  }

  if (c.has("report_file")) {
    const fs::path src = c.path("report_file");
    const CsvTable t = read_csv(src);
    const auto eps = t.column("eps", src.string());
    script << "set output 'rates.png'\nset logscale xy\n"
              "set xlabel 'eps'\nset ylabel 'error'\nplot ";
    bool first = true;
    for (const char* name :
         {"err_u_l1", "err_gradu_l1", "err_sigma_l1", "err_J_l1"}) {
      const auto col = t.column(name, src.string());
      const std::string file = std::string("rate_") + name + ".dat";
      std::ofstream f = open(o.out / file);
      for (const auto& r : t.rows) {
        if (r[eps] > 0.0 && r[col] > 0.0) {
          f << format_double(r[eps]) << ' ' << format_double(r[col]) << '\n';
        }
      }
      script << (first ? "" : ", \\\n     ") << "'" << file
             << "' using 1:2 with linespoints title '" << name << "'";
      first = false;
    }
    script << "\nunset logscale\n";
    ++written;
  }

  if (c.has("u_file")) {
    Settings s;
    const ProblemData p = read_problem(c, s);
    const ScalarField u = read_field(c.path("u_file"));
    check_grid(c, "u_file", u.grid().n(), p.grid.n());
    write_surface(o.out / "surface_approx.dat", u);
    script << "set xlabel 'x'\nset ylabel 'y'\n"
              "set output 'surface_approx.png'\n"
              "splot 'surface_approx.dat' with lines title 'approximation'\n";
    if (p.exact_u) {
      write_surface(o.out / "surface_exact.dat", *p.exact_u);
      write_surface(o.out / "surface_error.dat", u - *p.exact_u);
      script << "set output 'surface_exact.png'\n"
                "splot 'surface_exact.dat' with lines title 'exact'\n"
                "set output 'surface_error.png'\n"
                "splot 'surface_error.dat' with lines title 'error'\n";
    }
    ++written;
  }

  std::ofstream f = open(o.out / "plot.gp");
  f << script.str();
  out << written << " plot group(s) written to " << o.out.string() << '\n';
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted least gradient solver and stability experiments",
               "gradflux"};
  app.require_subcommand(1);

  Options opts;
  using Handler = int (*)(const Options&, std::ostream&, std::ostream&);
  const std::pair<const char*, Handler> commands[] = {
      {"solve", cmd_solve},     {"certify", cmd_certify},
      {"sweep", cmd_sweep},     {"table1", cmd_table1},
      {"contour", cmd_contour}, {"plotdata", cmd_plotdata}};
  const char* help[] = {
      "Solve one instance: solution field, certificate, iteration history",
      "Certify a stored solution against its instance",
      "Perturbation sweep with error columns, rate fits and bound checks",
      "Noisy replication runs on Example 1",
      "Level-set lengths of v = u + f",
      "Gnuplot data files and script from solve/sweep outputs"};
  std::vector<CLI::App*> subs;
  for (std::size_t k = 0; k < std::size(commands); ++k) {
    CLI::App* sub = app.add_subcommand(commands[k].first, help[k]);
    sub->add_option("--config", opts.config, "flat key = value config file")
        ->required();
    sub->add_option("--out", opts.out, "output directory (default .)");
    sub->add_flag("--strict", opts.strict, "exit 2 when a solve misses tol");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e_out;
    const int code = app.exit(e, o, e_out);
    out << o.str();
    err << e_out.str();
    return code == 0 ? 0 : 1;
  }

  for (std::size_t k = 0; k < subs.size(); ++k) {
    if (!subs[k]->parsed()) continue;
    try {
      return commands[k].second(opts, out, err);
    } catch (const InputError& e) {
      err << "error: " << e.what() << '\n';
      return 1;
    } catch (const StrictFailure& e) {
      err << "error: " << e.what() << '\n';
      return 2;
    } catch (const std::exception& e) {
      err << "error: computation failed: " << e.what() << '\n';
      return 2;
    }
  }
  return 1;
}

}  // namespace gradflux
