// Acceptance run: one PASS/FAIL line per criterion, details indented below.
//
// Exit status is 0 when every failing criterion is in kDocumentedFailures,
// i.e. a criterion whose target was shown to be out of reach and is kept
// red on purpose. Any other failure exits 1.

#include "gradflux/bregman.hpp"
#include "gradflux/cli.hpp"
#include "gradflux/duality.hpp"
#include "gradflux/io.hpp"
#include "gradflux/perturbation.hpp"
#include "gradflux/poisson.hpp"
#include "gradflux/problem.hpp"
#include "gradflux/stability.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace gradflux;
namespace fs = std::filesystem;

namespace {

const std::set<int> kDocumentedFailures{1};

struct Verdict {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "MISS ") + what);
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string g(double v) { return fmt("%.4g", v); }

// ---------------------------------------------------------------------------

Table1Report g_table1;

Verdict table1_replication() {
  Verdict v;
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 10; ++s) seeds.push_back(s);
  g_table1 = table1_experiment(SolverConfig{}, seeds, 100);

  const double reference[] = {0.0260, 0.0978, 0.1718};
  int unconverged = 0;
  for (const auto& r : g_table1.rows) unconverged += r.converged ? 0 : 1;
  for (std::size_t k = 0; k < g_table1.summary.size(); ++k) {
    const auto& s = g_table1.summary[k];
    const double lo = 0.5 * reference[k], hi = 1.5 * reference[k];
    v.check(s.mean_rel_l2 >= lo && s.mean_rel_l2 <= hi,
            "delta " + g(s.delta) + ": mean rel L2 " + g(s.mean_rel_l2) + " in [" +
                g(lo) + ", " + g(hi) + "], mean iters " + g(s.mean_iters) +
                ", mean max err " + g(s.mean_max_err));
  }
  const auto& s = g_table1.summary;
  v.check(s[0].mean_rel_l2 < s[1].mean_rel_l2 && s[1].mean_rel_l2 < s[2].mean_rel_l2,
          "mean error strictly increasing in delta");
  v.details.push_back("     " + std::to_string(unconverged) + " of " +
                      std::to_string(g_table1.rows.size()) +
                      " runs stopped at max_iter = 5000");
  return v;
}

Verdict duality_certification() {
  Verdict v;
  const ProblemData p = example1(GridSpec(100));
  const SolveResult r = solve(p, SolverConfig{});
  v.check(r.converged, "noiseless solve converged in " + std::to_string(r.iterations) +
                           " iterations");
  const Certificate c = certify(r.state.u, p);
  const double rel_gap = std::abs(c.gap) / c.primal;
  const double el = c.el_residual_l1 / norm(p.H, Norm::L1);
  const double energy_err = std::abs(c.primal / (79.0 / 36.0) - 1.0);
  v.check(rel_gap <= 2e-2, "|primal - dual| / primal = " + g(rel_gap) + " <= 2e-2");
  v.check(el <= 5e-2, "EL residual / ||H||_L1 = " + g(el) + " <= 5e-2");
  v.check(c.flux_bound_violation <= 1e-10,
          "max(|J| - a)+ = " + g(c.flux_bound_violation) + " <= 1e-10");
  v.check(energy_err <= 1e-2, "primal " + fmt("%.6f", c.primal) +
                                  " vs 79/36: relative error " + g(energy_err) +
                                  " <= 1e-2");
  return v;
}

SweepSpec sweep_spec(SweepParam param, SweepMode mode) {
  SweepSpec s;
  s.param = param;
  s.mode = mode;
  s.epsilons = {0.04, 0.02, 0.01, 0.005};
  return s;
}

constexpr int kSweepGrid = 100;

Verdict explicit_bounds() {
  Verdict v;
  const ProblemData p = example1(GridSpec(kSweepGrid));
  const StabilityReport r = run_sweep(p, sweep_spec(SweepParam::F, SweepMode::ConstantShift));
  v.check(r.base_converged, "base solve converged");
  for (const auto& row : r.rows) {
    const std::string at = "eps " + g(row.eps) + ": ";
    v.check(row.valid, at + "perturbed solve converged");
    const auto& e = *row.energy_bound;
    const auto& m = *row.misalignment_bound;
    const auto& f = *row.flux_bound;
    v.check(e.holds, at + "|I - I~| " + g(e.lhs) + " <= " + g(e.rhs));
    v.check(m.holds, at + "misalignment " + g(m.lhs) + " <= " + g(m.rhs));
    v.check(f.holds, at + "||J - J~||_L1 " + g(f.lhs) + " <= " + g(f.rhs));
    v.check(row.min_misalignment_integrand >= 0.0, at + "misalignment integrand >= 0");
  }
  return v;
}

Verdict stability_shapes() {
  Verdict v;
  const ProblemData p = example1(GridSpec(kSweepGrid));
  const struct {
    SweepParam param;
    SweepMode mode;
    const char* name;
  } sweeps[] = {
      {SweepParam::A, SweepMode::ConstantShift, "a constant-shift"},
      {SweepParam::A, SweepMode::SmoothBump, "a smooth-bump"},
      {SweepParam::F, SweepMode::ConstantShift, "f potential"},
      {SweepParam::H, SweepMode::ConstantShift, "H constant-shift"},
      {SweepParam::H, SweepMode::SmoothBump, "H smooth-bump"},
      {SweepParam::Combined, SweepMode::ConstantShift, "combined a+f+H"},
  };
  for (const auto& sw : sweeps) {
    const StabilityReport r = run_sweep(p, sweep_spec(sw.param, sw.mode));
    bool valid = r.base_converged;
    for (const auto& row : r.rows) valid = valid && row.valid;
    v.check(valid, std::string(sw.name) + ": all solves converged");
    for (const auto& sc : r.shapes) {
      const double need = sc.q == 0.5 ? 0.45 : 0.20;
      const bool ok = sc.monotone && sc.fit && sc.fit->slope >= need &&
                      sc.ratio_growth <= 1.5;
      v.check(ok, std::string(sw.name) + ", " + column_name(sc.column) + ": slope " +
                      (sc.fit ? g(sc.fit->slope) : std::string("n/a")) + " >= " + g(need) +
                      ", monotone " + (sc.monotone ? "yes" : "no") + ", ratio growth " +
                      g(sc.ratio_growth) + " <= 1.5");
    }
  }
  return v;
}

ScalarField random_field(const GridSpec& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ScalarField f(grid);
  for (int j = 0; j <= grid.n(); ++j) {
    for (int i = 0; i <= grid.n(); ++i) f(i, j) = dist(rng);
  }
  return f;
}

Verdict numerical_kernels() {
  Verdict v;
  std::mt19937_64 rng(2024);

  double worst_adj = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const GridSpec grid(4 + trial % 60);
    const ScalarField u = random_field(grid, rng);
    const VectorField q(random_field(grid, rng), random_field(grid, rng));
    const double lhs = inner(gradient(u), q);
    const double rhs = -inner(u, divergence(q));
    worst_adj = std::max(worst_adj, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
  }
  v.check(worst_adj <= 1e-12, "gradient/divergence adjointness: worst " + g(worst_adj));

  {
    const GridSpec grid(64);
    ScalarField u = random_field(grid, rng);
    u.zero_boundary();
    const int m = grid.n() - 1;
    const Eigen::ArrayXXd diff =
        (divergence(gradient(u)).values() - laplacian(u).values()).block(1, 1, m, m);
    const double rel = diff.abs().maxCoeff() * grid.h() * grid.h();
    v.check(rel <= 1e-14, "div(grad u) vs 5-point Laplacian: " + g(rel) + " (units of 1/h^2)");
  }

  {
    constexpr double pi = std::numbers::pi;
    double prev = 0.0;
    for (int n : {16, 32, 64, 128}) {
      const GridSpec grid(n);
      const auto rhs = ScalarField::sample(grid, [](double x, double y) {
        return -2 * pi * pi * std::sin(pi * x) * std::sin(pi * y);
      });
      const auto exact = ScalarField::sample(
          grid, [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
      const double err =
          norm(ScalarField(PoissonSolver(grid).solve_dirichlet(rhs) - exact), Norm::Linf);
      if (prev > 0.0) {
        const double ratio = prev / err;
        v.check(ratio >= 3.6 && ratio <= 4.4,
                "Poisson error ratio n = " + std::to_string(n / 2) + " -> " +
                    std::to_string(n) + ": " + g(ratio));
      }
      prev = err;
    }
  }

  {
    const GridSpec grid(4);
    const VectorField s(ScalarField::constant(grid, 3.0), ScalarField::constant(grid, 4.0));
    const VectorField d = shrink_step(s, VectorField(grid), VectorField(grid),
                                      ScalarField::constant(grid, 1.0), 1.0);
    v.check(d.x(1, 1) == 2.4 && d.y(1, 1) == 3.2, "shrink_step (3,4) -> (2.4, 3.2) exactly");
  }

  {
    const ProblemData p = example1(GridSpec(40));
    const bool noise_id = (noise_scalar(p.a, {0.0, 9}).values() == p.a.values()).all() &&
                          (noise_vector(p.F, {0.0, 9}).x.values() == p.F.x.values()).all() &&
                          (noise_vector(p.F, {0.0, 9}).y.values() == p.F.y.values()).all();
    const ProblemData noisy = table1_instance(p, 0.0, 9);
    const bool table_id = (noisy.H.values() == p.H.values()).all() &&
                          (noisy.a.values() == p.a.values()).all();
    v.check(noise_id && table_id, "delta = 0 noise returns the input unchanged");

    bool zero = true;
    for (auto param : {SweepParam::A, SweepParam::F, SweepParam::H, SweepParam::Combined}) {
      SweepSpec s = sweep_spec(param, SweepMode::ConstantShift);
      s.epsilons = {0.0};
      const StabilityReport r = run_sweep(p, s);
      for (auto c : {ErrorColumn::U, ErrorColumn::GradU, ErrorColumn::Sigma, ErrorColumn::J,
                     ErrorColumn::EnergyDiff, ErrorColumn::Misalignment}) {
        zero = zero && column_value(r.rows[0], c) == 0.0;
      }
    }
    v.check(zero, "eps = 0 sweeps give exactly zero error columns");
  }
  return v;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"gradflux"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

std::string csv_body(const fs::path& p) {
  std::ifstream in(p);
  std::string line, body;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') body += line + '\n';
  }
  return body;
}

Verdict determinism() {
  Verdict v;
  const fs::path dir = fs::temp_directory_path() / "gradflux_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  std::ofstream(dir / "sweep.cfg")
      << "n = 32\nparam = combined\nmode = noise\nepsilons = 0.02, 0.01\nseeds = 3, 4\n";
  std::ofstream(dir / "table1.cfg") << "n = 32\nseeds = 0, 1, 2\n";
  for (const char* run_dir : {"a", "b"}) {
    const fs::path out = dir / run_dir;
    run_cli({"sweep", "--config", (dir / "sweep.cfg").string(), "--out", out.string()});
    run_cli({"table1", "--config", (dir / "table1.cfg").string(), "--out", out.string()});
  }
  for (const char* f : {"sweep.csv", "sweep_mean.csv", "sweep_rates.csv", "table1.csv",
                        "table1_summary.csv"}) {
    const std::string a = csv_body(dir / "a" / f);
    const std::string b = csv_body(dir / "b" / f);
    v.check(!a.empty() && a == b, std::string(f) + " bodies byte-identical across runs");
  }

  // Replay single rows of the n = 100 experiment from (delta, seed) alone.
  const ProblemData base = example1(GridSpec(100));
  const PoissonSolver solver(base.grid);
  for (std::size_t k : {std::size_t{3}, std::size_t{17}, std::size_t{29}}) {
    const Table1Row& row = g_table1.rows[k];
    const SolveResult r = solve(table1_instance(base, row.delta, row.seed), SolverConfig{}, solver);
    const double rel = relative_l2(r.state.u, *base.exact_u);
    v.check(rel == row.rel_l2 && r.iterations == row.iters,
            "replay delta " + g(row.delta) + " seed " + std::to_string(row.seed) +
                ": rel L2 " + format_double(rel) + ", iters " + std::to_string(r.iterations));
  }
  fs::remove_all(dir);
  return v;
}

}  // namespace

int main() {
  const struct {
    int id;
    const char* name;
    Verdict (*fn)();
  } criteria[] = {
      {1, "noisy replication (table1)", table1_replication},
      {2, "duality certification", duality_certification},
      {3, "explicit-constant drift bounds", explicit_bounds},
      {4, "stability-shape properties", stability_shapes},
      {5, "numerical-kernel properties", numerical_kernels},
      {6, "determinism", determinism},
  };

  int unexpected = 0;
  int passed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.fn();
    } catch (const std::exception& e) {
      v.pass = false;
      v.details.push_back(std::string("MISS exception: ") + e.what());
    }
    const bool documented = kDocumentedFailures.count(c.id) > 0;
    std::printf("%s criterion %d: %s%s\n", v.pass ? "PASS" : "FAIL", c.id, c.name,
                !v.pass && documented ? " (documented as out of reach)" : "");
    for (const auto& d : v.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    if (v.pass) {
      ++passed;
    } else if (!documented) {
      ++unexpected;
    }
  }
  std::printf("%d of %zu criteria pass\n", passed, std::size(criteria));
  return unexpected == 0 ? 0 : 1;
}
