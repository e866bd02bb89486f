#include "gradflux/stability.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gradflux {

RateFit fit_rate(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) {
    throw std::invalid_argument("fit_rate needs at least 2 points");
  }
  const auto count = static_cast<Eigen::Index>(points.size());
  Eigen::ArrayXd x(count), y(count);
  for (Eigen::Index k = 0; k < count; ++k) {
    const auto [eps, e] = points[static_cast<std::size_t>(k)];
    if (!(eps > 0.0) || !(e > 0.0) || !std::isfinite(eps) || !std::isfinite(e)) {
      throw std::invalid_argument("fit_rate needs strictly positive values");
    }
    x(k) = std::log(eps);
    y(k) = std::log(e);
  }
  const Eigen::ArrayXd dx = x - x.mean();
  const double sxx = dx.square().sum();
  if (sxx == 0.0) {
    throw std::invalid_argument("fit_rate needs at least 2 distinct eps values");
  }
  RateFit fit;
  fit.slope = (dx * (y - y.mean())).sum() / sxx;
  fit.intercept = y.mean() - fit.slope * x.mean();
  fit.points_used = static_cast<int>(count);
  fit.residual = (y - (fit.intercept + fit.slope * x)).square().sum();
  return fit;
}

// ---------------------------------------------------------------------------

double level_set_length(const ScalarField& v, double t) {
  const auto& val = v.values();
  if (!(t >= val.minCoeff() && t <= val.maxCoeff())) return 0.0;

  const int n = v.grid().n();
  const double h = v.grid().h();
  struct Point {
    double x, y;
  };
  auto cut = [t](double a, double b) { return (t - a) / (b - a); };
  auto seg = [h](Point p, Point q) { return h * std::hypot(p.x - q.x, p.y - q.y); };

  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      // Corners in cell-local units: 00 (0,0), 10 (1,0), 11 (1,1), 01 (0,1).
      const double v00 = val(i, j), v10 = val(i + 1, j);
      const double v11 = val(i + 1, j + 1), v01 = val(i, j + 1);
      const bool in00 = v00 >= t, in10 = v10 >= t;
      const bool in11 = v11 >= t, in01 = v01 >= t;

      std::optional<Point> bottom, right, top, left;
      if (in00 != in10) bottom = Point{cut(v00, v10), 0.0};
      if (in10 != in11) right = Point{1.0, cut(v10, v11)};
      if (in01 != in11) top = Point{cut(v01, v11), 1.0};
      if (in00 != in01) left = Point{0.0, cut(v00, v01)};

      const int crossings = bottom.has_value() + right.has_value() +
                            top.has_value() + left.has_value();
      if (crossings == 2) {
        Point pts[2];
        int k = 0;
        for (const auto& p : {bottom, right, top, left}) {
          if (p) pts[k++] = *p;
        }
        total += seg(pts[0], pts[1]);
      } else if (crossings == 4) {
        // Saddle: cut off the pair of corners whose class differs from the
        // cell-center average.
        const bool center_in = 0.25 * (v00 + v10 + v11 + v01) >= t;
        if (center_in == in00) {
          total += seg(*bottom, *right) + seg(*top, *left);
        } else {
          total += seg(*bottom, *left) + seg(*right, *top);
        }
      }
    }
  }
  return total;
}

std::vector<LevelSetSample> level_set_lengths(const ScalarField& v,
                                              int samples) {
  if (samples < 1) throw std::invalid_argument("need at least one level");
  const double lo = v.values().minCoeff();
  const double hi = v.values().maxCoeff();
  std::vector<LevelSetSample> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const double t = lo + (hi - lo) * (k + 1) / (samples + 1.0);
    out.push_back({t, level_set_length(v, t)});
  }
  return out;
}

double max_level_set_length(const ScalarField& v, int samples) {
  double best = 0.0;
  for (const auto& s : level_set_lengths(v, samples)) {
    best = std::max(best, s.length);
  }
  return best;
}

ScalarField drift_potential(const VectorField& F, const PoissonSolver& solver) {
  return solver.solve_dirichlet(divergence(F));
}

// ---------------------------------------------------------------------------

void SweepSpec::check() const {
  solver.check();
  if (epsilons.empty()) throw std::invalid_argument("sweep needs at least one eps");
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (!(epsilons[k] >= 0.0) || !std::isfinite(epsilons[k])) {
      throw std::invalid_argument("sweep eps values must be finite and >= 0");
    }
    if (k > 0 && !(epsilons[k] < epsilons[k - 1])) {
      throw std::invalid_argument("sweep eps values must be strictly decreasing");
    }
  }
  if (seeds.empty()) throw std::invalid_argument("sweep needs at least one seed");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (!(slack >= 0.0)) throw std::invalid_argument("slack must be >= 0");
}

const char* column_name(ErrorColumn c) {
  switch (c) {
    case ErrorColumn::U: return "err_u_l1";
    case ErrorColumn::GradU: return "err_gradu_l1";
    case ErrorColumn::Sigma: return "err_sigma_l1";
    case ErrorColumn::J: return "err_J_l1";
    case ErrorColumn::EnergyDiff: return "energy_diff";
    case ErrorColumn::Misalignment: return "misalignment";
  }
  return "?";
}

double column_value(const SweepRow& row, ErrorColumn c) {
  switch (c) {
    case ErrorColumn::U: return row.err_u_l1;
    case ErrorColumn::GradU: return row.err_gradu_l1;
    case ErrorColumn::Sigma: return row.err_sigma_l1;
    case ErrorColumn::J: return row.err_J_l1;
    case ErrorColumn::EnergyDiff: return row.energy_diff;
    case ErrorColumn::Misalignment: return row.misalignment;
  }
  return 0.0;
}

namespace {

ScalarField perturb_scalar(const ScalarField& s, SweepMode mode, double eps,
                           std::uint64_t seed) {
  if (mode == SweepMode::Noise) return noise_scalar(s, {eps, seed});
  return perturb_weight(s, eps,
                        mode == SweepMode::ConstantShift ? WeightMode::ConstantShift
                                                         : WeightMode::SmoothBump)
      .field;
}

void perturb_drift_of(PerturbedProblem& pp, const SweepSpec& spec, double eps,
                      std::uint64_t seed) {
  ProblemData& q = pp.perturbed;
  if (spec.mode == SweepMode::Noise) {
    q.F = noise_vector(pp.base.F, {eps, derive_seed(seed, 2)});
    q.potential_f.reset();
    return;
  }
  if (pp.base.potential_f) {
    auto moved = perturb_potential(*pp.base.potential_f, eps, spec.profile);
    q.potential_f = std::move(moved.f);
    q.F = std::move(moved.F);
  } else {
    q.F = perturb_drift(pp.base.F, eps, spec.profile);
  }
  pp.potential_change = potential_increment(pp.base.grid, eps, spec.profile);
}

}  // namespace

PerturbedProblem build_perturbed(const ProblemData& base, const SweepSpec& spec,
                                 double eps, std::uint64_t seed) {
  PerturbedProblem pp;
  pp.base = base;
  pp.perturbed = base;
  ProblemData& q = pp.perturbed;
  const bool all = spec.param == SweepParam::Combined;
  if (all || spec.param == SweepParam::A) {
    q.a = perturb_scalar(base.a, spec.mode, eps, derive_seed(seed, 1));
    pp.applied.insert(Param::A);
  }
  if (all || spec.param == SweepParam::H) {
    q.H = perturb_scalar(base.H, spec.mode, eps, derive_seed(seed, 0));
    pp.applied.insert(Param::H);
  }
  if (all || spec.param == SweepParam::F) {
    perturb_drift_of(pp, spec, eps, seed);
    pp.applied.insert(Param::F);
  }
  q.m = q.a.values().minCoeff();
  q.M = q.a.values().maxCoeff();
  q.exact_u.reset();
  q.tag = base.tag + "-perturbed";
  measure_sizes(pp);
  return pp;
}

SweepRow compare_solutions(const ProblemData& base, const ScalarField& u,
                           const ProblemData& perturbed,
                           const ScalarField& u_tilde, double eta) {
  const GridSpec& g = base.grid;
  const int n = g.n();
  const double w = g.h() * g.h();
  const FluxPair fp = flux(u, base, eta);
  const FluxPair fpt = flux(u_tilde, perturbed, eta);

  const auto joint = (fp.mask && fpt.mask).topLeftCorner(n, n).eval();
  const VectorField du = gradient(u) - gradient(u_tilde);
  const Eigen::ArrayXXd du_mag = du.magnitude().values().topLeftCorner(n, n);
  const Eigen::ArrayXXd dsigma =
      (fp.sigma.values() - fpt.sigma.values()).abs().topLeftCorner(n, n);

  SweepRow row;
  row.err_u_l1 = norm(ScalarField(u - u_tilde), Norm::L1);
  row.err_gradu_l1 = w * joint.select(du_mag, 0.0).sum();
  row.err_sigma_l1 = w * joint.select(dsigma, 0.0).sum();
  row.err_J_l1 = norm(VectorField(fp.J - fpt.J), Norm::L1);
  row.energy_diff =
      std::abs(primal_energy(u, base) - primal_energy(u_tilde, perturbed));

  // |J||J~| - J.J~ written as |J||J~| |e - e~|^2 / 2 with unit directions
  // e, e~: no cancellation, and exactly 0 where the fluxes coincide.
  const Eigen::ArrayXXd mag = fp.J.magnitude().values();
  const Eigen::ArrayXXd mag_t = fpt.J.magnitude().values();
  const Eigen::ArrayXXd ex = fp.J.x.values() / mag.max(1e-300);
  const Eigen::ArrayXXd ey = fp.J.y.values() / mag.max(1e-300);
  const Eigen::ArrayXXd etx = fpt.J.x.values() / mag_t.max(1e-300);
  const Eigen::ArrayXXd ety = fpt.J.y.values() / mag_t.max(1e-300);
  const Eigen::ArrayXXd integrand =
      (0.5 * mag * mag_t * ((ex - etx).square() + (ey - ety).square()))
          .topLeftCorner(n, n);
  row.misalignment = w * integrand.sum();
  row.min_misalignment_integrand = integrand.minCoeff();

  const double base_l2 = norm(u, Norm::L2);
  row.rel_l2 = base_l2 > 0.0 ? norm(ScalarField(u - u_tilde), Norm::L2) / base_l2
                             : 0.0;
  row.excluded_fraction =
      1.0 - static_cast<double>(joint.count()) / static_cast<double>(joint.size());

  row.M = std::max(base.a.values().maxCoeff(), perturbed.a.values().maxCoeff());
  double s0 = std::numeric_limits<double>::infinity();
  double s1 = 0.0;
  for (const FluxPair* f : {&fp, &fpt}) {
    const auto mask = f->mask.topLeftCorner(n, n);
    const auto sig = f->sigma.values().topLeftCorner(n, n);
    if (mask.any()) {
      s0 = std::min(s0, mask.select(sig, std::numeric_limits<double>::infinity())
                            .minCoeff());
      s1 = std::max(s1, mask.select(sig, 0.0).maxCoeff());
    }
  }
  row.sigma0_est = std::isfinite(s0) ? s0 : 0.0;
  row.sigma1_est = s1;
  return row;
}

std::vector<ShapeCheck> shape_checks(const std::vector<SweepRow>& averaged) {
  std::vector<SweepRow> rows;
  for (const auto& r : averaged) {
    if (r.valid && r.eps > 0.0) rows.push_back(r);
  }
  std::sort(rows.begin(), rows.end(),
            [](const SweepRow& a, const SweepRow& b) { return a.eps > b.eps; });

  std::vector<ShapeCheck> out;
  const std::pair<ErrorColumn, double> targets[] = {
      {ErrorColumn::U, 0.5},
      {ErrorColumn::J, 0.5},
      {ErrorColumn::GradU, 0.25},
      {ErrorColumn::Sigma, 0.25}};
  for (const auto& [column, q] : targets) {
    ShapeCheck check;
    check.column = column;
    check.q = q;

    std::vector<std::pair<double, double>> points;
    for (const auto& r : rows) {
      const double e = column_value(r, column);
      if (e > 0.0) points.emplace_back(r.eps, e);
    }
    if (points.size() >= 2) {
      try {
        check.fit = fit_rate(points);
      } catch (const std::invalid_argument&) {
        check.fit.reset();
      }
    }
    check.slope_ok = check.fit && check.fit->slope >= q - 0.05;

    check.monotone = !rows.empty();
    for (std::size_t k = 1; k < rows.size(); ++k) {
      if (column_value(rows[k], column) > column_value(rows[k - 1], column)) {
        check.monotone = false;
      }
    }

    if (!rows.empty()) {
      const double first = column_value(rows.front(), column) /
                           std::pow(rows.front().eps, q);
      double worst = first;
      for (const auto& r : rows) {
        worst = std::max(worst, column_value(r, column) / std::pow(r.eps, q));
      }
      check.ratio_growth = first > 0.0 ? worst / first
                           : worst > 0.0 ? std::numeric_limits<double>::infinity()
                                         : 1.0;
    } else {
      check.ratio_growth = std::numeric_limits<double>::infinity();
    }
    out.push_back(check);
  }
  return out;
}

namespace {

void attach_bounds(SweepRow& row, double slack, double area) {
  const double grow = 1.0 + slack;
  const double M = row.M;
  const double s1 = row.sigma1_est;
  row.energy_bound = BoundCheck{row.energy_diff, M * row.F_l1 * grow, false};
  row.misalignment_bound =
      BoundCheck{row.misalignment, 2.0 * M * s1 * row.F_l1 * grow, false};
  row.flux_bound = BoundCheck{
      row.err_J_l1, std::sqrt(4.0 * M * s1 * area) * std::sqrt(row.F_l1) * grow,
      false};
  for (auto* b : {&*row.energy_bound, &*row.misalignment_bound, &*row.flux_bound}) {
    b->holds = b->lhs <= b->rhs;
  }
}

SweepRow mean_of(const std::vector<const SweepRow*>& rows) {
  SweepRow out = *rows.front();
  if (rows.size() == 1) return out;
  const double k = static_cast<double>(rows.size());
  auto avg = [&](double SweepRow::*field) {
    double s = 0.0;
    for (const auto* r : rows) s += r->*field;
    out.*field = s / k;
  };
  for (auto field :
       {&SweepRow::err_u_l1, &SweepRow::err_gradu_l1, &SweepRow::err_sigma_l1,
        &SweepRow::err_J_l1, &SweepRow::energy_diff, &SweepRow::misalignment,
        &SweepRow::rel_l2, &SweepRow::excluded_fraction, &SweepRow::a_linf,
        &SweepRow::F_l1, &SweepRow::H_linf, &SweepRow::f_w11}) {
    avg(field);
  }
  double iters = 0.0;
  for (const auto* r : rows) iters += r->iters;
  out.iters = static_cast<int>(std::lround(iters / k));
  out.seed = 0;
  out.energy_bound.reset();
  out.misalignment_bound.reset();
  out.flux_bound.reset();
  return out;
}

}  // namespace

StabilityReport run_sweep(const ProblemData& p, const SweepSpec& spec) {
  spec.check();
  const PoissonSolver solver(p.grid);

  StabilityReport report;
  report.param = spec.param;
  report.mode = spec.mode;
  report.profile = spec.profile;

  const SolveResult base = solve(p, spec.solver, solver);
  report.base_iterations = base.iterations;
  report.base_converged = base.converged;

  const std::vector<std::uint64_t> seeds =
      spec.mode == SweepMode::Noise ? spec.seeds
                                    : std::vector<std::uint64_t>{spec.seeds.front()};
  const std::size_t per_eps = seeds.size();
  report.rows.resize(spec.epsilons.size() * per_eps);

  detail::parallel_for(report.rows.size(), spec.threads, [&](std::size_t job) {
    const double eps = spec.epsilons[job / per_eps];
    const std::uint64_t seed = seeds[job % per_eps];
    const PerturbedProblem pp = build_perturbed(p, spec, eps, seed);
    const SolveResult tilde = solve(pp.perturbed, spec.solver, solver);

    SweepRow row =
        compare_solutions(p, base.state.u, pp.perturbed, tilde.state.u, spec.eta);
    row.eps = eps;
    row.seed = seed;
    row.valid = base.converged && tilde.converged;
    row.iters = tilde.iterations;
    row.a_linf = pp.a_linf;
    row.F_l1 = pp.F_l1;
    row.H_linf = pp.H_linf;
    row.f_w11 = pp.f_w11.value_or(0.0);
    if (spec.param == SweepParam::F) {
      attach_bounds(row, spec.slack, p.grid.area());
    }
    report.rows[job] = std::move(row);
  });

  for (std::size_t e = 0; e < spec.epsilons.size(); ++e) {
    std::vector<const SweepRow*> valid;
    for (std::size_t s = 0; s < per_eps; ++s) {
      const SweepRow& r = report.rows[e * per_eps + s];
      if (r.valid) valid.push_back(&r);
    }
    if (valid.empty()) {
      SweepRow invalid = report.rows[e * per_eps];
      invalid.valid = false;
      report.averaged.push_back(invalid);
    } else {
      report.averaged.push_back(mean_of(valid));
    }
  }
  report.shapes = shape_checks(report.averaged);
  return report;
}

// ---------------------------------------------------------------------------

ProblemData table1_instance(const ProblemData& base, double delta,
                            std::uint64_t seed) {
  ProblemData q = base;
  q.H = noise_scalar(base.H, {delta, derive_seed(seed, 0)});
  q.a = noise_scalar(base.a, {delta, derive_seed(seed, 1)});
  q.F = noise_vector(base.F, {delta, derive_seed(seed, 2)});
  q.m = q.a.values().minCoeff();
  q.M = q.a.values().maxCoeff();
  q.tag = base.tag + "-noisy";
  return q;
}

Table1Report table1_experiment(const SolverConfig& cfg,
                               const std::vector<std::uint64_t>& seeds, int n,
                               const std::vector<double>& deltas, int threads) {
  cfg.check();
  if (seeds.empty()) throw std::invalid_argument("table1 needs at least one seed");
  if (deltas.empty()) throw std::invalid_argument("table1 needs at least one delta");
  for (double d : deltas) {
    if (!(d >= 0.0)) throw std::invalid_argument("noise levels must be >= 0");
  }

  const GridSpec grid(n);
  const ProblemData base = example1(grid);
  const PoissonSolver solver(grid);
  const ScalarField& exact = *base.exact_u;

  Table1Report report;
  report.n = n;
  report.replication = n == 100;
  report.rows.resize(deltas.size() * seeds.size());

  detail::parallel_for(report.rows.size(), threads, [&](std::size_t job) {
    const double delta = deltas[job / seeds.size()];
    const std::uint64_t seed = seeds[job % seeds.size()];
    const ProblemData noisy = table1_instance(base, delta, seed);
    const SolveResult r = solve(noisy, cfg, solver);
    Table1Row row;
    row.delta = delta;
    row.seed = seed;
    row.rel_l2 = relative_l2(r.state.u, exact);
    row.max_err = norm(ScalarField(r.state.u - exact), Norm::Linf);
    row.iters = r.iterations;
    row.converged = r.converged;
    report.rows[job] = row;
  });

  for (std::size_t d = 0; d < deltas.size(); ++d) {
    Table1Summary s;
    s.delta = deltas[d];
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      const Table1Row& r = report.rows[d * seeds.size() + k];
      s.mean_rel_l2 += r.rel_l2;
      s.mean_iters += r.iters;
      s.mean_max_err += r.max_err;
      ++s.runs;
    }
    s.mean_rel_l2 /= s.runs;
    s.mean_iters /= s.runs;
    s.mean_max_err /= s.runs;
    report.summary.push_back(s);
  }
  return report;
}

}  // namespace gradflux
