#include "gradflux/stability.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace gradflux;

TEST(FitRate, ExactPowerLaw) {
  const RateFit f = fit_rate({{1, 2}, {4, 4}});
  EXPECT_NEAR(f.slope, 0.5, 1e-14);
  EXPECT_EQ(f.points_used, 2);
}

TEST(FitRate, ConstantData) {
  EXPECT_NEAR(fit_rate({{1, 3}, {2, 3}, {4, 3}}).slope, 0.0, 1e-14);
}

TEST(FitRate, ExactQuadratic) {
  const RateFit f = fit_rate({{1, 1}, {2, 4}, {4, 16}});
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.residual, 0.0, 1e-24);
  EXPECT_NEAR(f.intercept, 0.0, 1e-14);
}

TEST(FitRate, RejectsBadInput) {
  EXPECT_THROW(fit_rate({{1, 1}}), std::invalid_argument);
  EXPECT_THROW(fit_rate({{1, 1}, {2, 0}}), std::invalid_argument);
  EXPECT_THROW(fit_rate({{-1, 1}, {2, 1}}), std::invalid_argument);
  EXPECT_THROW(fit_rate({{2, 1}, {2, 3}}), std::invalid_argument);
}

TEST(FitRate, ResidualIsMinimal) {
  const std::vector<std::pair<double, double>> pts{{1, 1.1}, {2, 1.9}, {4, 4.3}, {8, 7.7}};
  const RateFit f = fit_rate(pts);
  for (double ds : {-1e-3, 1e-3}) {
    double r = 0.0;
    for (auto [x, y] : pts) {
      const double e = std::log(y) - (f.intercept + (f.slope + ds) * std::log(x));
      r += e * e;
    }
    EXPECT_GT(r, f.residual);
  }
}

TEST(LevelSet, VerticalLine) {
  const auto v = ScalarField::sample(GridSpec(40), [](double x, double) { return x; });
  EXPECT_NEAR(level_set_length(v, 0.5), 1.0, 1e-6);
  EXPECT_NEAR(level_set_length(v, 0.31), 1.0, 1e-6);
}

TEST(LevelSet, Circle) {
  const auto v = ScalarField::sample(GridSpec(100), [](double x, double y) {
    return (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
  });
  const double exact = 2 * std::numbers::pi * 0.2;
  EXPECT_NEAR(level_set_length(v, 0.04) / exact, 1.0, 0.02);
}

TEST(LevelSet, EmptyOutsideRange) {
  const auto v = ScalarField::sample(GridSpec(10), [](double x, double y) { return x * y; });
  EXPECT_EQ(level_set_length(v, 2.0), 0.0);
  EXPECT_EQ(level_set_length(v, -1.0), 0.0);
}

TEST(LevelSet, SaddleCellCountsTwoSegments) {
  ScalarField v(GridSpec(2));
  v(0, 0) = 1; v(1, 0) = 0; v(1, 1) = 1; v(0, 1) = 0;
  v(2, 0) = 0; v(2, 1) = 0; v(2, 2) = 0; v(1, 2) = 0; v(0, 2) = 0;
  // In the lower-left cell the contour t = 0.5 cuts all four edges at their
  // midpoints: two segments of length h / sqrt(2) each.
  const double h = 0.5;
  const double in_saddle = 2 * h / std::sqrt(2.0);
  EXPECT_GT(level_set_length(v, 0.5), in_saddle - 1e-12);
}

TEST(LevelSet, SampledLevelsInsideRange) {
  const auto v = ScalarField::sample(GridSpec(20), [](double x, double) { return x; });
  const auto samples = level_set_lengths(v, 9);
  ASSERT_EQ(samples.size(), 9u);
  EXPECT_NEAR(samples.front().t, 0.1, 1e-12);
  EXPECT_NEAR(samples.back().t, 0.9, 1e-12);
  EXPECT_NEAR(max_level_set_length(v, 9), 1.0, 1e-9);
}

TEST(LevelSet, Example1LengthStableUnderRefinement) {
  double K[2];
  int k = 0;
  for (int n : {50, 100}) {
    const ProblemData p = example1(GridSpec(n));
    const ScalarField f = drift_potential(p.F, PoissonSolver(p.grid));
    K[k++] = max_level_set_length(ScalarField(*p.exact_u + f), 50);
  }
  EXPECT_TRUE(std::isfinite(K[0]));
  EXPECT_NEAR(K[0] / K[1], 1.0, 0.1);
}

TEST(DriftPotential, RecoversGradientPart) {
  const GridSpec g(32);
  auto f = ScalarField::sample(g, [](double x, double y) {
    return std::sin(std::numbers::pi * x) * y * (1 - y);
  });
  f.zero_boundary();
  const ScalarField back = drift_potential(gradient(f), PoissonSolver(g));
  EXPECT_LE(norm(ScalarField(back - f), Norm::Linf), 1e-12);
}

namespace {

SweepSpec quick_spec(SweepParam param) {
  SweepSpec s;
  s.param = param;
  s.epsilons = {0.04, 0.02, 0.01, 0.005};
  s.threads = 2;
  return s;
}

}  // namespace

TEST(Sweep, ZeroEpsilonGivesExactZeros) {
  const ProblemData p = example1(GridSpec(16));
  for (auto param : {SweepParam::A, SweepParam::F, SweepParam::H, SweepParam::Combined}) {
    SweepSpec s = quick_spec(param);
    s.epsilons = {0.0};
    const StabilityReport r = run_sweep(p, s);
    ASSERT_EQ(r.rows.size(), 1u);
    for (auto c : {ErrorColumn::U, ErrorColumn::GradU, ErrorColumn::Sigma, ErrorColumn::J,
                   ErrorColumn::EnergyDiff, ErrorColumn::Misalignment}) {
      EXPECT_EQ(column_value(r.rows[0], c), 0.0) << column_name(c);
    }
    for (const auto& sc : r.shapes) EXPECT_FALSE(sc.fit.has_value());
  }
}

TEST(Sweep, WeightShiftDecaysAtLeastAtHalfRate) {
  const ProblemData p = example1(GridSpec(24));
  const StabilityReport r = run_sweep(p, quick_spec(SweepParam::A));
  ASSERT_TRUE(r.base_converged);
  for (std::size_t k = 1; k < r.rows.size(); ++k) {
    EXPECT_LT(r.rows[k].err_u_l1, r.rows[k - 1].err_u_l1);
  }
  for (const auto& sc : r.shapes) {
    EXPECT_TRUE(sc.passes()) << column_name(sc.column);
  }
  EXPECT_GE(r.shapes[0].fit->slope, 0.45);
}

TEST(Sweep, DriftBoundsHoldOnEveryRow) {
  const ProblemData p = example1(GridSpec(24));
  const StabilityReport r = run_sweep(p, quick_spec(SweepParam::F));
  for (const auto& row : r.rows) {
    ASSERT_TRUE(row.energy_bound && row.misalignment_bound && row.flux_bound);
    EXPECT_TRUE(row.energy_bound->holds);
    EXPECT_TRUE(row.misalignment_bound->holds);
    EXPECT_TRUE(row.flux_bound->holds);
    EXPECT_GE(row.min_misalignment_integrand, -1e-12);
    EXPECT_GT(row.F_l1, 0.0);
    EXPECT_GT(row.f_w11, 0.0);
  }
}

TEST(Sweep, BoundsOnlyForDriftSweeps) {
  const ProblemData p = example1(GridSpec(12));
  SweepSpec s = quick_spec(SweepParam::H);
  s.epsilons = {0.02};
  const StabilityReport r = run_sweep(p, s);
  EXPECT_FALSE(r.rows[0].energy_bound.has_value());
  EXPECT_NEAR(r.rows[0].H_linf, 0.02, 1e-15);
}

TEST(Sweep, InteriorBumpPotentialIsAGaugeShift) {
  const ProblemData p = example1(GridSpec(20));
  SweepSpec s = quick_spec(SweepParam::F);
  s.profile = PotentialProfile::InteriorBump;
  s.epsilons = {0.02};
  s.solver.tol = 1e-10;
  s.solver.max_iter = 100000;
  const StabilityReport r = run_sweep(p, s);
  EXPECT_LE(r.rows[0].err_J_l1, 1e-5);
  EXPECT_NEAR(r.rows[0].err_u_l1,
              norm(potential_increment(p.grid, 0.02, s.profile), Norm::L1), 1e-5);
}

TEST(Sweep, ResultIndependentOfThreadCount) {
  const ProblemData p = example1(GridSpec(12));
  SweepSpec s = quick_spec(SweepParam::Combined);
  s.mode = SweepMode::Noise;
  s.seeds = {1, 2, 3};
  s.epsilons = {0.02, 0.01};
  s.threads = 1;
  const StabilityReport serial = run_sweep(p, s);
  s.threads = 4;
  const StabilityReport parallel = run_sweep(p, s);
  ASSERT_EQ(serial.rows.size(), 6u);
  for (std::size_t k = 0; k < serial.rows.size(); ++k) {
    EXPECT_EQ(serial.rows[k].eps, parallel.rows[k].eps);
    EXPECT_EQ(serial.rows[k].seed, parallel.rows[k].seed);
    EXPECT_EQ(serial.rows[k].err_u_l1, parallel.rows[k].err_u_l1);
    EXPECT_EQ(serial.rows[k].err_J_l1, parallel.rows[k].err_J_l1);
  }
  ASSERT_EQ(serial.averaged.size(), 2u);
  const double mean = (serial.rows[0].err_u_l1 + serial.rows[1].err_u_l1 +
                       serial.rows[2].err_u_l1) / 3.0;
  EXPECT_NEAR(serial.averaged[0].err_u_l1, mean, 1e-15);
}

TEST(Sweep, NonConvergedRowsAreInvalid) {
  const ProblemData p = example1(GridSpec(12));
  SweepSpec s = quick_spec(SweepParam::A);
  s.solver.max_iter = 3;
  const StabilityReport r = run_sweep(p, s);
  EXPECT_FALSE(r.base_converged);
  for (const auto& row : r.rows) EXPECT_FALSE(row.valid);
  for (const auto& sc : r.shapes) {
    EXPECT_FALSE(sc.fit.has_value());
    EXPECT_FALSE(sc.passes());
  }
}

TEST(Sweep, SpecValidation) {
  SweepSpec s;
  EXPECT_THROW(s.check(), std::invalid_argument);
  s.epsilons = {0.01, 0.02};
  EXPECT_THROW(s.check(), std::invalid_argument);
  s.epsilons = {0.02, -0.01};
  EXPECT_THROW(s.check(), std::invalid_argument);
  s.epsilons = {0.02, 0.01};
  EXPECT_NO_THROW(s.check());
  s.seeds.clear();
  EXPECT_THROW(s.check(), std::invalid_argument);
}

TEST(ShapeChecks, SyntheticColumns) {
  std::vector<SweepRow> rows;
  for (double eps : {0.04, 0.02, 0.01, 0.005}) {
    SweepRow r;
    r.eps = eps;
    r.err_u_l1 = 3 * eps;                 // faster than the bound
    r.err_J_l1 = 0.1 * std::pow(eps, 0.3);  // slower than the bound
    r.err_gradu_l1 = std::pow(eps, 0.25);
    r.err_sigma_l1 = 0.0;
    rows.push_back(r);
  }
  const auto checks = shape_checks(rows);
  ASSERT_EQ(checks.size(), 4u);
  EXPECT_TRUE(checks[0].passes());
  EXPECT_NEAR(checks[0].fit->slope, 1.0, 1e-12);
  EXPECT_FALSE(checks[1].passes());
  EXPECT_GT(checks[1].ratio_growth, 1.5);
  EXPECT_TRUE(checks[2].passes());
  EXPECT_NEAR(checks[2].ratio_growth, 1.0, 1e-12);
  EXPECT_FALSE(checks[3].fit.has_value());
}

TEST(Table1, InstanceIsReproducible) {
  const ProblemData base = example1(GridSpec(20));
  const ProblemData a = table1_instance(base, 0.035, 4);
  const ProblemData b = table1_instance(base, 0.035, 4);
  EXPECT_TRUE((a.a.values() == b.a.values()).all());
  EXPECT_TRUE((a.F.x.values() == b.F.x.values()).all());
  EXPECT_TRUE((a.H.values() == b.H.values()).all());
  EXPECT_NEAR(frobenius(ScalarField(a.H - base.H)) / frobenius(base.H), 0.035, 1e-13);
  EXPECT_TRUE(a.exact_u.has_value());
}

TEST(Table1, SmallGridExperiment) {
  SolverConfig cfg;
  cfg.max_iter = 3000;
  const Table1Report r = table1_experiment(cfg, {0, 1}, 16);
  EXPECT_FALSE(r.replication);
  ASSERT_EQ(r.rows.size(), 6u);
  ASSERT_EQ(r.summary.size(), 3u);
  EXPECT_EQ(r.rows[1].delta, 0.01);
  EXPECT_EQ(r.rows[1].seed, 1u);
  EXPECT_LT(r.summary[0].mean_rel_l2, r.summary[1].mean_rel_l2);
  EXPECT_LT(r.summary[1].mean_rel_l2, r.summary[2].mean_rel_l2);
  EXPECT_NEAR(r.summary[2].mean_rel_l2, 0.5 * (r.rows[4].rel_l2 + r.rows[5].rel_l2), 1e-15);

  // Any single row replays from (delta, seed) alone.
  const ProblemData base = example1(GridSpec(16));
  const SolveResult one = solve(table1_instance(base, 0.035, 1), cfg);
  EXPECT_EQ(relative_l2(one.state.u, *base.exact_u), r.rows[3].rel_l2);
  EXPECT_EQ(one.iterations, r.rows[3].iters);
}
