#pragma once

#include "gradflux/bregman.hpp"
#include "gradflux/duality.hpp"
#include "gradflux/perturbation.hpp"
#include "gradflux/problem.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gradflux {

// ---------------------------------------------------------------------------
// Rate fitting

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points_used = 0;
  double residual = 0.0;  // sum of squared log residuals
};

/// Ordinary least squares of log(e) on log(eps). Needs >= 2 points, all
/// coordinates strictly positive; throws std::invalid_argument otherwise.
RateFit fit_rate(const std::vector<std::pair<double, double>>& points);

// ---------------------------------------------------------------------------
// Level sets

/// Total length of the marching-squares polyline of {v = t}. Nodes with
/// v >= t count as inside. Returns 0 when t lies outside [min v, max v].
double level_set_length(const ScalarField& v, double t);

struct LevelSetSample {
  double t = 0.0;
  double length = 0.0;
};

/// Lengths at `samples` levels spread evenly over the open range (min v, max v).
std::vector<LevelSetSample> level_set_lengths(const ScalarField& v,
                                              int samples);

/// Empirical K = max length over the sampled levels.
double max_level_set_length(const ScalarField& v, int samples);

/// Potential f with f = 0 on the boundary and laplacian(f) = divergence(F):
/// the gradient part of F. Used to form v = u + f when F has no stored
/// potential.
ScalarField drift_potential(const VectorField& F, const PoissonSolver& solver);

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepParam { A, F, H, Combined };
enum class SweepMode {
  ConstantShift,  // a, H: + eps
  SmoothBump,     // a, H: + eps sin(pi x) sin(pi y)
  Noise,          // seeded Gaussian noise with delta = eps (F: non-conservative)
};

struct SweepSpec {
  SweepParam param = SweepParam::A;
  std::vector<double> epsilons;  // strictly decreasing, >= 0
  SweepMode mode = SweepMode::ConstantShift;
  PotentialProfile profile = PotentialProfile::BoundaryActive;
  std::vector<std::uint64_t> seeds{0};  // used by SweepMode::Noise
  SolverConfig solver;
  double eta = 1e-8;
  double slack = 0.1;  // discretization allowance on explicit-constant bounds
  int threads = 0;     // 0: hardware concurrency

  void check() const;
};

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;  // already includes (1 + slack)
  bool holds = false;
};

struct SweepRow {
  double eps = 0.0;
  std::uint64_t seed = 0;
  bool valid = true;  // both solves converged
  int iters = 0;
  double err_u_l1 = 0.0;
  double err_gradu_l1 = 0.0;
  double err_sigma_l1 = 0.0;
  double err_J_l1 = 0.0;
  double energy_diff = 0.0;
  double misalignment = 0.0;
  double min_misalignment_integrand = 0.0;
  double rel_l2 = 0.0;  // ||u - u~||_L2 / ||u||_L2
  double excluded_fraction = 0.0;
  double a_linf = 0.0;
  double F_l1 = 0.0;
  double H_linf = 0.0;
  double f_w11 = 0.0;
  double M = 0.0;
  double sigma0_est = 0.0;
  double sigma1_est = 0.0;
  // Drift-only sweeps: |I - I~| <= M ||F - F~||, misalignment <= 2 M s1 ||F - F~||,
  // ||J - J~|| <= (4 M s1 |Omega|)^{1/2} ||F - F~||^{1/2}.
  std::optional<BoundCheck> energy_bound;
  std::optional<BoundCheck> misalignment_bound;
  std::optional<BoundCheck> flux_bound;
};

enum class ErrorColumn { U, GradU, Sigma, J, EnergyDiff, Misalignment };

const char* column_name(ErrorColumn c);
double column_value(const SweepRow& row, ErrorColumn c);

/// Shape test of e(eps) against an upper bound C eps^q.
struct ShapeCheck {
  ErrorColumn column = ErrorColumn::U;
  double q = 0.5;
  std::optional<RateFit> fit;
  bool monotone = false;     // e non-increasing as eps decreases
  double ratio_growth = 0.0; // max_rows (e/eps^q) / (e/eps^q at largest eps)
  bool slope_ok = false;     // slope >= q - 0.05
  bool passes() const { return monotone && slope_ok && ratio_growth <= 1.5; }
};

struct StabilityReport {
  SweepParam param = SweepParam::A;
  SweepMode mode = SweepMode::ConstantShift;
  PotentialProfile profile = PotentialProfile::BoundaryActive;
  int base_iterations = 0;
  bool base_converged = false;
  std::vector<SweepRow> rows;      // per (eps, seed), eps order then seed order
  std::vector<SweepRow> averaged;  // per eps, mean over valid seeds
  std::vector<ShapeCheck> shapes;
};

/// Builds the perturbed instance for one (eps, seed).
PerturbedProblem build_perturbed(const ProblemData& base, const SweepSpec& spec,
                                 double eps, std::uint64_t seed);

/// Error columns between a base and a perturbed solution.
SweepRow compare_solutions(const ProblemData& base, const ScalarField& u,
                           const ProblemData& perturbed,
                           const ScalarField& u_tilde, double eta);

StabilityReport run_sweep(const ProblemData& p, const SweepSpec& spec);

/// Rate exponents of the stability estimates: 1/2 for u and J, 1/4 for
/// grad u and sigma.
std::vector<ShapeCheck> shape_checks(const std::vector<SweepRow>& averaged);

// ---------------------------------------------------------------------------
// Noise-replication experiment on Example 1

struct Table1Row {
  double delta = 0.0;
  std::uint64_t seed = 0;
  double rel_l2 = 0.0;
  double max_err = 0.0;
  int iters = 0;
  bool converged = false;
};

struct Table1Summary {
  double delta = 0.0;
  int runs = 0;
  double mean_rel_l2 = 0.0;
  double mean_iters = 0.0;
  double mean_max_err = 0.0;
};

struct Table1Report {
  int n = 100;
  bool replication = true;  // n == 100
  std::vector<Table1Row> rows;
  std::vector<Table1Summary> summary;
};

inline const std::vector<double> kTable1Deltas{0.01, 0.035, 0.06};

/// Noisy data for one run: H and a through noise_scalar, F through
/// noise_vector, with streams derive_seed(seed, 0 | 1 | 2).
ProblemData table1_instance(const ProblemData& base, double delta,
                            std::uint64_t seed);

Table1Report table1_experiment(const SolverConfig& cfg,
                               const std::vector<std::uint64_t>& seeds, int n,
                               const std::vector<double>& deltas = kTable1Deltas,
                               int threads = 0);

}  // namespace gradflux
