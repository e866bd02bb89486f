#pragma once

#include "gradflux/grid.hpp"
#include "gradflux/poisson.hpp"
#include "gradflux/problem.hpp"

#include <optional>
#include <vector>

namespace gradflux {

struct SolverConfig {
  double lambda = 1.0;
  double tol = 1e-7;
  int max_iter = 5000;
  bool record_history = false;

  /// Throws std::invalid_argument on out-of-range values.
  void check() const;
};

struct SolverState {
  ScalarField u;
  VectorField b;
  VectorField d;
  int k = 0;

  /// u = b = d = 0.
  static SolverState zero(const GridSpec& grid);
};

struct HistoryEntry {
  int k = 0;
  double rel_change = 0.0;
  double energy = 0.0;
};

struct SolveResult {
  SolverState state;
  bool converged = false;
  int iterations = 0;
  std::vector<HistoryEntry> history;
};

/// d = max(|s| - a/lambda, 0) s/|s| - F  with  s = b + grad_u + F;
/// d = -F where |s| vanishes.
VectorField shrink_step(const VectorField& b, const VectorField& grad_u,
                        const VectorField& F, const ScalarField& a,
                        double lambda);

/// One split-Bregman sweep:
///   laplacian(u') = -divergence(b - d) + H/lambda,  u' = 0 on the boundary
///   d' = shrink_step(b, grad u', F, a, lambda)
///   b' = b + grad u' - d'
///
/// The b update carries no F: the -F shift lives inside d, so b' equals the
/// usual F-inclusive form b + (grad u' + F) - (d' + F).
SolverState iterate(const SolverState& state, const ProblemData& p,
                    const SolverConfig& cfg, const PoissonSolver& solver);

/// Runs iterate() from the zero state until
///   ||u^{k+1} - u^k||_L2 / ||u^{k+1}||_L2 < tol
/// or max_iter sweeps. On non-convergence the last state is returned with
/// converged == false.
SolveResult solve(const ProblemData& p, const SolverConfig& cfg,
                  const PoissonSolver& solver);

SolveResult solve(const ProblemData& p, const SolverConfig& cfg);

}  // namespace gradflux
