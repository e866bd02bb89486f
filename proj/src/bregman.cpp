#include "gradflux/bregman.hpp"

#include "gradflux/duality.hpp"

#include <cmath>
#include <limits>

namespace gradflux {

namespace {
constexpr double kZeroMagnitude = 1e-14;
}

void SolverConfig::check() const {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iter < 0) throw std::invalid_argument("max_iter must be >= 0");
}

SolverState SolverState::zero(const GridSpec& grid) {
  return SolverState{ScalarField(grid), VectorField(grid), VectorField(grid),
                     0};
}

VectorField shrink_step(const VectorField& b, const VectorField& grad_u,
                        const VectorField& F, const ScalarField& a,
                        double lambda) {
  require_same_grid(b.grid(), grad_u.grid(), "shrink_step");
  require_same_grid(b.grid(), F.grid(), "shrink_step");
  require_same_grid(b.grid(), a.grid(), "shrink_step");
  const Eigen::ArrayXXd sx = b.x.values() + grad_u.x.values() + F.x.values();
  const Eigen::ArrayXXd sy = b.y.values() + grad_u.y.values() + F.y.values();
  const Eigen::ArrayXXd mag = (sx.square() + sy.square()).sqrt();
  const Eigen::ArrayXXd shrunk = (mag - a.values() / lambda).max(0.0);
  const Eigen::ArrayXXd safe = mag.max(kZeroMagnitude);
  const auto zero = mag < kZeroMagnitude;
  const Eigen::ArrayXXd dx = zero.select(0.0, shrunk * sx / safe);
  const Eigen::ArrayXXd dy = zero.select(0.0, shrunk * sy / safe);
  return VectorField(ScalarField(b.grid(), dx - F.x.values()),
                     ScalarField(b.grid(), dy - F.y.values()));
}

SolverState iterate(const SolverState& state, const ProblemData& p,
                    const SolverConfig& cfg, const PoissonSolver& solver) {
  ScalarField rhs = -divergence(VectorField(state.b - state.d));
  rhs.values() += p.H.values() / cfg.lambda;

  SolverState next;
  next.u = solver.solve_dirichlet(rhs);
  const VectorField grad_u = gradient(next.u);
  next.d = shrink_step(state.b, grad_u, p.F, p.a, cfg.lambda);
  next.b = state.b + grad_u - next.d;
  next.k = state.k + 1;
  return next;
}

SolveResult solve(const ProblemData& p, const SolverConfig& cfg,
                  const PoissonSolver& solver) {
  cfg.check();
  require_same_grid(p.grid, solver.grid(), "solve");

  SolveResult result;
  result.state = SolverState::zero(p.grid);
  for (int it = 0; it < cfg.max_iter; ++it) {
    SolverState next = iterate(result.state, p, cfg, solver);
    const double change = norm(ScalarField(next.u - result.state.u), Norm::L2);
    const double size = norm(next.u, Norm::L2);
    double rel;
    if (change == 0.0) {
      rel = 0.0;
    } else if (size == 0.0) {
      rel = std::numeric_limits<double>::infinity();
    } else {
      rel = change / size;
    }
    result.state = std::move(next);
    result.iterations = result.state.k;
    if (cfg.record_history) {
      result.history.push_back(
          {result.state.k, rel, primal_energy(result.state.u, p)});
    }
    if (rel < cfg.tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

SolveResult solve(const ProblemData& p, const SolverConfig& cfg) {
  return solve(p, cfg, PoissonSolver(p.grid));
}

}  // namespace gradflux
