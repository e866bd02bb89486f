#pragma once

#include "gradflux/grid.hpp"

#include <stdexcept>
#include <string>

namespace gradflux {

enum class PoissonMethod { FastTransform, ConjugateGradient };

class PoissonNonConvergence : public std::runtime_error {
 public:
  PoissonNonConvergence(int iterations, double residual);
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// Solves laplacian(u) = rhs at interior nodes with u = 0 on the boundary,
/// where laplacian is the 5-point stencil from grid.hpp.
///
/// FastTransform diagonalizes the stencil with a type-I discrete sine
/// transform along each axis (O(n^2 log n), exact up to rounding).
/// ConjugateGradient is a matrix-free alternative that stops at a relative
/// residual of `tolerance`.
///
/// Instances are immutable; solve_dirichlet() may be called concurrently.
class PoissonSolver {
 public:
  explicit PoissonSolver(GridSpec grid,
                         PoissonMethod method = PoissonMethod::FastTransform,
                         double tolerance = 1e-10, int max_iterations = 0);

  ScalarField solve_dirichlet(const ScalarField& rhs) const;

  const GridSpec& grid() const { return grid_; }
  PoissonMethod method() const { return method_; }
  double tolerance() const { return tolerance_; }

 private:
  ScalarField solve_transform(const ScalarField& rhs) const;
  ScalarField solve_cg(const ScalarField& rhs) const;

  GridSpec grid_;
  PoissonMethod method_;
  double tolerance_;
  int max_iterations_;
  Eigen::ArrayXd eigenvalues_;  // 1-D stencil eigenvalues, k = 1..n-1
};

}  // namespace gradflux
