#include "gradflux/poisson.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace gradflux {

PoissonNonConvergence::PoissonNonConvergence(int iterations, double residual)
    : std::runtime_error("Poisson CG did not converge after " +
                         std::to_string(iterations) +
                         " iterations (relative residual " +
                         std::to_string(residual) + ")"),
      iterations_(iterations),
      residual_(residual) {}

PoissonSolver::PoissonSolver(GridSpec grid, PoissonMethod method,
                             double tolerance, int max_iterations)
    : grid_(grid),
      method_(method),
      tolerance_(tolerance),
      max_iterations_(max_iterations) {
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("Poisson tolerance must be positive");
  }
  const int n = grid_.n();
  const int m = n - 1;
  if (max_iterations_ <= 0) max_iterations_ = 10 * m * m + 10;
  eigenvalues_.resize(m);
  const double h2 = grid_.h() * grid_.h();
  for (int k = 1; k <= m; ++k) {
    const double s = std::sin(std::numbers::pi * k / (2.0 * n));
    eigenvalues_(k - 1) = -4.0 * s * s / h2;
  }
}

ScalarField PoissonSolver::solve_dirichlet(const ScalarField& rhs) const {
  require_same_grid(grid_, rhs.grid(), "solve_dirichlet");
  return method_ == PoissonMethod::FastTransform ? solve_transform(rhs)
                                                 : solve_cg(rhs);
}

namespace {

// Unnormalized DST-I of every column: out(k, c) = sum_j in(j, c) sin(pi j k / n)
// for j, k = 1..n-1, computed through a length-2n odd extension.
Eigen::MatrixXd dst1_columns(const Eigen::MatrixXd& in, int n,
                             Eigen::FFT<double>& fft) {
  const int m = n - 1;
  Eigen::MatrixXd out(m, in.cols());
  std::vector<double> ext(2 * n, 0.0);
  std::vector<std::complex<double>> spec;
  for (Eigen::Index c = 0; c < in.cols(); ++c) {
    for (int j = 1; j <= m; ++j) {
      ext[j] = in(j - 1, c);
      ext[2 * n - j] = -in(j - 1, c);
    }
    fft.fwd(spec, ext);
    for (int k = 1; k <= m; ++k) out(k - 1, c) = -0.5 * spec[k].imag();
  }
  return out;
}

Eigen::MatrixXd dst1_2d(const Eigen::MatrixXd& in, int n,
                        Eigen::FFT<double>& fft) {
  Eigen::MatrixXd cols = dst1_columns(in, n, fft);
  return dst1_columns(cols.transpose(), n, fft).transpose();
}

}  // namespace

ScalarField PoissonSolver::solve_transform(const ScalarField& rhs) const {
  const int n = grid_.n();
  const int m = n - 1;
  Eigen::FFT<double> fft;

  Eigen::MatrixXd r = rhs.values().block(1, 1, m, m).matrix();
  Eigen::ArrayXXd coeff = dst1_2d(r, n, fft).array();
  for (int l = 0; l < m; ++l) {
    coeff.col(l) /= eigenvalues_ + eigenvalues_(l);
  }
  // DST-I is its own inverse up to a factor 2/n per axis.
  const double scale = (2.0 / n) * (2.0 / n);
  ScalarField u(grid_);
  u.values().block(1, 1, m, m) =
      scale * dst1_2d(coeff.matrix(), n, fft).array();
  return u;
}

ScalarField PoissonSolver::solve_cg(const ScalarField& rhs) const {
  // CG on -laplacian (symmetric positive definite on interior nodes).
  const int m = grid_.n() - 1;
  ScalarField b(grid_);
  b.values().block(1, 1, m, m) = -rhs.values().block(1, 1, m, m);

  ScalarField u(grid_);
  const double b_norm = b.values().matrix().norm();
  if (b_norm == 0.0) return u;

  ScalarField r = b;
  ScalarField p = r;
  double rr = r.values().square().sum();
  for (int it = 1; it <= max_iterations_; ++it) {
    ScalarField ap = -laplacian(p);
    const double alpha = rr / (p.values() * ap.values()).sum();
    u.values() += alpha * p.values();
    r.values() -= alpha * ap.values();
    const double rr_next = r.values().square().sum();
    if (std::sqrt(rr_next) <= tolerance_ * b_norm) return u;
    p.values() = r.values() + (rr_next / rr) * p.values();
    rr = rr_next;
  }
  throw PoissonNonConvergence(max_iterations_, std::sqrt(rr) / b_norm);
}

}  // namespace gradflux
