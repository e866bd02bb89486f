#pragma once

#include "gradflux/grid.hpp"
#include "gradflux/problem.hpp"

namespace gradflux {

/// Flux J = sigma (grad u + F) with sigma = a / |grad u + F|, built where the
/// gradient term is at least `eta` in magnitude. Elsewhere the node is masked
/// out and J = sigma = 0.
struct FluxPair {
  VectorField J;
  ScalarField sigma;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask;
  double eta = 1e-8;

  /// Fraction of quadrature nodes with mask == false.
  double masked_out_fraction() const;
};

struct Certificate {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;  // primal - dual
  double el_residual_l1 = 0.0;
  double flux_bound_violation = 0.0;  // max (|J| - a)^+
};

FluxPair flux(const ScalarField& u, const ProblemData& p, double eta = 1e-8);

/// h^2 * sum over quadrature nodes of a|grad u + F| + H u.
double primal_energy(const ScalarField& u, const ProblemData& p);

/// <F, J> under the same quadrature.
double dual_value(const VectorField& J, const VectorField& F);

/// ||divergence(J) - H||_L1 over interior nodes whose whole backward stencil
/// is unmasked.
double el_residual_l1(const FluxPair& fp, const ScalarField& H);

Certificate certify(const ScalarField& u, const ProblemData& p,
                    double eta = 1e-8);

}  // namespace gradflux
