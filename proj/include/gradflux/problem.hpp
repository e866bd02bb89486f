#pragma once

#include "gradflux/grid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gradflux {

/// One instance of  min_u  integral of a|grad u + F| + H u,  u = 0 on the boundary.
struct ProblemData {
  GridSpec grid;
  ScalarField a;  // weight
  VectorField F;  // drift
  ScalarField H;  // forcing
  std::optional<ScalarField> exact_u;
  std::optional<ScalarField> potential_f;  // F == gradient(f) when present
  double m = 0.0;  // min of a
  double M = 0.0;  // max of a
  std::string tag;
};

/// Builds an instance from sampled data; m and M are measured from `a`.
ProblemData make_problem(ScalarField a, VectorField F, ScalarField H,
                         std::string tag);

/// Same, with F = gradient(f).
ProblemData make_problem_from_potential(ScalarField a, ScalarField f,
                                        ScalarField H, std::string tag);

enum class DriftAssembly {
  Discrete,  // F = (1, x+y) - gradient(u*): |gradient(u*) + F| = a on the grid
  Analytic,  // F = (1, x+y) - (analytic grad u*)
};

/// u* = xy(1-x)(1-y), F = (1, x+y) - grad u*, a = sqrt(1 + (x+y)^2), H = 1.
ProblemData example1(const GridSpec& grid,
                     DriftAssembly drift = DriftAssembly::Discrete);

struct ValidationReport {
  double m = 0.0;
  double M = 0.0;
  double k1 = 0.0;      // ||F||_L1
  double H_linf = 0.0;  // ||H||_Linf
  std::optional<double> C_Omega;
  std::optional<bool> poincare_condition;  // ||H||_Linf < m / C_Omega
  std::vector<std::string> warnings;
};

/// Measures the bound hypotheses of an instance. Violations become warnings.
ValidationReport validate(const ProblemData& p,
                          std::optional<double> C_Omega = std::nullopt);

}  // namespace gradflux
