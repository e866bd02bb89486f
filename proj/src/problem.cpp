#include "gradflux/problem.hpp"

#include <cmath>

namespace gradflux {

ProblemData make_problem(ScalarField a, VectorField F, ScalarField H,
                         std::string tag) {
  require_same_grid(a.grid(), F.grid(), "make_problem (a, F)");
  require_same_grid(a.grid(), H.grid(), "make_problem (a, H)");
  ProblemData p;
  p.grid = a.grid();
  p.m = a.values().minCoeff();
  p.M = a.values().maxCoeff();
  p.a = std::move(a);
  p.F = std::move(F);
  p.H = std::move(H);
  p.tag = std::move(tag);
  return p;
}

ProblemData make_problem_from_potential(ScalarField a, ScalarField f,
                                        ScalarField H, std::string tag) {
  VectorField F = gradient(f);
  ProblemData p =
      make_problem(std::move(a), std::move(F), std::move(H), std::move(tag));
  require_same_grid(p.grid, f.grid(), "make_problem_from_potential");
  p.potential_f = std::move(f);
  return p;
}

ProblemData example1(const GridSpec& grid, DriftAssembly drift) {
  const auto u_star = ScalarField::sample(
      grid, [](double x, double y) { return x * y * (1 - x) * (1 - y); });
  const auto ones = ScalarField::constant(grid, 1.0);
  const auto x_plus_y =
      ScalarField::sample(grid, [](double x, double y) { return x + y; });
  const VectorField target(ones, x_plus_y);

  VectorField F = target;
  if (drift == DriftAssembly::Discrete) {
    F -= gradient(u_star);
  } else {
    F -= VectorField(
        ScalarField::sample(
            grid, [](double x, double y) { return (1 - 2 * x) * y * (1 - y); }),
        ScalarField::sample(grid, [](double x, double y) {
          return (1 - 2 * y) * x * (1 - x);
        }));
  }

  auto a = ScalarField::sample(grid, [](double x, double y) {
    return std::sqrt(1.0 + (x + y) * (x + y));
  });
  ProblemData p = make_problem(std::move(a), std::move(F), ones,
                               drift == DriftAssembly::Discrete
                                   ? "example1"
                                   : "example1-analytic-drift");
  p.exact_u = u_star;
  return p;
}

ValidationReport validate(const ProblemData& p, std::optional<double> C_Omega) {
  ValidationReport r;
  r.m = p.a.values().minCoeff();
  r.M = p.a.values().maxCoeff();
  r.k1 = norm(p.F, Norm::L1);
  r.H_linf = norm(p.H, Norm::Linf);
  r.C_Omega = C_Omega;

  if (!(r.m > 0.0)) r.warnings.emplace_back("weight not positive");
  if (!p.a.all_finite() || !p.F.all_finite() || !p.H.all_finite()) {
    r.warnings.emplace_back("non-finite data");
  }
  if (C_Omega) {
    if (*C_Omega > 0.0) {
      r.poincare_condition = r.H_linf < r.m / *C_Omega;
      if (!*r.poincare_condition) {
        r.warnings.emplace_back("forcing exceeds m / C_Omega");
      }
    } else {
      r.warnings.emplace_back("C_Omega must be positive; condition skipped");
    }
  }
  if (p.exact_u && !p.exact_u->vanishes_on_boundary()) {
    r.warnings.emplace_back("exact solution does not vanish on the boundary");
  }
  if (p.potential_f) {
    const VectorField diff = p.F - gradient(*p.potential_f);
    if (norm(diff, Norm::Linf) > 1e-12 * std::max(r.M, 1.0)) {
      r.warnings.emplace_back("drift is not the gradient of potential_f");
    }
  }
  return r;
}

}  // namespace gradflux
