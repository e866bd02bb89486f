#include "gradflux/duality.hpp"

#include <algorithm>

namespace gradflux {

double FluxPair::masked_out_fraction() const {
  const GridSpec& g = J.grid();
  const auto block = mask.topLeftCorner(g.n(), g.n());
  return 1.0 - static_cast<double>(block.count()) /
                   static_cast<double>(block.size());
}

FluxPair flux(const ScalarField& u, const ProblemData& p, double eta) {
  require_same_grid(u.grid(), p.grid, "flux");
  if (!(eta > 0.0)) throw std::invalid_argument("flux: eta must be positive");
  const VectorField g = gradient(u) + p.F;
  const Eigen::ArrayXXd mag = g.magnitude().values();

  FluxPair out;
  out.eta = eta;
  out.mask = mag >= eta;
  const Eigen::ArrayXXd sigma =
      out.mask.select(p.a.values() / mag.max(eta), 0.0);
  out.sigma = ScalarField(p.grid, sigma);
  out.J = VectorField(ScalarField(p.grid, sigma * g.x.values()),
                      ScalarField(p.grid, sigma * g.y.values()));
  return out;
}

double primal_energy(const ScalarField& u, const ProblemData& p) {
  require_same_grid(u.grid(), p.grid, "primal_energy");
  const VectorField g = gradient(u) + p.F;
  const ScalarField integrand(
      p.grid, p.a.values() * g.magnitude().values() + p.H.values() * u.values());
  return integrate(integrand);
}

double dual_value(const VectorField& J, const VectorField& F) {
  require_same_grid(J.grid(), F.grid(), "dual_value");
  const ScalarField dot(J.grid(), J.x.values() * F.x.values() +
                                      J.y.values() * F.y.values());
  return integrate(dot);
}

double el_residual_l1(const FluxPair& fp, const ScalarField& H) {
  const GridSpec& g = H.grid();
  const int n = g.n();
  const ScalarField div = divergence(fp.J);
  double sum = 0.0;
  for (int j = 1; j < n; ++j) {
    for (int i = 1; i < n; ++i) {
      if (fp.mask(i, j) && fp.mask(i - 1, j) && fp.mask(i, j - 1)) {
        sum += std::abs(div(i, j) - H(i, j));
      }
    }
  }
  return g.h() * g.h() * sum;
}

Certificate certify(const ScalarField& u, const ProblemData& p, double eta) {
  const FluxPair fp = flux(u, p, eta);
  Certificate c;
  c.primal = primal_energy(u, p);
  c.dual = dual_value(fp.J, p.F);
  c.gap = c.primal - c.dual;
  c.el_residual_l1 = el_residual_l1(fp, p.H);
  const Eigen::ArrayXXd excess =
      fp.J.magnitude().values() - p.a.values();
  c.flux_bound_violation =
      std::max(0.0, fp.mask.select(excess, 0.0).maxCoeff());
  return c;
}

}  // namespace gradflux
