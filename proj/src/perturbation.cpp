#include "gradflux/perturbation.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace gradflux {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> standard_normals(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 gen(seed);
  // 53-bit uniforms in (0, 1]; the generator's output sequence is fixed by the
  // standard, so the draws are reproducible across standard libraries.
  auto uniform = [&gen] {
    return (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
  };
  std::vector<double> out;
  out.reserve(count + 1);
  while (out.size() < count) {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    out.push_back(r * std::cos(theta));
    out.push_back(r * std::sin(theta));
  }
  out.resize(count);
  return out;
}

ScalarField noise_scalar(const ScalarField& field, const NoiseSpec& spec) {
  if (spec.delta < 0.0) throw std::invalid_argument("noise delta must be >= 0");
  if (spec.delta == 0.0) return field;
  const double size = frobenius(field);
  if (size == 0.0) throw NoiseScaleUndefined();

  const Eigen::Index rows = field.values().rows();
  const Eigen::Index cols = field.values().cols();
  const std::vector<double> draws =
      standard_normals(spec.seed, static_cast<std::size_t>(rows * cols));
  const Eigen::Map<const Eigen::ArrayXXd> R(draws.data(), rows, cols);
  const double gamma = spec.delta * size / R.matrix().norm();
  ScalarField out = field;
  out.values() += gamma * R;
  return out;
}

VectorField noise_vector(const VectorField& F, const NoiseSpec& spec) {
  if (spec.delta < 0.0) throw std::invalid_argument("noise delta must be >= 0");
  if (spec.delta == 0.0) return F;
  const double size = frobenius(F);
  if (size == 0.0) throw NoiseScaleUndefined();

  const Eigen::Index rows = F.x.values().rows();
  const Eigen::Index cols = F.x.values().cols();
  const Eigen::Index count = rows * cols;
  const std::vector<double> draws =
      standard_normals(spec.seed, static_cast<std::size_t>(2 * count));
  const Eigen::Map<const Eigen::ArrayXXd> Rx(draws.data(), rows, cols);
  const Eigen::Map<const Eigen::ArrayXXd> Ry(draws.data() + count, rows, cols);
  const double r_norm = std::sqrt(Rx.square().sum() + Ry.square().sum());
  const double gamma = spec.delta * size / r_norm;
  VectorField out = F;
  out.x.values() += gamma * Rx;
  out.y.values() += gamma * Ry;
  return out;
}

namespace {

ScalarField bump(const GridSpec& grid) {
  return ScalarField::sample(grid, [](double x, double y) {
    return std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y);
  });
}

}  // namespace

FieldPerturbation perturb_weight(const ScalarField& a, double epsilon,
                                 WeightMode mode) {
  FieldPerturbation out;
  if (mode == WeightMode::ConstantShift) {
    out.field = a;
    out.field.values() += epsilon;
  } else {
    out.field = a + epsilon * bump(a.grid());
  }
  out.size = norm(ScalarField(out.field - a), Norm::Linf);
  if (std::abs(out.size - std::abs(epsilon)) > 1e-3 * std::abs(epsilon)) {
    out.warnings.push_back("grid does not attain the nominal perturbation size; "
                           "measured size reported");
  }
  const double m = a.values().minCoeff();
  if (epsilon < 0.0 && out.field.values().minCoeff() < 0.5 * m) {
    out.warnings.push_back("perturbed weight drops below m/2");
  }
  return out;
}

ScalarField potential_increment(const GridSpec& grid, double epsilon,
                                PotentialProfile profile) {
  if (profile == PotentialProfile::InteriorBump) return epsilon * bump(grid);
  return ScalarField::sample(grid, [epsilon](double x, double y) {
    return epsilon * std::cos(std::numbers::pi * x) *
           std::cos(std::numbers::pi * y);
  });
}

PotentialPerturbation perturb_potential(const ScalarField& f, double epsilon,
                                        PotentialProfile profile) {
  if (epsilon == 0.0) return {f, gradient(f)};
  ScalarField f_new = f + potential_increment(f.grid(), epsilon, profile);
  VectorField F_new = gradient(f_new);
  return {std::move(f_new), std::move(F_new)};
}

VectorField perturb_drift(const VectorField& F, double epsilon,
                          PotentialProfile profile) {
  if (epsilon == 0.0) return F;
  return F + gradient(potential_increment(F.grid(), epsilon, profile));
}

double w11_norm(const ScalarField& g) {
  return norm(g, Norm::L1) + norm(gradient(g), Norm::L1);
}

void measure_sizes(PerturbedProblem& pp) {
  pp.a_linf = norm(ScalarField(pp.base.a - pp.perturbed.a), Norm::Linf);
  pp.F_l1 = norm(VectorField(pp.base.F - pp.perturbed.F), Norm::L1);
  pp.H_linf = norm(ScalarField(pp.base.H - pp.perturbed.H), Norm::Linf);
  if (pp.base.potential_f && pp.perturbed.potential_f) {
    pp.f_w11 = w11_norm(ScalarField(*pp.perturbed.potential_f -
                                    *pp.base.potential_f));
  } else if (pp.potential_change) {
    pp.f_w11 = w11_norm(*pp.potential_change);
  } else {
    pp.f_w11.reset();
  }
}

}  // namespace gradflux
