#pragma once

#include "gradflux/grid.hpp"
#include "gradflux/problem.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace gradflux {

/// Additive Gaussian noise  field + gamma R,  gamma = delta ||field|| / ||R||,
/// with R drawn entrywise from N(0, 1) and ||.|| the unweighted Frobenius norm
/// over every grid node.
struct NoiseSpec {
  double delta = 0.0;
  std::uint64_t seed = 0;
};

class NoiseScaleUndefined : public std::invalid_argument {
 public:
  NoiseScaleUndefined() : std::invalid_argument("noise scale undefined") {}
};

/// Mixes a stream id into a seed (splitmix64 finalizer). Used to give the
/// a, F and H draws of one run independent streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// `count` standard normal variates from mt19937_64 via Box-Muller.
std::vector<double> standard_normals(std::uint64_t seed, std::size_t count);

ScalarField noise_scalar(const ScalarField& field, const NoiseSpec& spec);

/// Both components share one R and one gamma computed over the stacked field.
VectorField noise_vector(const VectorField& F, const NoiseSpec& spec);

enum class WeightMode { ConstantShift, SmoothBump };

struct FieldPerturbation {
  ScalarField field;
  double size = 0.0;  // measured sup-norm distance to the input
  std::vector<std::string> warnings;
};

/// a + eps (constant-shift) or a + eps sin(pi x) sin(pi y) (smooth-bump).
/// Also used for the forcing H.
FieldPerturbation perturb_weight(const ScalarField& a, double epsilon,
                                 WeightMode mode);

/// Shape of the potential increment psi in  f~ = f + eps psi.
enum class PotentialProfile {
  /// sin(pi x) sin(pi y). Vanishes on the boundary, so the perturbed problem
  /// is the original one shifted by eps psi: u~ = u - eps psi, J~ = J.
  InteriorBump,
  /// cos(pi x) cos(pi y). Non-constant on the boundary, so the drift change
  /// cannot be absorbed into u.
  BoundaryActive,
};

ScalarField potential_increment(const GridSpec& grid, double epsilon,
                                PotentialProfile profile);

struct PotentialPerturbation {
  ScalarField f;  // f~
  VectorField F;  // gradient(f~)
};

PotentialPerturbation perturb_potential(const ScalarField& f, double epsilon,
                                        PotentialProfile profile);

/// F + gradient(eps psi): the drift-side form of perturb_potential for
/// instances without a stored potential. Equal to gradient(f~) when
/// F == gradient(f).
VectorField perturb_drift(const VectorField& F, double epsilon,
                          PotentialProfile profile);

enum class Param { A, F, H };

struct PerturbedProblem {
  ProblemData base;
  ProblemData perturbed;
  std::set<Param> applied;
  std::optional<ScalarField> potential_change;  // f~ - f, when F was moved by a potential
  double a_linf = 0.0;   // ||a - a~||_Linf
  double F_l1 = 0.0;     // ||F - F~||_L1
  double H_linf = 0.0;   // ||H - H~||_Linf
  std::optional<double> f_w11;  // ||f - f~||_W11
};

/// Sizes recomputed from the two instances.
void measure_sizes(PerturbedProblem& pp);

/// W^{1,1} norm ||g||_L1 + ||gradient(g)||_L1.
double w11_norm(const ScalarField& g);

}  // namespace gradflux
