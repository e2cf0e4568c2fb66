#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "beamblow/mesh.hpp"
#include "beamblow/params.hpp"

namespace beamblow {

struct InitialData {
  Field u0;
  Field u1;
  std::string preset;
  double amplitude = 0.0;
  // Energy-level construction record; zero for other presets.
  double r1 = 0.0;
  double r2 = 0.0;
  double chi = 0.0;
  double target_R = 0.0;
};

struct EigenBasis {
  Field v1;
  Field v2;
};

// First two Dirichlet-Laplacian eigenfields, unit weighted L2 norm, made
// orthogonal by one re-orthogonalization pass. Needs at least two nodes.
EigenBasis eigen_pair_basis(const Grid& grid);

// chi(r1) = r1^2/2 (||v1||^2 + ||Lap v1||^2 + ||grad v1||^2)
//         + r1^{2(gamma+1)} beta/(2(gamma+1)) ||grad v1||^{2(gamma+1)}
//         - r1^{p+1}/(p+1) ||v1||_{p+1}^{p+1}
double chi(double r1, const Grid& grid, const Field& v1, const ModelParams& params);

// u0 = r1 v1, u1 = r1 v1 + r2 v2 with E(0) = R and (u0, u1) = r1^2 ||v1||^2 > B R.
// r1 is found by doubling from 1, then moved to 1% past the edge of the set
// where both conditions hold.
// Throws ConstructionFailure if no r1 <= 2^60 brackets both conditions or the
// energy postcondition fails.
InitialData construct_energy_level(const Grid& grid, const ModelParams& params, double R,
                                   double B);

struct PresetOptions {
  std::optional<double> amplitude;
  // Used by high_energy.
  double energy_R = 0.0;
  double B = 0.0;
};

// sine_bump: u0 = a phi (clamped-biharmonic eigenfield), u1 = 0, a defaults to 1.
// negative_energy: u0 = m a* phi, u1 = 0, where a* is the root of E(a phi) = 0
// and m is the amplitude when given and above 1, else 1.25.
// high_energy: construct_energy_level with options.energy_R and options.B.
InitialData make_preset(std::string_view name, const Grid& grid, const ModelParams& params,
                        const PresetOptions& options);

}  // namespace beamblow
