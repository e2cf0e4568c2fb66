#include "beamblow/scenarios.hpp"

#include <array>
#include <cmath>

#include "beamblow/errors.hpp"
#include "beamblow/functionals.hpp"
#include "beamblow/spectra.hpp"

namespace beamblow {

namespace {

// r1 is placed this factor beyond the edge of the admissible set.
constexpr double kEdgeMargin = 1.01;

}  // namespace

EigenBasis eigen_pair_basis(const Grid& grid) {
  if (grid.size() < 2) throw InvalidArgument("eigen pair basis needs at least two nodes");
  EigenBasis b;
  b.v1 = smallest_eigen(grid, SpdOperator::dirichlet_laplacian).field;
  const std::array<Field, 1> deflate{b.v1};
  b.v2 = smallest_eigen(grid, SpdOperator::dirichlet_laplacian, {}, deflate).field;
  b.v2 -= inner(grid, b.v1, b.v2) * b.v1;
  b.v2 *= 1.0 / norm_lq(grid, b.v2, 2.0);
  return b;
}

double chi(double r1, const Grid& grid, const Field& v1, const ModelParams& params) {
  if (r1 < 0.0) throw InvalidArgument("r1 must be nonnegative");
  const Norms n = norms_of(grid, v1, params);
  const double p = params.p, g = params.gamma;
  double value = 0.5 * r1 * r1 * (n.l2_sq + n.lap_sq + n.grad_sq);
  if (params.beta != 0.0)
    value += std::pow(r1, 2.0 * (g + 1.0)) / (2.0 * (g + 1.0)) * params.beta *
             std::pow(n.grad_sq, g + 1.0);
  value -= std::pow(r1, p + 1.0) / (p + 1.0) * n.lp1_pow;
  return value;
}

InitialData construct_energy_level(const Grid& grid, const ModelParams& params, double R,
                                   double B) {
  if (!(B > 0.0)) throw InvalidArgument("B must be positive");
  if (!std::isfinite(R)) throw InvalidArgument("energy level must be finite");
  const EigenBasis basis = eigen_pair_basis(grid);
  const double v1_sq = inner(grid, basis.v1, basis.v1);
  const double v2_norm = norm_lq(grid, basis.v2, 2.0);
  const auto ok = [&](double r1) { return chi(r1, grid, basis.v1, params) < R && r1 * r1 * v1_sq / B > R; };

  double r1 = 1.0;
  while (!ok(r1)) {
    r1 *= 2.0;
    if (r1 > std::ldexp(1.0, 60))
      throw ConstructionFailure("no r1 up to 2^60 reaches the energy level");
  }
  // Pull r1 back towards the edge of the admissible set: a far larger r1
  // makes chi(r1) huge and negative and R - chi(r1) loses digits.
  if (r1 > 1.0) {
    double lo = 0.5 * r1, hi = r1;
    for (int k = 0; k < 100 && hi - lo > 1e-12 * hi; ++k) {
      const double mid = 0.5 * (lo + hi);
      (ok(mid) ? hi : lo) = mid;
    }
    if (ok(kEdgeMargin * hi)) r1 = std::min(r1, kEdgeMargin * hi);
  }
  InitialData d;
  d.preset = "high_energy";
  d.target_R = R;
  d.r1 = r1;
  d.chi = chi(r1, grid, basis.v1, params);
  d.u0 = r1 * basis.v1;
  // Solve for r2 against the evaluated J(u0) rather than chi: both are sums
  // of terms far larger than R, and their roundings differ.
  const double kinetic = 2.0 * (R - potential_J(grid, d.u0, params)) - r1 * r1 * v1_sq;
  if (!(kinetic >= 0.0)) throw ConstructionFailure("energy level below chi(r1)");
  d.r2 = std::sqrt(kinetic) / v2_norm;
  d.u1 = r1 * basis.v1 + d.r2 * basis.v2;
  d.amplitude = r1;
  const double E0 = energy_E(grid, d.u0, d.u1, params);
  if (!(std::abs(E0 - R) <= 1e-9 * std::max(1.0, std::abs(R))))
    throw ConstructionFailure("constructed energy " + std::to_string(E0) + " misses R = " +
                              std::to_string(R));
  if (!(inner(grid, d.u0, d.u1) > B * R))
    throw ConstructionFailure("constructed data violate (u0, u1) > B R");
  return d;
}

InitialData make_preset(std::string_view name, const Grid& grid, const ModelParams& params,
                        const PresetOptions& options) {
  if (name == "high_energy") return construct_energy_level(grid, params, options.energy_R, options.B);
  if (name != "sine_bump" && name != "negative_energy")
    throw InvalidArgument("unknown preset '" + std::string(name) + "'");

  const Field phi = smallest_eigen(grid, SpdOperator::clamped_biharmonic).field;
  InitialData d;
  d.preset = std::string(name);
  d.u1 = grid.zeros();
  if (name == "sine_bump") {
    d.amplitude = options.amplitude.value_or(1.0);
    d.u0 = d.amplitude * phi;
    return d;
  }

  const Field zero = grid.zeros();
  const auto energy = [&](double a) { return energy_E(grid, a * phi, zero, params); };
  double hi = 1.0;
  while (!(energy(hi) < 0.0)) {
    hi *= 2.0;
    if (hi > std::ldexp(1.0, 60))
      throw ConstructionFailure("E(a phi) stays nonnegative for every amplitude up to 2^60");
  }
  double lo = hi / 2.0;
  if (energy(lo) < 0.0) lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (energy(mid) < 0.0) hi = mid;
    else lo = mid;
  }
  const double m = options.amplitude && *options.amplitude > 1.0 ? *options.amplitude : 1.25;
  d.amplitude = m * hi;
  d.u0 = d.amplitude * phi;
  if (!(energy(d.amplitude) < 0.0))
    throw ConstructionFailure("negative_energy data do not have E(0) < 0");
  return d;
}

}  // namespace beamblow
