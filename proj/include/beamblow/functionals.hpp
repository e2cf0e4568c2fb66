#pragma once

#include <string_view>

#include "beamblow/mesh.hpp"
#include "beamblow/params.hpp"
#include "beamblow/spectra.hpp"

namespace beamblow {

// The mesh norms a functional evaluation needs, computed once.
struct Norms {
  double l2_sq = 0.0;      // ||u||_2^2
  double lp1_pow = 0.0;    // ||u||_{p+1}^{p+1}
  double grad_sq = 0.0;    // ||grad u||^2
  double lap_sq = 0.0;     // ||Lap u||^2
};

Norms norms_of(const Grid& grid, const Field& u, const ModelParams& params);

// J(u) = 1/2 ||grad u||^2 + 1/2 ||Lap u||^2 + beta/(2(gamma+1)) ||grad u||^{2gamma+2}
//        - ||u||_{p+1}^{p+1}/(p+1)
double potential_J(const Grid& grid, const Field& u, const ModelParams& params);
// I(u) = ||grad u||^2 + ||Lap u||^2 + beta ||grad u||^{2gamma+2} - ||u||_{p+1}^{p+1}
double nehari_I(const Grid& grid, const Field& u, const ModelParams& params);
// E = 1/2 ||v||^2 + J(u)
double energy_E(const Grid& grid, const Field& u, const Field& v, const ModelParams& params);

double potential_J(const Norms& n, const ModelParams& params);
double nehari_I(const Norms& n, const ModelParams& params);

enum class WellClass { stable_W, unstable_V, near_nehari, indeterminate };
std::string_view to_string(WellClass c);

struct FunctionalSnapshot {
  double J = 0.0;
  double I = 0.0;
  double E = 0.0;
  double l2_u = 0.0;
  double lp1_u = 0.0;
  double linf_u = 0.0;
  double grad_u_sq = 0.0;
  double lap_u_sq = 0.0;
  double l2_v = 0.0;
  WellClass classification = WellClass::indeterminate;
};

inline constexpr double kClassifyTolerance = 1e-9;

FunctionalSnapshot snapshot(const Grid& grid, const Field& u, const Field& v,
                            const ModelParams& params, double tol = kClassifyTolerance);

// Sign of I relative to scale = ||u||_H^2 + ||u||_{p+1}^{p+1}; u = 0 is stable_W.
// Non-finite inputs give indeterminate.
WellClass classify(const Grid& grid, const Field& u, const ModelParams& params,
                   double tol = kClassifyTolerance);
WellClass classify(const Norms& n, const ModelParams& params, double tol = kClassifyTolerance);

struct Lemma21Verdict {
  double J = 0.0;
  double I = 0.0;
  double h_norm = 0.0;
  bool J_le_d = false;
  bool I_neg = false;
  bool H_norm_gt_lambda_star = false;
  bool consistent = true;
};

// Both sides of: when J(u) <= d, I(u) < 0 iff ||u||_H > lambda*. Each strict
// comparison is only decided outside a relative band of width `band`; inside
// the band the side is treated as matching the other one.
Lemma21Verdict lemma21_verdict(const Grid& grid, const Field& u, const ModelParams& params,
                               const VariationalConstants& constants, double band = 1e-9);

}  // namespace beamblow
