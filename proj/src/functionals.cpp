#include "beamblow/functionals.hpp"

#include <cmath>

#include "beamblow/errors.hpp"

namespace beamblow {

Norms norms_of(const Grid& grid, const Field& u, const ModelParams& params) {
  require_match(grid, u);
  Norms n;
  n.l2_sq = inner(grid, u, u);
  n.lp1_pow = power_sum(grid, u, params.p + 1.0);
  n.grad_sq = grad_norm_sq(grid, u);
  n.lap_sq = lap_norm_sq(grid, u);
  return n;
}

namespace {

double kirchhoff_potential(double grad_sq, const ModelParams& params) {
  if (params.beta == 0.0) return 0.0;
  return params.beta / (2.0 * (params.gamma + 1.0)) * std::pow(grad_sq, params.gamma + 1.0);
}

}  // namespace

double potential_J(const Norms& n, const ModelParams& params) {
  return 0.5 * n.grad_sq + 0.5 * n.lap_sq + kirchhoff_potential(n.grad_sq, params) -
         n.lp1_pow / (params.p + 1.0);
}

double nehari_I(const Norms& n, const ModelParams& params) {
  const double kirchhoff_term =
      params.beta == 0.0 ? 0.0 : params.beta * std::pow(n.grad_sq, params.gamma + 1.0);
  return n.grad_sq + n.lap_sq + kirchhoff_term - n.lp1_pow;
}

double potential_J(const Grid& grid, const Field& u, const ModelParams& params) {
  return potential_J(norms_of(grid, u, params), params);
}

double nehari_I(const Grid& grid, const Field& u, const ModelParams& params) {
  return nehari_I(norms_of(grid, u, params), params);
}

double energy_E(const Grid& grid, const Field& u, const Field& v, const ModelParams& params) {
  require_match(grid, v);
  return 0.5 * inner(grid, v, v) + potential_J(grid, u, params);
}

std::string_view to_string(WellClass c) {
  switch (c) {
    case WellClass::stable_W: return "stable_W";
    case WellClass::unstable_V: return "unstable_V";
    case WellClass::near_nehari: return "near_nehari";
    case WellClass::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

WellClass classify(const Norms& n, const ModelParams& params, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("classification tolerance must be positive");
  const double scale = n.grad_sq + n.lap_sq + n.lp1_pow;
  const double I = nehari_I(n, params);
  if (!std::isfinite(scale) || !std::isfinite(I)) return WellClass::indeterminate;
  if (scale == 0.0) return WellClass::stable_W;
  if (I > tol * scale) return WellClass::stable_W;
  if (I < -tol * scale) return WellClass::unstable_V;
  return WellClass::near_nehari;
}

WellClass classify(const Grid& grid, const Field& u, const ModelParams& params, double tol) {
  return classify(norms_of(grid, u, params), params, tol);
}

FunctionalSnapshot snapshot(const Grid& grid, const Field& u, const Field& v,
                            const ModelParams& params, double tol) {
  const Norms n = norms_of(grid, u, params);
  FunctionalSnapshot s;
  s.J = potential_J(n, params);
  s.I = nehari_I(n, params);
  s.l2_v = norm_lq(grid, v, 2.0);
  s.E = 0.5 * s.l2_v * s.l2_v + s.J;
  s.l2_u = std::sqrt(n.l2_sq);
  s.lp1_u = std::pow(n.lp1_pow, 1.0 / (params.p + 1.0));
  s.linf_u = norm_lq(grid, u, kInfinityNorm);
  s.grad_u_sq = n.grad_sq;
  s.lap_u_sq = n.lap_sq;
  s.classification = classify(n, params, tol);
  return s;
}

Lemma21Verdict lemma21_verdict(const Grid& grid, const Field& u, const ModelParams& params,
                               const VariationalConstants& constants, double band) {
  const Norms n = norms_of(grid, u, params);
  Lemma21Verdict v;
  v.J = potential_J(n, params);
  v.I = nehari_I(n, params);
  v.h_norm = std::sqrt(n.grad_sq + n.lap_sq);
  const double d = constants.well_depth_d;
  const double lambda_star = constants.lambda_star;
  const double scale = n.grad_sq + n.lap_sq + n.lp1_pow;

  v.J_le_d = v.J <= d + band * std::abs(d);
  v.I_neg = v.I < 0.0;
  v.H_norm_gt_lambda_star = v.h_norm > lambda_star;
  const bool I_ambiguous = std::abs(v.I) <= band * scale;
  const bool H_ambiguous = std::abs(v.h_norm - lambda_star) <= band * lambda_star;
  v.consistent = !v.J_le_d || I_ambiguous || H_ambiguous || v.I_neg == v.H_norm_gt_lambda_star;
  return v;
}

}  // namespace beamblow
