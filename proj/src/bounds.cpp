#include "beamblow/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "beamblow/errors.hpp"
#include "beamblow/functionals.hpp"

namespace beamblow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Largest x in [lo, hi] with pred(x), given pred(lo) and !pred(hi).
template <class Pred>
double bisect_last(double lo, double hi, Pred pred) {
  for (int it = 0; it < 400 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid)) lo = mid;
    else hi = mid;
  }
  return lo;
}

double kappa_of(const ModelParams& params) {
  return (params.p - (2.0 * params.gamma + 1.0)) / (2.0 * (params.p + 1.0));
}

double c1_of(double alpha, double p, double volume) {
  const double a = 2.0 * (1.0 - alpha) - 1.0;
  return a / (2.0 * (1.0 - alpha)) * std::pow(volume, (p - 1.0) / (p + 1.0) / a);
}

}  // namespace

std::string_view to_string(ChainStatus s) {
  switch (s) {
    case ChainStatus::applicable: return "applicable";
    case ChainStatus::not_applicable: return "not_applicable";
    case ChainStatus::hypotheses_unmet: return "hypotheses_unmet";
  }
  return "not_applicable";
}

std::string_view to_string(Thm31Verdict v) {
  switch (v) {
    case Thm31Verdict::case_i: return "case_i";
    case Thm31Verdict::case_ii: return "case_ii";
    case Thm31Verdict::not_applicable: return "not_applicable";
  }
  return "not_applicable";
}

double thm31_theta(const ModelParams& params, double eps) {
  const double s = (params.p - params.r) / (params.p - 1.0);
  return std::pow(eps, params.r) * (1.0 - s) / (params.r + 1.0);
}

double thm31_g(const ModelParams& params, double eps) {
  return (params.p + 1.0) * (1.0 - thm31_theta(params, eps)) - 2.0 - eps;
}

double thm31_h(const ModelParams& params, double B1, double eps) {
  return 0.5 * thm31_g(params, eps) / (B1 * B1) - thm31_theta(params, eps);
}

double thm31_A(const ModelParams& params, double B1, double eps) {
  const double k = (params.p + 1.0) * (1.0 - thm31_theta(params, eps));
  const double h = thm31_h(params, B1, eps);
  return std::sqrt(2.0 * (k + 2.0) * std::max(0.0, h));
}

double thm31_B(const ModelParams& params, double B1, double eps) {
  const double k = (params.p + 1.0) * (1.0 - thm31_theta(params, eps));
  const double a = thm31_A(params, B1, eps);
  return a > 0.0 ? k / a : kInf;
}

Thm31Chain thm31_constants(const ModelParams& params, double B1) {
  const double p = params.p, r = params.r;
  if (!(r >= 1.0 && r < p)) throw InvalidArgument("growth chain needs 1 <= r < p");
  if (!(B1 > 0.0)) throw InvalidArgument("B1 must be positive");
  Thm31Chain c;
  c.s = (p - r) / (p - 1.0);
  c.B_limit = (p + 1.0) * B1 / std::sqrt((p + 3.0) * (p - 1.0));
  if (c.s >= 1.0) {
    c.delta0 = 1.0;
  } else {
    const double base = (p - 2.0 * params.gamma - 1.0) * (r + 1.0) / ((p + 1.0) * (1.0 - c.s));
    c.delta0 = base > 0.0 ? std::min(1.0, std::pow(base, 1.0 / r)) : 0.0;
  }
  if (!(c.delta0 > 0.0)) {
    c.reason = "delta0 = 0: needs 2 gamma + 1 < p";
    return c;
  }
  const auto g_pos = [&](double e) { return thm31_g(params, e) > 0.0; };
  c.delta1 = g_pos(c.delta0) ? c.delta0 : bisect_last(0.0, c.delta0, g_pos);
  const auto h_pos = [&](double e) { return thm31_h(params, B1, e) > 0.0; };
  c.delta2 = h_pos(c.delta1) ? c.delta1 : bisect_last(0.0, c.delta1, h_pos);
  const auto b_ok = [&](double e) { return thm31_B(params, B1, e) <= r / ((r + 1.0) * e); };
  c.delta3 = b_ok(c.delta2) ? c.delta2 : bisect_last(0.0, c.delta2, b_ok);
  if (!(c.delta1 > 0.0) || !(c.delta2 > 0.0) || !(c.delta3 > 0.0)) {
    c.reason = "empty interval for eps";
    return c;
  }
  c.eps0 = 0.5 * c.delta3;
  c.theta_eps0 = thm31_theta(params, c.eps0);
  c.g_eps0 = thm31_g(params, c.eps0);
  c.h_eps0 = thm31_h(params, B1, c.eps0);
  c.A = thm31_A(params, B1, c.eps0);
  c.B = r / ((r + 1.0) * c.eps0);
  c.B_eps0 = thm31_B(params, B1, c.eps0);
  c.feasible = c.g_eps0 > 0.0 && c.h_eps0 > 0.0 && c.A > 0.0 && c.B_eps0 <= c.B;
  if (!c.feasible) c.reason = "post-hoc check failed at eps0";
  return c;
}

Thm31Verdict thm31_check(const Grid& grid, const Field& u0, const Field& u1,
                         const ModelParams& /*params*/, const Thm31Chain& chain, double E0) {
  if (E0 < 0.0) return Thm31Verdict::case_i;
  if (!chain.feasible) return Thm31Verdict::not_applicable;
  if (E0 < inner(grid, u0, u1) / chain.B) return Thm31Verdict::case_ii;
  return Thm31Verdict::not_applicable;
}

double growth_functional(const Grid& grid, const Field& u, const Field& v,
                         const Thm31Chain& chain, double E) {
  return inner(grid, u, v) - chain.B * E;
}

double power_ratio_sup(double k, double m, double n) {
  if (!(m < k && k <= n)) throw InvalidArgument("power_ratio_sup needs m < k <= n");
  if (n - k <= 1e-12 * n) return 1.0;
  // log of the ratio at x = e^y, written to avoid overflow.
  const auto f = [&](double y) {
    const double a = (m - k) * y, b = (n - k) * y;
    const double hi = std::max(a, b);
    return -(hi + std::log(std::exp(a - hi) + std::exp(b - hi)));
  };
  double lo = -60.0, hi = 60.0;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 300 && hi - lo > 1e-14; ++it) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = f(d);
    }
  }
  return std::exp(f(0.5 * (lo + hi)));
}

Thm32Chain thm32_upper(const Grid& grid, const Field& u0, const Field& u1,
                       const ModelParams& params, const VariationalConstants& constants,
                       const BoundOverrides& overrides) {
  const double p = params.p, r = params.r, gm = params.gamma, beta = params.beta;
  Thm32Chain c;
  c.mu = overrides.mu;
  const double E0 = energy_E(grid, u0, u1, params);
  const double alpha_max = std::min((p - 1.0) / (2.0 * (p + 1.0)), gm / (gm + 1.0));
  if (gm == 0.0 || beta == 0.0) {
    c.reason = "gamma = 0 or beta = 0";
    return c;
  }
  if (!params.strict_growth()) {
    c.reason = "needs 2 gamma + 1 < p";
    return c;
  }
  if (!(E0 > 0.0)) {
    c.reason = E0 == 0.0 ? "E(0) = 0" : "E(0) < 0";
    return c;
  }
  if (!(c.mu > 0.0)) {
    c.reason = "mu must be positive";
    return c;
  }
  c.alpha = overrides.alpha.value_or(alpha_max);
  if (!(c.alpha > 0.0 && c.alpha <= alpha_max * (1.0 + 1e-15))) {
    c.status = ChainStatus::hypotheses_unmet;
    c.reason = "alpha outside (0, min((p-1)/(2(p+1)), gamma/(gamma+1))]";
    return c;
  }
  const double alpha = c.alpha;
  const double s = (p - r) / (p - 1.0);
  const double kappa = kappa_of(params);
  const double lambda1 = constants.lambda1;
  const double common = std::pow(r, r) * std::pow(E0, alpha * r) / std::pow(r + 1.0, r + 1.0);
  // M^r must exceed common * s / mu0_lead and common * (1 - s) / kappa.
  const double mu0_lead = (p + 2.0 * gm - 1.0) / 4.0 * lambda1;
  const double need = std::max(common * s / mu0_lead, common * (1.0 - s) / kappa);
  c.M = overrides.M_safety * std::pow(need, 1.0 / r);
  const double Mr = std::pow(c.M, r);
  c.mu0 = mu0_lead - common * s / Mr;
  c.zeta = kappa - common * (1.0 - s) / Mr;
  c.eps = overrides.eps.value_or((1.0 - alpha) / (2.0 * c.M));

  const double ik = 1.0 / (1.0 - alpha);
  c.s0 = 2.0 / (2.0 * (1.0 - alpha) - 1.0);
  c.C1 = c1_of(alpha, p, grid.volume());
  c.C2 = power_ratio_sup(2.0 * ik, 2.0, 2.0 * (gm + 1.0));
  const double eps = c.eps;
  c.mu1 = eps * std::min({(p + 2.0 * gm - 1.0) / 4.0, (p - 2.0 * gm - 1.0) * beta / (2.0 * (gm + 1.0)),
                          (p + 2.0 * gm + 3.0) / 2.0, c.zeta, c.mu / 2.0 * E0});
  const double ek = std::pow(eps, ik);
  const double pre = std::pow(2.0, 2.0 * alpha * ik);
  const double printed = std::max({ek / (2.0 * (1.0 - alpha)), ek * c.C1 * c.s0 / (p + 1.0),
                                    ek * (p + 1.0 - c.s0) / (p + 1.0) * c.C1,
                                    std::pow(eps / 2.0, ik) * c.C2});
  c.mu2_as_printed = pre * printed;
  c.mu2 = pre * std::max(1.0, printed);
  c.L0 = eps * (inner(grid, u0, u1) + 0.5 * grad_norm_sq(grid, u0));
  c.cond316_lhs = inner(grid, u0, u0);
  c.cond316_rhs = (p + 2.0 * gm + 3.0 + c.mu) / (2.0 * c.mu0) * E0;
  c.cond316 = c.cond316_lhs >= c.cond316_rhs && c.cond316_rhs >= 0.0;

  if (!(c.mu0 > 0.0 && c.zeta > 0.0)) {
    c.status = ChainStatus::hypotheses_unmet;
    c.reason = "mu0 or zeta not positive";
    return c;
  }
  if (!(1.0 - alpha - eps * c.M >= 0.0) || !(eps > 0.0)) {
    c.status = ChainStatus::hypotheses_unmet;
    c.reason = "eps violates 1 - alpha - eps M >= 0";
    return c;
  }
  const double expo = -alpha / (1.0 - alpha);
  if (c.L0 > 0.0) {
    c.T_upper = c.mu2 / c.mu1 * (1.0 - alpha) / alpha * std::pow(c.L0, expo);
    c.T_upper_as_printed = c.mu1 / c.mu2 * (1.0 - alpha) / alpha * std::pow(c.L0, expo);
  }
  const Thm31Chain t31 = thm31_constants(params, constants.poincare_B1);
  const Thm31Verdict v31 = thm31_check(grid, u0, u1, params, t31, E0);
  if (v31 != Thm31Verdict::case_ii) {
    c.status = ChainStatus::hypotheses_unmet;
    c.reason = "growth criterion (case ii) does not hold";
  } else if (!c.cond316) {
    c.status = ChainStatus::hypotheses_unmet;
    c.reason = "||u0||^2 condition fails";
  } else if (!(c.L0 > 0.0)) {
    c.status = ChainStatus::hypotheses_unmet;
    c.reason = "L(0) <= 0";
  } else {
    c.status = ChainStatus::applicable;
  }
  return c;
}

Thm33Chain thm33_upper(const Grid& grid, const Field& u0, const Field& u1,
                       const ModelParams& params, const VariationalConstants& /*constants*/,
                       const BoundOverrides& overrides) {
  const double p = params.p, r = params.r, gm = params.gamma, beta = params.beta;
  Thm33Chain c;
  const double E0 = energy_E(grid, u0, u1, params);
  if (gm == 0.0 || beta == 0.0) {
    c.reason = "gamma = 0 or beta = 0";
    return c;
  }
  if (!(E0 < 0.0)) {
    c.status = ChainStatus::hypotheses_unmet;
    c.reason = "E(0) >= 0";
    return c;
  }
  const double kappa = kappa_of(params);
  if (!(kappa > 0.0)) {
    c.status = ChainStatus::hypotheses_unmet;
    c.reason = "needs 2 gamma + 1 < p";
    return c;
  }
  const double alpha_max =
      std::min({(p - r) / ((p + 1.0) * r), (p - 1.0) / (2.0 * (p + 1.0)), gm / (gm + 1.0)});
  c.alpha = overrides.alpha.value_or(alpha_max);
  if (!(c.alpha > 0.0 && c.alpha <= alpha_max * (1.0 + 1e-15))) {
    c.status = ChainStatus::hypotheses_unmet;
    c.reason = "alpha outside its admissible range";
    return c;
  }
  const double alpha = c.alpha;
  c.H0 = -E0;
  c.C1 = c1_of(alpha, p, grid.volume());
  const double ik = 1.0 / (1.0 - alpha);
  c.C2 = power_ratio_sup(2.0 * ik, 2.0, 2.0 * (gm + 1.0));
  c.C3 = (1.0 + 1.0 / c.H0) * std::pow(grid.volume(), (p - r - (p + 1.0) * alpha * r) / (p + 1.0)) /
         (r + 1.0) * std::pow(1.0 / (p + 1.0), alpha * r);
  c.delta = std::pow(kappa / (2.0 * c.C3), 1.0 / r);
  const double cdr = c.C3 * std::pow(c.delta, r);
  c.margin_lp1 = kappa - cdr;
  c.margin_H = (p + 2.0 * gm + 3.0) / 2.0 - cdr;
  c.X = inner(grid, u0, u1) + 0.5 * grad_norm_sq(grid, u0);
  const double h_pow = std::pow(c.H0, 1.0 - alpha);
  double eps_bound = (1.0 - alpha) * (r + 1.0) * c.delta / r;
  if (c.X < 0.0) eps_bound = std::min(eps_bound, h_pow / (-c.X));
  c.eps = overrides.eps.value_or(0.5 * eps_bound);
  const double eps = c.eps;
  c.mu3 = eps * std::min({(p + 2.0 * gm - 1.0) / 4.0, (p - 2.0 * gm - 1.0) * beta / (2.0 * (gm + 1.0)),
                          c.margin_lp1, c.margin_H});
  const double ek = std::pow(eps, ik);
  const double pre = std::pow(2.0, 2.0 * alpha * ik);
  const double c1h = c.C1 * (1.0 + 1.0 / c.H0);
  const double last = std::pow(eps / 2.0, ik) * c.C2;
  c.mu4 = pre * std::max({ek / (2.0 * (1.0 - alpha)), 1.0 + ek * c1h, last});
  c.mu4_as_printed = pre * std::max({ek / (2.0 * (1.0 - alpha)), 1.0 + ek * c1h / (p + 1.0), last});
  c.L0 = h_pow + eps * c.X;
  if (!(eps > 0.0) || 1.0 - alpha - eps * r / ((r + 1.0) * c.delta) < 0.0) {
    c.status = ChainStatus::hypotheses_unmet;
    c.reason = "eps violates 1 - alpha - eps r/((r+1) delta) >= 0";
    return c;
  }
  if (!(c.L0 > 0.0)) {
    c.status = ChainStatus::hypotheses_unmet;
    c.reason = "L(0) <= 0";
    return c;
  }
  if (!(c.margin_lp1 > 0.0 && c.margin_H > 0.0 && c.mu3 > 0.0)) {
    c.status = ChainStatus::hypotheses_unmet;
    c.reason = "positivity margins fail";
    return c;
  }
  const double expo = -alpha / (1.0 - alpha);
  c.T_upper = c.mu4 / c.mu3 * (1.0 - alpha) / alpha * std::pow(c.L0, expo);
  c.T_upper_as_printed = c.mu3 / c.mu4 * (1.0 - alpha) / alpha * std::pow(c.L0, expo);
  c.status = ChainStatus::applicable;
  return c;
}

TailIntegral thm34_integral(double F0, double K1, double K2, double p) {
  if (!(K2 > 0.0) || !(p > 1.0) || !(K1 >= 0.0) || !(F0 >= 0.0))
    throw InvalidArgument("thm34 integral needs K2 > 0, p > 1, K1 >= 0, F0 >= 0");
  using boost::math::quadrature::gauss_kronrod;
  const auto integrand = [&](double y) { return 1.0 / (K1 + y + K2 * std::pow(y, p)); };
  // In s = log y: y / (K1 + y + K2 y^p).
  const auto in_log = [&](double s) {
    const double y = std::exp(s);
    return y / (K1 + y + K2 * std::pow(y, p));
  };
  TailIntegral out;
  double a = F0;
  if (F0 == 0.0) {
    if (K1 == 0.0) {
      out.truncated = out.with_tail = kInf;
      return out;
    }
    a = 1.0;
    out.truncated = gauss_kronrod<double, 31>::integrate(integrand, 0.0, a, 15, 1e-14);
  }
  const auto tail = [&](double y) { return std::pow(y, 1.0 - p) / ((p - 1.0) * K2); };
  for (int seg = 0; seg < 4000; ++seg) {
    const double la = std::log(a);
    const double lb = la + std::log(2.0);
    out.truncated += gauss_kronrod<double, 31>::integrate(in_log, la, lb, 15, 1e-14);
    a = std::exp(lb);
    const double t = tail(a);
    if (t < 1e-8 * out.truncated) {
      out.Y = a;
      out.with_tail = out.truncated + t;
      return out;
    }
    if (!std::isfinite(a)) break;
  }
  throw NumericalFailure("tail of the lower-bound integral did not become negligible");
}

LowerBounds thm34_lower(const Grid& grid, const Field& u0, const Field& u1,
                        const ModelParams& params, double Bstar) {
  if (!(Bstar > 0.0)) throw InvalidArgument("B* must be positive");
  const double p = params.p;
  LowerBounds lb;
  lb.F0 = power_sum(grid, u0, p + 1.0);
  lb.varpi = energy_E(grid, u0, u1, params);
  const double b2p = std::pow(Bstar, 2.0 * p);
  lb.K1 = lb.varpi > 0.0
              ? (p + 1.0) * (lb.varpi + b2p * std::pow(2.0, p - 2.0) * std::pow(2.0 * lb.varpi, p))
              : 0.0;
  lb.K2 = b2p * std::pow(2.0, 2.0 * p - 2.0) * std::pow(p + 1.0, -p);
  lb.K2_conservative = b2p * std::pow(2.0, 2.0 * p - 2.0) * std::pow(p + 1.0, 1.0 - p);
  lb.zero_data = lb.F0 == 0.0 && inner(grid, u1, u1) == 0.0;
  if (lb.zero_data) {
    lb.T_lower_34_truncated = lb.T_lower_34_with_tail = lb.T_lower_34_conservative = kInf;
    return lb;
  }
  const TailIntegral stated = thm34_integral(lb.F0, lb.K1, lb.K2, p);
  lb.T_lower_34_truncated = stated.truncated;
  lb.T_lower_34_with_tail = stated.with_tail;
  lb.T_lower_34_conservative = thm34_integral(lb.F0, lb.K1, lb.K2_conservative, p).truncated;
  return lb;
}

void thm35_lower(const Grid& grid, const Field& u0, const Field& u1, const ModelParams& params,
                 double Ca, double Cb, LowerBounds& out) {
  const double p = params.p;
  const double g = grad_norm_sq(grid, u0);
  double kirchhoff_term = 0.0;
  if (params.beta != 0.0)
    kirchhoff_term = params.beta / (2.0 * (params.gamma + 1.0)) * std::pow(g, params.gamma + 1.0);
  out.G0 = 0.5 * inner(grid, u1, u1) + 0.5 * g + 0.5 * lap_norm_sq(grid, u0) + kirchhoff_term;
  const double c = Ca * std::pow(Cb, p);
  out.C_eff = c * c * std::pow(2.0, p - 2.0);
  out.T_lower_35 = out.G0 > 0.0 ? std::pow(out.G0, 1.0 - p) / ((p - 1.0) * out.C_eff) : kInf;
}

LowerBounds lower_bounds(const Grid& grid, const Field& u0, const Field& u1,
                         const ModelParams& params, const VariationalConstants& constants) {
  LowerBounds lb = thm34_lower(grid, u0, u1, params, constants.embed_Bstar);
  thm35_lower(grid, u0, u1, params, constants.embed_Ca, constants.embed_Cb, lb);
  return lb;
}

bool sandwich(const BoundReport& report) {
  if (report.blowup.detected) {
    const double T = report.blowup.T_num;
    return report.T_lower <= T && T <= report.T_upper;
  }
  return !(std::isfinite(report.T_upper) && report.t_end >= report.T_upper);
}

BoundReport full_report(const Grid& grid, const Field& u0, const Field& u1,
                        const ModelParams& params, const VariationalConstants& constants,
                        const BoundOverrides& overrides, const BlowupEstimate& blowup,
                        double t_end) {
  BoundReport rep;
  rep.params = params;
  rep.constants = constants;
  rep.E0 = energy_E(grid, u0, u1, params);
  rep.inner_u0_u1 = inner(grid, u0, u1);
  rep.thm31 = thm31_constants(params, constants.poincare_B1);
  rep.thm31_verdict = thm31_check(grid, u0, u1, params, rep.thm31, rep.E0);
  rep.thm31_case_i = rep.thm31_verdict == Thm31Verdict::case_i;
  rep.thm31_case_ii = rep.thm31_verdict == Thm31Verdict::case_ii;
  rep.thm32 = thm32_upper(grid, u0, u1, params, constants, overrides);
  rep.thm33 = thm33_upper(grid, u0, u1, params, constants, overrides);
  rep.thm32_applicable = rep.thm32.status == ChainStatus::applicable;
  rep.thm33_applicable = rep.thm33.status == ChainStatus::applicable;
  rep.T_upper = kInf;
  if (rep.thm32_applicable) rep.T_upper = std::min(rep.T_upper, rep.thm32.T_upper);
  if (rep.thm33_applicable) rep.T_upper = std::min(rep.T_upper, rep.thm33.T_upper);
  try {
    rep.lowers = lower_bounds(grid, u0, u1, params, constants);
  } catch (const std::exception&) {
    rep.lowers = {};
    rep.lowers.T_lower_34_truncated = rep.lowers.T_lower_34_with_tail = std::nan("");
    rep.lowers.T_lower_35 = std::nan("");
  }
  rep.T_lower = 0.0;
  for (double v : {rep.lowers.T_lower_34_truncated, rep.lowers.T_lower_35})
    if (!std::isnan(v)) rep.T_lower = std::max(rep.T_lower, v);
  rep.blowup = blowup;
  rep.t_end = t_end;
  rep.sandwich_ok = sandwich(rep);
  return rep;
}

}  // namespace beamblow
