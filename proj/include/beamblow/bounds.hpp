#pragma once

// Blow-up criteria and blow-up-time bounds evaluated on discrete data.
//
// Every chain takes its abstract constants (lambda1, B1, C, B*, C_a, C_b)
// from the same grid the data lives on.

#include <optional>
#include <string>
#include <string_view>

#include "beamblow/blowup.hpp"
#include "beamblow/mesh.hpp"
#include "beamblow/params.hpp"
#include "beamblow/spectra.hpp"

namespace beamblow {

enum class ChainStatus { applicable, not_applicable, hypotheses_unmet };
std::string_view to_string(ChainStatus s);

// Growth constants A, B with d/dt(F) >= A F for F = (u, u_t) - B E.
struct Thm31Chain {
  bool feasible = false;
  std::string reason;
  double s = 0.0;
  double delta0 = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
  double eps0 = 0.0;
  double theta_eps0 = 0.0;
  double g_eps0 = 0.0;
  double h_eps0 = 0.0;
  // B(eps0) from the A(eps) form; at most B by construction.
  double B_eps0 = 0.0;
  double A = 0.0;
  double B = 0.0;
  // lim B(eps) as eps -> 0.
  double B_limit = 0.0;
};

double thm31_theta(const ModelParams& params, double eps);
double thm31_g(const ModelParams& params, double eps);
double thm31_h(const ModelParams& params, double B1, double eps);
double thm31_A(const ModelParams& params, double B1, double eps);
double thm31_B(const ModelParams& params, double B1, double eps);

Thm31Chain thm31_constants(const ModelParams& params, double B1);

enum class Thm31Verdict { case_i, case_ii, not_applicable };
std::string_view to_string(Thm31Verdict v);

Thm31Verdict thm31_check(const Grid& grid, const Field& u0, const Field& u1,
                         const ModelParams& params, const Thm31Chain& chain, double E0);

// (u, v) - B E
double growth_functional(const Grid& grid, const Field& u, const Field& v,
                         const Thm31Chain& chain, double E);

// Free parameters of the upper-bound chains.
struct BoundOverrides {
  double mu = 1.0;
  double M_safety = 2.0;
  std::optional<double> alpha;
  std::optional<double> eps;
};

// sup_{x > 0} x^k / (x^m + x^n) for m < k <= n, by golden section on log x.
double power_ratio_sup(double k, double m, double n);

struct Thm32Chain {
  ChainStatus status = ChainStatus::not_applicable;
  std::string reason;
  double alpha = 0.0;
  double mu = 0.0;
  double M = 0.0;
  double mu0 = 0.0;
  double zeta = 0.0;
  double eps = 0.0;
  double C1 = 0.0;
  double s0 = 0.0;
  double C2 = 0.0;
  double mu1 = 0.0;
  // Includes the unit coefficient of H(t).
  double mu2 = 0.0;
  double mu2_as_printed = 0.0;
  double L0 = 0.0;
  // ||u0||^2 and (p + 2 gamma + 3 + mu) E0 / (2 mu0).
  double cond316_lhs = 0.0;
  double cond316_rhs = 0.0;
  bool cond316 = false;
  // (mu2/mu1) ((1-alpha)/alpha) L0^{-alpha/(1-alpha)}
  double T_upper = 0.0;
  // Same with mu1/mu2 as the prefactor.
  double T_upper_as_printed = 0.0;
};

Thm32Chain thm32_upper(const Grid& grid, const Field& u0, const Field& u1,
                       const ModelParams& params, const VariationalConstants& constants,
                       const BoundOverrides& overrides = {});

struct Thm33Chain {
  ChainStatus status = ChainStatus::not_applicable;
  std::string reason;
  double alpha = 0.0;
  double H0 = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double C3 = 0.0;
  double delta = 0.0;
  // (u0, u1) + 1/2 ||grad u0||^2
  double X = 0.0;
  double eps = 0.0;
  double margin_lp1 = 0.0;  // (p-2gamma-1)/(2(p+1)) - C3 delta^r
  double margin_H = 0.0;    // (p+2gamma+3)/2 - C3 delta^r
  double mu3 = 0.0;
  // Without the 1/(p+1) on the C1 entry, which the estimate does not produce.
  double mu4 = 0.0;
  double mu4_as_printed = 0.0;
  double L0 = 0.0;
  double T_upper = 0.0;
  double T_upper_as_printed = 0.0;
};

Thm33Chain thm33_upper(const Grid& grid, const Field& u0, const Field& u1,
                       const ModelParams& params, const VariationalConstants& constants,
                       const BoundOverrides& overrides = {});

// Integral of 1/(K1 + y + K2 y^p) over [F0, inf), on doubling segments
// with Gauss-Kronrod in log y, stopped once the analytic tail bound
// Y^{1-p}/((p-1) K2) is below 1e-8 of the partial integral.
struct TailIntegral {
  double truncated = 0.0;
  double with_tail = 0.0;
  double Y = 0.0;
};
TailIntegral thm34_integral(double F0, double K1, double K2, double p);

struct LowerBounds {
  double F0 = 0.0;
  double varpi = 0.0;
  double K1 = 0.0;
  double K2 = 0.0;
  double T_lower_34_truncated = 0.0;
  double T_lower_34_with_tail = 0.0;
  // With K2 = B*^{2p} 2^{2p-2} (p+1)^{1-p}, the factor the estimate yields.
  double K2_conservative = 0.0;
  double T_lower_34_conservative = 0.0;
  double G0 = 0.0;
  double C_eff = 0.0;
  double T_lower_35 = 0.0;
  // u0 = u1 = 0: both lower bounds are +inf.
  bool zero_data = false;
};

LowerBounds thm34_lower(const Grid& grid, const Field& u0, const Field& u1,
                        const ModelParams& params, double Bstar);
// Fills the G0, C_eff and T_lower_35 fields of `out`.
void thm35_lower(const Grid& grid, const Field& u0, const Field& u1, const ModelParams& params,
                 double Ca, double Cb, LowerBounds& out);
LowerBounds lower_bounds(const Grid& grid, const Field& u0, const Field& u1,
                         const ModelParams& params, const VariationalConstants& constants);

struct BoundReport {
  ModelParams params;
  VariationalConstants constants;
  double E0 = 0.0;
  double inner_u0_u1 = 0.0;
  Thm31Chain thm31;
  Thm31Verdict thm31_verdict = Thm31Verdict::not_applicable;
  Thm32Chain thm32;
  Thm33Chain thm33;
  LowerBounds lowers;
  bool thm31_case_i = false;
  bool thm31_case_ii = false;
  bool thm32_applicable = false;
  bool thm33_applicable = false;
  // Min over applicable upper chains; +inf when none applies.
  double T_upper = 0.0;
  // max(T_lower_34_truncated, T_lower_35).
  double T_lower = 0.0;
  BlowupEstimate blowup;
  double t_end = 0.0;
  bool sandwich_ok = true;
};

// Without a detected blow-up the sandwich fails only when the run went past
// an applicable upper bound.
bool sandwich(const BoundReport& report);

BoundReport full_report(const Grid& grid, const Field& u0, const Field& u1,
                        const ModelParams& params, const VariationalConstants& constants,
                        const BoundOverrides& overrides, const BlowupEstimate& blowup,
                        double t_end);

}  // namespace beamblow
