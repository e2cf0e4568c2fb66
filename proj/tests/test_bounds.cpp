#include <doctest.h>

#include <cmath>
#include <numbers>

#include "beamblow/bounds.hpp"
#include "beamblow/errors.hpp"
#include "beamblow/functionals.hpp"
#include "beamblow/scenarios.hpp"
#include "support.hpp"

using namespace beamblow;
using beamblow::test::rel;
using std::numbers::pi;

namespace {

ModelParams linear_damping() {
  ModelParams p;
  p.r = 1.0;
  return p;
}

ModelParams half_gamma() {
  ModelParams p;
  p.gamma = 0.5;
  return p;
}

// Positive root of 64 e^2 + 6 pi^2 e - 12 pi^2.
double delta3_oracle() {
  const double pi2 = pi * pi;
  return (-6.0 * pi2 + std::sqrt(36.0 * pi2 * pi2 + 4.0 * 64.0 * 12.0 * pi2)) / 128.0;
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("growth chain with linear damping") {
  const ModelParams p = linear_damping();
  const Thm31Chain c = thm31_constants(p, 1.0 / pi);
  REQUIRE(c.feasible);
  CHECK(c.s == 1.0);
  CHECK(thm31_theta(p, 0.3) == 0.0);
  CHECK(c.delta0 == 1.0);
  CHECK(std::abs(c.delta3 - delta3_oracle()) <= 1e-6);
  CHECK(c.delta3 == doctest::Approx(0.9742).epsilon(1e-4));
  CHECK(c.eps0 == doctest::Approx(c.delta3 / 2));
  CHECK(std::abs(c.B - 1.0 / delta3_oracle()) <= 1e-6);
  CHECK(c.B == doctest::Approx(1.0265).epsilon(1e-4));
  CHECK(c.B == doctest::Approx(p.r / ((p.r + 1.0) * c.eps0)).epsilon(1e-14));
  CHECK(c.B_limit == doctest::Approx(0.36755).epsilon(1e-4));
  CHECK(rel(thm31_B(p, 1.0 / pi, 1e-6), c.B_limit) <= 1e-3);
}

TEST_CASE("growth chains are ordered and re-verify post hoc") {
  int feasible = 0;
  for (double pp : {3.0, 4.0, 6.0})
    for (double r : {1.0, 1.5, 2.5})
      for (double gamma : {0.0, 0.5, 1.0})
        for (double B1 : {0.05, 0.3, 1.0}) {
          const ModelParams p{pp, r, gamma, 1.0, 1};
          if (!(r < pp) || 2.0 * gamma + 1.0 > pp) continue;
          const Thm31Chain c = thm31_constants(p, B1);
          if (!c.feasible) continue;
          ++feasible;
          CHECK(c.eps0 > 0.0);
          CHECK(c.eps0 < c.delta3);
          CHECK(c.delta3 <= c.delta2);
          CHECK(c.delta2 <= c.delta1);
          CHECK(c.delta1 <= c.delta0);
          CHECK(thm31_g(p, c.eps0) > 0.0);
          CHECK(thm31_h(p, B1, c.eps0) > 0.0);
          CHECK(thm31_B(p, B1, c.eps0) <= c.B);
          CHECK(c.A > 0.0);
          CHECK(c.B > 0.0);
        }
  CHECK(feasible > 10);
}

TEST_CASE("growth chain infeasible when 2 gamma + 1 = p") {
  // delta0 = 0: no admissible epsilon.
  const Thm31Chain c = thm31_constants(ModelParams{}, 0.3);
  CHECK_FALSE(c.feasible);
  CHECK_FALSE(c.reason.empty());
}

TEST_CASE("thm31_check routing and growth functional") {
  const Grid g = make_grid(1, 1.0, 16);
  const ModelParams p = half_gamma();
  const Thm31Chain c = thm31_constants(p, 0.3);
  REQUIRE(c.feasible);
  const Field u0 = g.sample([](double x, double) { return std::sin(pi * x); });
  const double n2 = inner(g, u0, u0);
  CHECK(thm31_check(g, u0, u0, p, c, -1.0) == Thm31Verdict::case_i);
  const Field u1 = (2.0 * c.B / n2) * u0;
  CHECK(thm31_check(g, u0, u1, p, c, 1.0) == Thm31Verdict::case_ii);
  CHECK(thm31_check(g, u0, u1, p, c, 3.0) == Thm31Verdict::not_applicable);
  CHECK(thm31_check(g, u0, -1.0 * u0, p, c, 0.0) == Thm31Verdict::not_applicable);
  CHECK(thm31_check(g, u0, g.zeros(), p, c, 0.5) == Thm31Verdict::not_applicable);

  CHECK(growth_functional(g, g.zeros(), g.zeros(), c, 0.0) == 0.0);
  const double E0 = energy_E(g, u0, u1, p);
  CHECK(growth_functional(g, u0, u1, c, E0) == doctest::Approx(inner(g, u0, u1) - c.B * E0).epsilon(1e-15));
}

TEST_CASE("power_ratio_sup against a scan") {
  for (auto [k, m, n] : {std::tuple{2.5, 2.0, 3.0}, std::tuple{3.0, 2.0, 4.0}, std::tuple{2.4, 2.0, 3.0}}) {
    double best = 0.0;
    for (int i = -4000; i <= 4000; ++i) {
      const double x = std::exp(i * 1e-3);
      best = std::max(best, std::pow(x, k) / (std::pow(x, m) + std::pow(x, n)));
    }
    CHECK(power_ratio_sup(k, m, n) == doctest::Approx(best).epsilon(1e-6));
  }
  // k = n: the ratio increases to 1 without attaining it.
  CHECK(power_ratio_sup(4.0, 2.0, 4.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("tail integral oracle and monotonicity") {
  // varpi = 0, p = 3, B* = 1: K1 = 0, K2 = 2^4 / 4^3.
  const double K2 = std::pow(2.0, 4) / std::pow(4.0, 3);
  CHECK(K2 == 0.25);
  const TailIntegral t = thm34_integral(1.0, 0.0, K2, 3.0);
  CHECK(std::abs(t.with_tail - 0.5 * std::log(5.0)) <= 1e-8);
  CHECK(t.truncated <= t.with_tail);
  CHECK((t.with_tail - t.truncated) / t.with_tail < 1e-7);

  double prev = std::numeric_limits<double>::infinity();
  for (double F0 : {0.1, 1.0, 10.0, 100.0}) {
    const double v = thm34_integral(F0, 0.0, K2, 3.0).truncated;
    CHECK(v <= prev);
    prev = v;
  }
  prev = std::numeric_limits<double>::infinity();
  for (double K1 : {0.0, 0.5, 2.0, 10.0}) {
    const double v = thm34_integral(1.0, K1, K2, 3.0).truncated;
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("lower bounds on data") {
  const Grid g = make_grid(1, 1.0, 32);
  const ModelParams p = half_gamma();
  const Field u0 = g.sample([](double x, double) { return 3.0 * std::sin(pi * x); });
  const Field u1 = g.sample([](double x, double) { return std::sin(2.0 * pi * x); });
  const double Bstar = 0.07, Ca = 0.35, Cb = 0.05;
  LowerBounds lb = thm34_lower(g, u0, u1, p, Bstar);
  thm35_lower(g, u0, u1, p, Ca, Cb, lb);
  const double E0 = energy_E(g, u0, u1, p);
  CHECK(lb.varpi == doctest::Approx(E0).epsilon(1e-15));
  CHECK(lb.F0 == doctest::Approx(power_sum(g, u0, p.p + 1.0)).epsilon(1e-15));
  CHECK(lb.K2 == doctest::Approx(std::pow(Bstar, 2 * p.p) * std::pow(2.0, 2 * p.p - 2) * std::pow(p.p + 1.0, -p.p)));
  CHECK(lb.T_lower_34_truncated <= lb.T_lower_34_with_tail);
  CHECK(lb.T_lower_34_truncated >= 0.0);
  CHECK(lb.G0 == doctest::Approx(E0 + lb.F0 / (p.p + 1.0)).epsilon(1e-12));
  CHECK(lb.C_eff == doctest::Approx(std::pow(Ca * std::pow(Cb, p.p), 2) * std::pow(2.0, p.p - 2)).epsilon(1e-14));
  CHECK(lb.T_lower_35 ==
        doctest::Approx(std::pow(lb.G0, 1.0 - p.p) / ((p.p - 1.0) * lb.C_eff)).epsilon(1e-14));

  // G0 = 1, p = 3, C_eff = 1 gives 1/2.
  CHECK(std::pow(1.0, 1.0 - 3.0) / ((3.0 - 1.0) * 1.0) == 0.5);

  LowerBounds scaled = thm34_lower(g, 2.0 * u0, 2.0 * u1, p, Bstar);
  thm35_lower(g, 2.0 * u0, 2.0 * u1, p, Ca, Cb, scaled);
  CHECK(scaled.T_lower_35 < lb.T_lower_35);

  LowerBounds zero = thm34_lower(g, g.zeros(), g.zeros(), p, Bstar);
  thm35_lower(g, g.zeros(), g.zeros(), p, Ca, Cb, zero);
  CHECK(zero.zero_data);
  CHECK(std::isinf(zero.T_lower_35));
}

TEST_CASE("negative energy drops the varpi power in K1") {
  const Grid g = make_grid(1, 1.0, 32);
  const ModelParams p = half_gamma();
  const InitialData d = make_preset("negative_energy", g, p, {});
  const LowerBounds lb = thm34_lower(g, d.u0, d.u1, p, 0.07);
  CHECK(lb.varpi < 0.0);
  CHECK(lb.K1 == 0.0);
}

TEST_CASE("upper chains: status routing and positivity") {
  const Grid g = make_grid(1, 1.0, 64);
  const ModelParams p = half_gamma();
  const VariationalConstants c = compute_constants(g, p);
  const Thm31Chain growth = thm31_constants(p, c.poincare_B1);
  REQUIRE(growth.feasible);

  const InitialData high = construct_energy_level(g, p, 10.0 * c.well_depth_d, growth.B);
  const Thm32Chain t32 = thm32_upper(g, high.u0, high.u1, p, c);
  CHECK(t32.mu0 > 0.0);
  CHECK(t32.zeta > 0.0);
  CHECK(t32.alpha == doctest::Approx(std::min((p.p - 1) / (2 * (p.p + 1)), p.gamma / (p.gamma + 1))));
  CHECK(t32.L0 > 0.0);
  if (t32.status == ChainStatus::applicable) CHECK(t32.T_upper > 0.0);

  const InitialData neg = make_preset("negative_energy", g, p, {});
  const Thm33Chain t33 = thm33_upper(g, neg.u0, neg.u1, p, c);
  REQUIRE(t33.status == ChainStatus::applicable);
  CHECK(t33.H0 > 0.0);
  CHECK(t33.margin_lp1 > 0.0);
  CHECK(t33.margin_H > 0.0);
  CHECK(t33.L0 >= std::pow(t33.H0, 1.0 - t33.alpha));
  CHECK(t33.T_upper > 0.0);
  CHECK(thm32_upper(g, neg.u0, neg.u1, p, c).status != ChainStatus::applicable);

  CHECK(thm33_upper(g, high.u0, high.u1, p, c).status == ChainStatus::hypotheses_unmet);

  ModelParams flat = p;
  flat.gamma = 0.0;
  flat.r = 1.0;
  CHECK(thm32_upper(g, high.u0, high.u1, flat, c).status == ChainStatus::not_applicable);
  CHECK(thm33_upper(g, neg.u0, neg.u1, flat, c).status == ChainStatus::not_applicable);
  ModelParams no_beta = p;
  no_beta.beta = 0.0;
  CHECK(thm32_upper(g, high.u0, high.u1, no_beta, c).status == ChainStatus::not_applicable);

  // E(0) = 0 makes an entry of mu1 vanish.
  CHECK(thm32_upper(g, g.zeros(), g.zeros(), p, c).status == ChainStatus::not_applicable);
}

TEST_CASE("full report on zero data") {
  const Grid g = make_grid(1, 1.0, 32);
  const ModelParams p = half_gamma();
  const VariationalConstants c = compute_constants(g, p);
  const BlowupEstimate none;
  const BoundReport r = full_report(g, g.zeros(), g.zeros(), p, c, {}, none, 1.0);
  CHECK_FALSE(r.thm31_case_i);
  CHECK_FALSE(r.thm31_case_ii);
  CHECK_FALSE(r.thm32_applicable);
  CHECK_FALSE(r.thm33_applicable);
  CHECK(std::isinf(r.T_upper));
  CHECK(r.sandwich_ok);
}

}  // TEST_SUITE
