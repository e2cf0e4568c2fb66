#include <doctest.h>

#include <cmath>
#include <numbers>

#include "beamblow/bounds.hpp"
#include "beamblow/errors.hpp"
#include "beamblow/functionals.hpp"
#include "beamblow/scenarios.hpp"
#include "support.hpp"

using namespace beamblow;
using std::numbers::pi;

namespace {

ModelParams half_gamma() {
  ModelParams p;
  p.gamma = 0.5;
  return p;
}

}  // namespace

TEST_SUITE("scenarios") {

TEST_CASE("eigen pair basis") {
  const Grid g = make_grid(1, 1.0, 64);
  const EigenBasis b = eigen_pair_basis(g);
  const Field s1 = g.sample([](double x, double) { return std::sqrt(2.0) * std::sin(pi * x); });
  const Field s2 = g.sample([](double x, double) { return std::sqrt(2.0) * std::sin(2.0 * pi * x); });
  const auto up_to_sign = [&](const Field& v, const Field& s) {
    return std::min(beamblow::test::max_abs_diff(v, s), beamblow::test::max_abs_diff(v, -1.0 * s));
  };
  CHECK(up_to_sign(b.v1, s1) <= 1e-8);
  CHECK(up_to_sign(b.v2, s2) <= 1e-8);
  CHECK(std::abs(inner(g, b.v1, b.v2)) <= 1e-10);
  CHECK(std::abs(norm_lq(g, b.v1, 2.0) - 1.0) <= 1e-12);
  CHECK(std::abs(norm_lq(g, b.v2, 2.0) - 1.0) <= 1e-12);
  CHECK_THROWS_AS(eigen_pair_basis(make_grid(1, 1.0, 1)), InvalidArgument);
}

TEST_CASE("chi") {
  const Grid g = make_grid(1, 1.0, 64);
  const ModelParams p = half_gamma();
  const Field v1 = eigen_pair_basis(g).v1;
  CHECK(chi(0.0, g, v1, p) == 0.0);
  CHECK(chi(1e-3, g, v1, p) > 0.0);
  double prev = 0.0;
  bool seen_negative = false;
  for (double r1 = 1e3; r1 <= 1e8; r1 *= 10.0) {
    const double x = chi(r1, g, v1, p);
    if (seen_negative) CHECK(x < prev);
    seen_negative = seen_negative || x < 0.0;
    prev = x;
  }
  CHECK(seen_negative);
  // chi(r1) is the energy of (r1 v1, r1 v1) minus nothing else.
  const double r1 = 3.0;
  CHECK(chi(r1, g, v1, p) == doctest::Approx(energy_E(g, r1 * v1, r1 * v1, p)).epsilon(1e-13));
}

TEST_CASE("energy-level construction") {
  const Grid g = make_grid(1, 1.0, 128);
  const ModelParams p = half_gamma();
  const VariationalConstants c = compute_constants(g, p);
  const Thm31Chain chain = thm31_constants(p, c.poincare_B1);
  REQUIRE(chain.feasible);
  const double d = c.well_depth_d;
  for (double R : {-5.0, -1.0, 0.5, d, 10.0 * d, 100.0}) {
    CAPTURE(R);
    const InitialData data = construct_energy_level(g, p, R, chain.B);
    const double E0 = energy_E(g, data.u0, data.u1, p);
    CHECK(std::abs(E0 - R) <= 1e-9 * std::max(1.0, std::abs(R)));
    CHECK(inner(g, data.u0, data.u1) > chain.B * R);
    const Thm31Verdict v = thm31_check(g, data.u0, data.u1, p, chain, E0);
    CHECK(v == (R < 0.0 ? Thm31Verdict::case_i : Thm31Verdict::case_ii));

    const InitialData again = construct_energy_level(g, p, R, chain.B);
    CHECK(again.r1 == data.r1);
    CHECK(again.r2 == data.r2);
    CHECK(again.u0 == data.u0);
    CHECK(again.u1 == data.u1);
  }
}

TEST_CASE("presets") {
  const Grid g = make_grid(1, 1.0, 64);
  const ModelParams p = half_gamma();
  PresetOptions zero;
  zero.amplitude = 0.0;
  const InitialData flat = make_preset("sine_bump", g, p, zero);
  CHECK(flat.u0 == g.zeros());
  CHECK(flat.u1 == g.zeros());
  CHECK(energy_E(g, flat.u0, flat.u1, p) == 0.0);

  const InitialData bump = make_preset("sine_bump", g, p, {});
  CHECK(bump.u1 == g.zeros());
  CHECK(std::abs(norm_lq(g, bump.u0, 2.0) - 1.0) <= 1e-12);

  const InitialData neg = make_preset("negative_energy", g, p, {});
  CHECK(energy_E(g, neg.u0, neg.u1, p) < 0.0);
  CHECK(classify(g, neg.u0, p) == WellClass::unstable_V);

  CHECK_THROWS_AS(make_preset("nonsense", g, p, {}), InvalidArgument);
}

TEST_CASE("negative energy is impossible when the Kirchhoff quartic dominates") {
  // p = 3, gamma = 1, beta = 1: J(u) >= 1/2 ||u||_H^2 + (1 - C_a^4)/4 ||grad u||^4 > 0.
  const Grid g = make_grid(1, 1.0, 64);
  CHECK_THROWS_AS(make_preset("negative_energy", g, ModelParams{}, {}), ConstructionFailure);
}

}  // TEST_SUITE
