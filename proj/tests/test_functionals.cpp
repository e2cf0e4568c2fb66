#include <doctest.h>

#include <cmath>
#include <numbers>

#include "beamblow/errors.hpp"
#include "beamblow/functionals.hpp"
#include "support.hpp"

using namespace beamblow;
using beamblow::test::random_field;
using beamblow::test::rel;
using std::numbers::pi;

namespace {

ModelParams half_gamma() {
  ModelParams p;
  p.gamma = 0.5;
  return p;
}

// Random combination of the first few sine modes.
Field smooth_field(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Field u(g.size());
  for (int k = 1; k <= 4; ++k) {
    const double a = unit(rng) / k;
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += a * std::sin(k * pi * g.coordinate(0, static_cast<int>(i)));
  }
  return u;
}

}  // namespace

TEST_SUITE("functionals") {

TEST_CASE("kirchhoff examples") {
  ModelParams p;
  CHECK(kirchhoff(0.0, p) == 1.0);
  p.beta = 0.0;
  CHECK(kirchhoff(5.0, p) == 1.0);
  p.beta = 1.0;
  p.gamma = 2.0;
  CHECK(kirchhoff(1.0, p) == 2.0);
  CHECK_THROWS_AS(kirchhoff(-1.0, p), InvalidArgument);
}

TEST_CASE("zero field") {
  const Grid g = make_grid(1, 1.0, 16);
  const ModelParams p;
  std::mt19937_64 rng(1);
  const Field v = random_field(g, rng);
  CHECK(potential_J(g, g.zeros(), p) == 0.0);
  CHECK(nehari_I(g, g.zeros(), p) == 0.0);
  CHECK(energy_E(g, g.zeros(), v, p) == doctest::Approx(0.5 * inner(g, v, v)).epsilon(1e-15));
  CHECK(classify(g, g.zeros(), p) == WellClass::stable_W);
}

TEST_CASE("single-node Nehari functional") {
  const Grid g = make_grid(1, 1.0, 1);
  ModelParams p;
  p.beta = 0.0;
  for (double a : {0.5, 2.0, 7.0}) {
    const Field u(std::vector<double>{a});
    CHECK(nehari_I(g, u, p) == doctest::Approx(68.0 * a * a - 0.5 * std::pow(a, 4)).epsilon(1e-13));
  }
  const Field root(std::vector<double>{std::sqrt(136.0)});
  CHECK(std::abs(nehari_I(g, root, p)) <= 1e-10);
  CHECK(classify(g, root, p) == WellClass::near_nehari);
  CHECK(classify(g, 0.5 * root, p) == WellClass::stable_W);
  CHECK(classify(g, 2.0 * root, p) == WellClass::unstable_V);
}

TEST_CASE("energy decomposition identity") {
  std::mt19937_64 rng(2);
  for (const ModelParams& p : {ModelParams{}, half_gamma(), ModelParams{5.0, 1.5, 1.5, 2.0, 1}}) {
    const Grid g = make_grid(1, 1.0, 64);
    for (int n = 0; n < 50; ++n) {
      const Field u = (n % 2 ? 30.0 : 1.0) * smooth_field(g, rng);
      const Field v = random_field(g, rng);
      const Norms m = norms_of(g, u, p);
      const double H = m.grad_sq + m.lap_sq;
      const double decomposed = 0.5 * inner(g, v, v) + (p.p - 1.0) / (2.0 * (p.p + 1.0)) * H +
                                (1.0 / (2.0 * (p.gamma + 1.0)) - 1.0 / (p.p + 1.0)) * p.beta *
                                    std::pow(m.grad_sq, p.gamma + 1.0) +
                                nehari_I(g, u, p) / (p.p + 1.0);
      const double E = energy_E(g, u, v, p);
      const double scale = 0.5 * inner(g, v, v) + H + p.beta * std::pow(m.grad_sq, p.gamma + 1.0) + m.lp1_pow;
      CHECK(std::abs(E - decomposed) <= 1e-12 * scale);
      CHECK(std::abs(E - 0.5 * inner(g, v, v) - potential_J(g, u, p)) <= 1e-15 * scale);
    }
  }
}

TEST_CASE("snapshot agrees with the individual functionals") {
  const Grid g = make_grid(1, 1.0, 32);
  const ModelParams p = half_gamma();
  std::mt19937_64 rng(3);
  const Field u = smooth_field(g, rng), v = random_field(g, rng);
  const FunctionalSnapshot s = snapshot(g, u, v, p);
  CHECK(s.J == potential_J(g, u, p));
  CHECK(s.I == nehari_I(g, u, p));
  CHECK(s.E == doctest::Approx(energy_E(g, u, v, p)).epsilon(1e-15));
  CHECK(s.linf_u == norm_lq(g, u, kInfinityNorm));
  CHECK(s.classification == classify(g, u, p));
}

TEST_CASE("fiber map changes sign") {
  const Grid g = make_grid(1, 1.0, 64);
  const ModelParams p = half_gamma();
  std::mt19937_64 rng(4);
  for (int n = 0; n < 20; ++n) {
    Field u = smooth_field(g, rng);
    u *= 1.0 / norm_lq(g, u, p.p + 1.0);
    int changes = 0;
    for (int k = -10; k < 10; ++k)
      if ((nehari_I(g, std::pow(2.0, k) * u, p) > 0.0) != (nehari_I(g, std::pow(2.0, k + 1) * u, p) > 0.0))
        ++changes;
    CHECK(changes == 1);
    CHECK(nehari_I(g, std::pow(2.0, -10) * u, p) > 0.0);
    CHECK(nehari_I(g, std::pow(2.0, 10) * u, p) < 0.0);
    CHECK(classify(g, std::pow(2.0, -10) * u, p) == WellClass::stable_W);
  }
}

TEST_CASE("non-finite field is indeterminate") {
  const Grid g = make_grid(1, 1.0, 4);
  Field u(4, 1.0);
  u[2] = std::nan("");
  CHECK(classify(g, u, ModelParams{}) == WellClass::indeterminate);
}

TEST_CASE("lemma21 verdicts") {
  const Grid g = make_grid(1, 1.0, 64);
  const ModelParams p = half_gamma();
  const VariationalConstants c = compute_constants(g, p);
  const Lemma21Verdict zero = lemma21_verdict(g, g.zeros(), p, c);
  CHECK(zero.J_le_d);
  CHECK_FALSE(zero.I_neg);
  CHECK_FALSE(zero.H_norm_gt_lambda_star);
  CHECK(zero.consistent);

  // I < 0 forces ||u||_H > lambda* with no condition on J.
  std::mt19937_64 rng(5);
  int negatives = 0;
  for (int n = 0; n < 200; ++n) {
    const Field u = std::pow(10.0, 1.0 + 3.0 * (n % 7) / 6.0) * smooth_field(g, rng);
    const Lemma21Verdict v = lemma21_verdict(g, u, p, c);
    if (v.I_neg) {
      ++negatives;
      CHECK(v.H_norm_gt_lambda_star);
    }
    CHECK(v.consistent);
  }
  CHECK(negatives > 0);
}

}  // TEST_SUITE
