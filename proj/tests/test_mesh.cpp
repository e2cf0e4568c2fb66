#include <doctest.h>

#include <cmath>
#include <numbers>

#include "beamblow/errors.hpp"
#include "beamblow/mesh.hpp"
#include "support.hpp"

using namespace beamblow;
using beamblow::test::random_field;
using beamblow::test::rel;
using std::numbers::pi;

TEST_SUITE("mesh") {

TEST_CASE("make_grid examples") {
  const Grid g = make_grid(1, 1.0, 3);
  CHECK(g.spacing(0) == doctest::Approx(0.25));
  CHECK(g.weight() == doctest::Approx(0.25));
  CHECK(g.size() == 3);
  CHECK(g.coordinate(0, 0) == doctest::Approx(0.25));
  CHECK(g.coordinate(0, 1) == doctest::Approx(0.5));
  CHECK(g.coordinate(0, 2) == doctest::Approx(0.75));

  const Grid g2 = make_grid(2, 1.0, 3);
  CHECK(g2.size() == 9);
  CHECK(g2.weight() == doctest::Approx(0.0625));

  CHECK(make_grid(1, 2.0, 7).spacing(0) == doctest::Approx(0.25));

  const Grid rect = Grid::make(2, {2.0, 1.0}, {3, 4});
  CHECK(rect.size() == 12);
  CHECK(rect.spacing(0) == doctest::Approx(0.5));
  CHECK(rect.spacing(1) == doctest::Approx(0.2));
  CHECK(rect.weight() == doctest::Approx(0.1));
  CHECK(rect.volume() == doctest::Approx(2.0));
}

TEST_CASE("make_grid rejects bad input") {
  CHECK_THROWS_AS(make_grid(1, 0.0, 3), InvalidArgument);
  CHECK_THROWS_AS(make_grid(1, -1.0, 3), InvalidArgument);
  CHECK_THROWS_AS(make_grid(1, 1.0, 0), InvalidArgument);
  CHECK_THROWS_AS(make_grid(3, 1.0, 3), InvalidArgument);
}

TEST_CASE("single-node stencils") {
  const Grid g = make_grid(1, 1.0, 1);
  REQUIRE(g.spacing(0) == 0.5);
  const Field u(std::vector<double>{1.0});
  CHECK(laplacian_dirichlet(g, u)[0] == doctest::Approx(-8.0));
  CHECK(biharmonic_clamped(g, u)[0] == doctest::Approx(128.0));

  const double a = 1.7;
  const Field ua(std::vector<double>{a});
  CHECK(grad_norm_sq(g, ua) == doctest::Approx(4.0 * a * a));
  CHECK(lap_norm_sq(g, ua) == doctest::Approx(64.0 * a * a));
}

TEST_CASE("zero field maps to zero") {
  for (const Grid& g : {make_grid(1, 1.0, 9), make_grid(2, 1.0, 5)}) {
    const Field z = g.zeros();
    CHECK(laplacian_dirichlet(g, z) == z);
    CHECK(biharmonic_clamped(g, z) == z);
    CHECK(inner(g, z, z) == 0.0);
    CHECK(grad_norm_sq(g, z) == 0.0);
    CHECK(lap_norm_sq(g, z) == 0.0);
    for (double q : {1.0, 2.0, 4.0, kInfinityNorm}) CHECK(norm_lq(g, z, q) == 0.0);
  }
}

TEST_CASE("shape mismatch is an invalid argument") {
  const Grid g = make_grid(1, 1.0, 5);
  const Field u(4);
  CHECK_THROWS_AS(laplacian_dirichlet(g, u), InvalidArgument);
  CHECK_THROWS_AS(biharmonic_clamped(g, u), InvalidArgument);
  CHECK_THROWS_AS(inner(g, u, g.zeros()), InvalidArgument);
  CHECK_THROWS_AS(norm_lq(g, u, 2.0), InvalidArgument);
}

TEST_CASE("norm_lq") {
  const Grid g = make_grid(1, 1.0, 3);
  CHECK(norm_lq(g, Field(3, 1.0), 2.0) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));
  CHECK_THROWS_AS(norm_lq(g, Field(3, 1.0), 0.5), InvalidArgument);

  std::mt19937_64 rng(7);
  const Grid g64 = make_grid(1, 1.0, 64);
  const Field u = random_field(g64, rng);
  double sum = 0.0, mx = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    sum += g64.weight() * std::pow(std::abs(u[k]), 4.0);
    mx = std::max(mx, std::abs(u[k]));
  }
  CHECK(rel(norm_lq(g64, u, 4.0), std::pow(sum, 0.25)) <= 1e-14);
  CHECK(norm_lq(g64, u, kInfinityNorm) == mx);
}

TEST_CASE("grad_norm_sq of sin(pi x) approximates pi^2/2") {
  const Grid g = make_grid(1, 1.0, 255);
  const Field u = g.sample([](double x, double) { return std::sin(pi * x); });
  CHECK(rel(grad_norm_sq(g, u), pi * pi / 2.0) <= 1e-3);
}

TEST_CASE("Green identities and definiteness on random fields") {
  std::mt19937_64 rng(11);
  for (const Grid& g : {make_grid(1, 1.0, 64), make_grid(2, 1.0, 16)}) {
    for (int n = 0; n < 100; ++n) {
      const Field u = random_field(g, rng);
      const Field lu = laplacian_dirichlet(g, u);
      const Field bu = biharmonic_clamped(g, u);
      double neg_lu_u = 0.0, bu_u = 0.0;
      for (std::size_t k = 0; k < u.size(); ++k) {
        neg_lu_u -= g.weight() * lu[k] * u[k];
        bu_u += g.weight() * bu[k] * u[k];
      }
      CHECK(rel(grad_norm_sq(g, u), neg_lu_u) <= 1e-13);
      CHECK(rel(lap_norm_sq(g, u), bu_u) <= 1e-13);
      CHECK(neg_lu_u > 0.0);
      CHECK(bu_u > 0.0);
    }
  }
}

TEST_CASE("biharmonic symmetry N=64") {
  std::mt19937_64 rng(13);
  const Grid g = make_grid(1, 1.0, 64);
  for (int n = 0; n < 20; ++n) {
    const Field u = random_field(g, rng);
    const Field w = random_field(g, rng);
    const double a = inner(g, biharmonic_clamped(g, u), w);
    const double b = inner(g, u, biharmonic_clamped(g, w));
    const double scale = norm_lq(g, biharmonic_clamped(g, u), 2.0) * norm_lq(g, w, 2.0);
    CHECK(std::abs(a - b) <= 1e-12 * scale);
  }
}

namespace {

// max |A u - exact| over all nodes, on a grid with n interior nodes.
template <class Op, class U, class Exact>
double truncation(int n, Op op, U u, Exact exact) {
  const Grid g = make_grid(1, 1.0, n);
  const Field f = g.sample([&](double x, double) { return u(x); });
  const Field e = g.sample([&](double x, double) { return exact(x); });
  return beamblow::test::max_abs_diff(op(g, f), e);
}

double ratio_laplacian(auto u, auto exact) {
  return truncation(127, laplacian_dirichlet, u, exact) / truncation(255, laplacian_dirichlet, u, exact);
}

}  // namespace

TEST_CASE("consistency order 2") {
  const auto sine = [](double x) { return std::sin(pi * x); };
  const auto sine_lap = [](double x) { return -pi * pi * std::sin(pi * x); };
  const auto poly = [](double x) { return x * x * (1 - x) * (1 - x); };
  const auto poly_lap = [](double x) { return 2.0 - 12.0 * x + 12.0 * x * x; };

  const double sine_err = truncation(255, laplacian_dirichlet, sine, sine_lap);
  const double h = 1.0 / 256.0;
  CHECK(sine_err <= pi * pi * pi * pi / 12.0 * h * h * 1.01);
  CHECK(ratio_laplacian(sine, sine_lap) == doctest::Approx(4.0).epsilon(0.15));
  CHECK(ratio_laplacian(poly, poly_lap) == doctest::Approx(4.0).epsilon(0.15));

  // sin^2(pi x) is clamped and even about both ends, so the mirror ghosts are exact.
  const auto bump = [](double x) { return std::pow(std::sin(pi * x), 2); };
  const auto bump_b = [](double x) { return -8.0 * std::pow(pi, 4) * std::cos(2.0 * pi * x); };
  const double ratio = truncation(127, biharmonic_clamped, bump, bump_b) /
                       truncation(255, biharmonic_clamped, bump, bump_b);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("2D operators reduce to sums of 1D ones on separable fields") {
  const Grid g2 = make_grid(2, 1.0, 7);
  const Grid g1 = make_grid(1, 1.0, 7);
  const Field fx = g1.sample([](double x, double) { return std::sin(pi * x); });
  const Field u = g2.sample([](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
  const Field lu = laplacian_dirichlet(g2, u);
  const Field l1 = laplacian_dirichlet(g1, fx);
  for (int j = 0; j < 7; ++j)
    for (int i = 0; i < 7; ++i)
      CHECK(lu[i + 7 * j] == doctest::Approx(l1[i] * fx[j] + fx[i] * l1[j]).epsilon(1e-12));
}

}  // TEST_SUITE
