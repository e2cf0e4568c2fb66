#include <doctest.h>

#include <random>

#include "beamblow/errors.hpp"
#include "beamblow/linalg.hpp"
#include "beamblow/spectra.hpp"
#include "support.hpp"

using namespace beamblow;

TEST_SUITE("linalg") {

TEST_CASE("CG solves a Laplacian system") {
  const Grid g = make_grid(1, 1.0, 100);
  const LinearOperator A = make_operator(g, SpdOperator::dirichlet_laplacian);
  std::mt19937_64 rng(3);
  const Field x_true = beamblow::test::random_field(g, rng);
  Field b(g.size());
  A(x_true.values(), b.values());
  Field x(g.size());
  const CgResult r = conjugate_gradient(A, b.values(), x.values());
  CHECK(r.relative_residual <= 1e-10);
  CHECK(beamblow::test::max_abs_diff(x, x_true) <= 1e-6);
}

TEST_CASE("factorized inverse is an exact preconditioner") {
  for (const Grid& g : {make_grid(1, 1.0, 200), make_grid(2, 1.0, 20)}) {
    const LinearOperator A = make_operator(g, SpdOperator::clamped_biharmonic);
    const LinearOperator inv = factorized_inverse(g, A);
    std::mt19937_64 rng(5);
    const Field b = beamblow::test::random_field(g, rng);
    Field x(g.size()), back(g.size());
    inv(b.values(), x.values());
    A(x.values(), back.values());
    CHECK(beamblow::test::max_abs_diff(back, b) <= 1e-8);

    CgOptions o;
    o.preconditioner = inv;
    Field y(g.size());
    const CgResult r = conjugate_gradient(A, b.values(), y.values(), o);
    CHECK(r.iterations <= 2);
  }
}

TEST_CASE("zero right-hand side returns zero") {
  const Grid g = make_grid(1, 1.0, 10);
  Field x(g.size(), 3.0);
  const CgResult r = conjugate_gradient(make_operator(g, SpdOperator::h_form), g.zeros().values(), x.values());
  CHECK(r.iterations == 0);
  CHECK(x == g.zeros());
}

TEST_CASE("iteration cap raises ConvergenceFailure") {
  const Grid g = make_grid(1, 1.0, 200);
  std::mt19937_64 rng(7);
  const Field b = beamblow::test::random_field(g, rng);
  Field x(g.size());
  CgOptions o;
  o.max_iterations = 3;
  CHECK_THROWS_AS(conjugate_gradient(make_operator(g, SpdOperator::clamped_biharmonic), b.values(), x.values(), o),
                  ConvergenceFailure);
}

}  // TEST_SUITE
