#pragma once

// Conjugate gradients for the symmetric positive definite stencil systems.
//
// Every operator here is symmetric in the weighted inner product with a
// uniform node weight, hence also in the plain Euclidean one, so the solver
// works with plain dot products.

#include <cstddef>
#include <functional>
#include <span>

#include "beamblow/mesh.hpp"

namespace beamblow {

// out = A x
using LinearOperator = std::function<void(std::span<const double> x, std::span<double> out)>;

struct CgOptions {
  double relative_tolerance = 1e-10;
  // 0 selects 10 * n + 100.
  int max_iterations = 0;
  // Applies M^{-1} for an SPD M close to A; empty means none.
  LinearOperator preconditioner;
};

struct CgResult {
  int iterations = 0;
  // ||b - A x|| / ||b|| recomputed from scratch after the last iteration.
  double relative_residual = 0.0;
};

// Solves A x = b starting from the contents of x. A zero right-hand side
// returns x = 0 without iterating. Throws ConvergenceFailure when the
// recursive residual does not reach the tolerance within max_iterations.
CgResult conjugate_gradient(const LinearOperator& apply, std::span<const double> b,
                            std::span<double> x, const CgOptions& options = {});

// x -> A^{-1} x from a sparse LDL^T factorization of a grid operator whose
// stencil reaches at most two nodes along each axis. A is assembled by
// applying it to 25 (2D) or 5 (1D) comb vectors.
LinearOperator factorized_inverse(const Grid& grid, const LinearOperator& apply);

}  // namespace beamblow
