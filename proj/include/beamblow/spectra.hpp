#pragma once

// Discrete spectral and embedding constants of a grid.
//
// All constants are best constants of the discrete operators on the given
// grid, not approximations of the continuum ones that carry any guarantee.

#include <cstdint>
#include <span>

#include "beamblow/linalg.hpp"
#include "beamblow/mesh.hpp"
#include "beamblow/params.hpp"

namespace beamblow {

enum class SpdOperator {
  clamped_biharmonic,   // B
  dirichlet_laplacian,  // -L
  h_form,               // B - L, the form of ||.||_H^2
  identity,
};

// The quadratic form each energy norm is built from.
enum class EnergyNorm { grad, lap, h, l2 };

SpdOperator form_of(EnergyNorm norm);
LinearOperator make_operator(const Grid& grid, SpdOperator op);

struct EigenOptions {
  // Relative change of the eigenvalue between iterations.
  double tolerance = 1e-10;
  // ||A e - value e||; iteration also stops once this stagnates.
  double residual_tolerance = 1e-10;
  double inner_tolerance = 1e-12;
  int max_iterations = 1000;
};

struct EigenPair {
  double value = 0.0;
  // Weighted L2 norm 1; sign fixed so that its inner product with a
  // left-to-right ramp is positive.
  Field field;
  // ||A e - value e|| in the weighted norm.
  double residual = 0.0;
  int iterations = 0;
};

// Smallest eigenpair by inverse power iteration, restricted to the weighted
// orthogonal complement of `deflate` (each entry of unit weighted norm).
// Throws ConvergenceFailure after max_iterations.
EigenPair smallest_eigen(const Grid& grid, SpdOperator op, const EigenOptions& options = {},
                         std::span<const Field> deflate = {});

struct EmbeddingOptions {
  int restarts = 8;
  std::uint64_t seed = 20240611;
  // Converged when the ratio improves by less than this, relatively, over
  // `window` consecutive iterations.
  double tolerance = 1e-11;
  int window = 50;
  int max_iterations = 20000;
};

struct EmbeddingResult {
  double value = 0.0;
  Field maximizer;
  int converged_starts = 0;
};

// sup over u != 0 of ||u||_q / denominator(u), q >= 2 finite.
// Nonlinear power iteration u <- A^{-1}(|u|^{q-2} u) from the smallest
// eigenfield of A and `restarts` seeded random fields; the maximum over the
// converged starts is returned. Throws ConvergenceFailure if none converge.
EmbeddingResult embedding_constant(const Grid& grid, double q, EnergyNorm denominator,
                                   const EmbeddingOptions& options = {});

struct WellDepth {
  double lambda_star = 0.0;  // C^{-(p-1)/(p+1)}
  double d = 0.0;            // (p-1)/(2(p+1)) lambda_star^2
  // (p-1)/(2(p+1)) C^{-2(p+1)/(p-1)}, the mountain-pass level of the Nehari
  // manifold for the embedding constant C; equals d only when C = 1.
  double d_mountain_pass = 0.0;
};

WellDepth well_depth(const ModelParams& params, double embed_C);

struct VariationalConstants {
  double lambda1 = 0.0;         // smallest eigenvalue of B
  double lambda_laplace = 0.0;  // smallest eigenvalue of -L
  double poincare_B1 = 0.0;     // ||u||_2 <= B1 ||grad u||
  double embed_C = 0.0;         // ||u||_{p+1} <= C ||u||_H
  double embed_Bstar = 0.0;     // ||u||_{2p} <= B* ||Lap u||
  double embed_Ca = 0.0;        // ||u||_{p+1} <= C_a ||grad u||
  double embed_Cb = 0.0;        // ||u||_{p+1} <= C_b ||Lap u||
  double well_depth_d = 0.0;
  double lambda_star = 0.0;
  double well_depth_mountain_pass = 0.0;
};

VariationalConstants compute_constants(const Grid& grid, const ModelParams& params,
                                       const EmbeddingOptions& options = {});

}  // namespace beamblow
