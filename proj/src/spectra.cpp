#include "beamblow/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "beamblow/errors.hpp"
#include "beamblow/kernels.hpp"

namespace beamblow {

namespace kp = kernels::parallel;

SpdOperator form_of(EnergyNorm norm) {
  switch (norm) {
    case EnergyNorm::grad: return SpdOperator::dirichlet_laplacian;
    case EnergyNorm::lap: return SpdOperator::clamped_biharmonic;
    case EnergyNorm::h: return SpdOperator::h_form;
    case EnergyNorm::l2: return SpdOperator::identity;
  }
  throw InvalidArgument("unknown energy norm");
}

LinearOperator make_operator(const Grid& grid, SpdOperator op) {
  switch (op) {
    case SpdOperator::clamped_biharmonic:
      return [grid](std::span<const double> x, std::span<double> out) {
        apply_biharmonic(grid, x, out);
      };
    case SpdOperator::dirichlet_laplacian:
      return [grid](std::span<const double> x, std::span<double> out) {
        apply_laplacian(grid, x, out);
        for (double& v : out) v = -v;
      };
    case SpdOperator::h_form:
      return [grid](std::span<const double> x, std::span<double> out) {
        std::vector<double> lap(x.size());
        apply_biharmonic(grid, x, out);
        apply_laplacian(grid, x, lap);
        kp::axpy(-1.0, lap, out);
      };
    case SpdOperator::identity:
      return [](std::span<const double> x, std::span<double> out) {
        std::copy(x.begin(), x.end(), out.begin());
      };
  }
  throw InvalidArgument("unknown operator");
}

namespace {

double weighted_dot(const Grid& grid, std::span<const double> a, std::span<const double> b) {
  return grid.weight() * kp::dot(a, b);
}

void scale(std::span<double> x, double s) {
  for (double& v : x) v *= s;
}

void project_out(const Grid& grid, std::span<double> x, std::span<const Field> basis) {
  for (const Field& e : basis) kp::axpy(-weighted_dot(grid, e.values(), x), e.values(), x);
}

Field ramp(const Grid& grid) {
  const double ly = grid.dim() == 2 ? grid.extent(1) : 1.0;
  return grid.sample([&](double x, double y) { return 1.0 + x / grid.extent(0) + 0.37 * y / ly; });
}

// Exact-factorization preconditioner; the identity needs none.
LinearOperator inverse_of(const Grid& grid, SpdOperator op, const LinearOperator& apply) {
  if (op == SpdOperator::identity) return {};
  return factorized_inverse(grid, apply);
}

void fix_sign(const Grid& grid, Field& f) {
  const Field reference = ramp(grid);
  if (weighted_dot(grid, f.values(), reference.values()) < 0.0) f *= -1.0;
}

}  // namespace

EigenPair smallest_eigen(const Grid& grid, SpdOperator op, const EigenOptions& options,
                         std::span<const Field> deflate) {
  for (const Field& e : deflate) require_match(grid, e);
  const LinearOperator apply = make_operator(grid, op);
  const std::size_t n = grid.size();
  if (deflate.size() >= n) throw InvalidArgument("deflation space exhausts the grid");

  Field x = ramp(grid);
  project_out(grid, x.values(), deflate);
  project_out(grid, x.values(), deflate);
  scale(x.values(), 1.0 / std::sqrt(weighted_dot(grid, x.values(), x.values())));

  std::vector<double> ax(n), y(n);
  apply(x.values(), ax);
  double lambda = weighted_dot(grid, ax, x.values());
  for (std::size_t k = 0; k < n; ++k) y[k] = x[k] / lambda;

  const CgOptions cg{options.inner_tolerance, 0, inverse_of(grid, op, apply)};
  double last_residual = std::numeric_limits<double>::infinity();
  Field best;
  for (int it = 1; it <= options.max_iterations; ++it) {
    conjugate_gradient(apply, x.values(), y, cg);
    project_out(grid, y, deflate);
    project_out(grid, y, deflate);
    const double norm = std::sqrt(weighted_dot(grid, y, y));
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw ConvergenceFailure("inverse iteration produced a degenerate iterate", norm);
    for (std::size_t k = 0; k < n; ++k) x[k] = y[k] / norm;
    apply(x.values(), ax);
    const double next = weighted_dot(grid, ax, x.values());
    const bool settled = std::abs(next - lambda) <= options.tolerance * std::abs(next);
    lambda = next;
    if (settled && it >= 2) {
      // The vector lags the Rayleigh quotient; keep going until its residual
      // meets the tolerance or stops shrinking at the rounding floor.
      kp::axpy(-lambda, x.values(), ax);
      const double residual = std::sqrt(weighted_dot(grid, ax, ax));
      if (residual <= options.residual_tolerance || residual > 0.8 * last_residual) {
        const bool better = residual <= last_residual;
        Field& keep = better ? x : best;
        fix_sign(grid, keep);
        return {lambda, std::move(keep), std::min(residual, last_residual), it};
      }
      last_residual = residual;
      best = x;
    }
    for (std::size_t k = 0; k < n; ++k) y[k] = x[k] / lambda;
  }
  apply(x.values(), ax);
  kp::axpy(-lambda, x.values(), ax);
  throw ConvergenceFailure("inverse power iteration did not converge",
                           std::sqrt(weighted_dot(grid, ax, ax)));
}

namespace {

struct Ascent {
  bool converged = false;
  double ratio = 0.0;
  Field u;
};

// Power iteration for max ||u||_q on {(A u, u) = 1}. Each step maximizes the
// linearization of the convex functional ||u||_q^q over the ellipsoid, so the
// ratio is nondecreasing up to rounding.
Ascent ascend(const Grid& grid, const LinearOperator& apply, const LinearOperator& inverse, double q,
              Field u, const EmbeddingOptions& options) {
  const std::size_t n = grid.size();
  std::vector<double> au(n), g(n), x(n, 0.0);
  const auto normalize = [&](Field& f) {
    apply(f.values(), au);
    const double form = weighted_dot(grid, au, f.values());
    if (!(form > 0.0) || !std::isfinite(form)) return false;
    f *= 1.0 / std::sqrt(form);
    return true;
  };
  if (!normalize(u)) return {};
  std::vector<double> history{norm_lq(grid, u, q)};
  const CgOptions cg{1e-12, 0, inverse};
  for (int it = 1; it <= options.max_iterations; ++it) {
    for (std::size_t k = 0; k < n; ++k) g[k] = std::pow(std::abs(u[k]), q - 2.0) * u[k];
    conjugate_gradient(apply, g, x, cg);
    Field next(std::vector<double>(x.begin(), x.end()));
    apply(next.values(), au);
    const double form = weighted_dot(grid, au, next.values());
    if (!(form > 0.0) || !std::isfinite(form)) return {};
    const double s = 1.0 / std::sqrt(form);
    next *= s;
    // The next solution is about s^{q-1} times this one.
    scale(x, std::pow(s, q - 1.0));
    u = std::move(next);
    history.push_back(norm_lq(grid, u, q));
    const std::size_t w = static_cast<std::size_t>(options.window);
    if (history.size() > w) {
      const double now = history.back();
      const double then = history[history.size() - 1 - w];
      if (now - then < options.tolerance * now) return {true, now, std::move(u)};
    }
  }
  return {false, history.back(), std::move(u)};
}

}  // namespace

EmbeddingResult embedding_constant(const Grid& grid, double q, EnergyNorm denominator,
                                   const EmbeddingOptions& options) {
  if (!(q >= 2.0) || !std::isfinite(q))
    throw InvalidArgument("embedding exponent must be finite and >= 2");
  if (options.restarts < 0 || options.window < 1)
    throw InvalidArgument("embedding options out of range");
  const SpdOperator form = form_of(denominator);
  const LinearOperator apply = make_operator(grid, form);
  const LinearOperator inverse = inverse_of(grid, form, apply);

  const int starts = options.restarts + 1;
  std::vector<Field> initial(static_cast<std::size_t>(starts));
  initial[0] = smallest_eigen(grid, form).field;
  for (int s = 1; s < starts; ++s) {
    std::mt19937_64 gen(options.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(s));
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Field f(grid.size());
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = dist(gen);
    initial[static_cast<std::size_t>(s)] = std::move(f);
  }

  std::vector<Ascent> results(static_cast<std::size_t>(starts));
#pragma omp parallel for schedule(dynamic, 1)
  for (int s = 0; s < starts; ++s) {
    try {
      results[static_cast<std::size_t>(s)] =
          ascend(grid, apply, inverse, q, initial[static_cast<std::size_t>(s)], options);
    } catch (const ConvergenceFailure&) {
      results[static_cast<std::size_t>(s)] = {};
    }
  }

  EmbeddingResult best;
  double last_ratio = 0.0;
  for (Ascent& a : results) {
    if (!a.converged) {
      last_ratio = std::max(last_ratio, a.ratio);
      continue;
    }
    ++best.converged_starts;
    if (a.ratio > best.value) {
      best.value = a.ratio;
      best.maximizer = std::move(a.u);
    }
  }
  if (best.converged_starts == 0)
    throw ConvergenceFailure("no embedding-constant start converged", last_ratio);
  return best;
}

WellDepth well_depth(const ModelParams& params, double embed_C) {
  const double p = params.p;
  if (!(p > 1.0)) throw InvalidArgument("well depth needs p > 1");
  if (!(embed_C > 0.0)) throw InvalidArgument("embedding constant must be positive");
  const double coef = (p - 1.0) / (2.0 * (p + 1.0));
  WellDepth w;
  w.lambda_star = std::pow(embed_C, -(p - 1.0) / (p + 1.0));
  w.d = coef * w.lambda_star * w.lambda_star;
  w.d_mountain_pass = coef * std::pow(embed_C, -2.0 * (p + 1.0) / (p - 1.0));
  return w;
}

VariationalConstants compute_constants(const Grid& grid, const ModelParams& params,
                                       const EmbeddingOptions& options) {
  VariationalConstants c;
  c.lambda1 = smallest_eigen(grid, SpdOperator::clamped_biharmonic).value;
  c.lambda_laplace = smallest_eigen(grid, SpdOperator::dirichlet_laplacian).value;
  c.poincare_B1 = 1.0 / std::sqrt(c.lambda_laplace);
  const double q = params.p + 1.0;
  c.embed_C = embedding_constant(grid, q, EnergyNorm::h, options).value;
  c.embed_Bstar = embedding_constant(grid, 2.0 * params.p, EnergyNorm::lap, options).value;
  c.embed_Ca = embedding_constant(grid, q, EnergyNorm::grad, options).value;
  c.embed_Cb = embedding_constant(grid, q, EnergyNorm::lap, options).value;
  const WellDepth w = well_depth(params, c.embed_C);
  c.well_depth_d = w.d;
  c.lambda_star = w.lambda_star;
  c.well_depth_mountain_pass = w.d_mountain_pass;
  return c;
}

}  // namespace beamblow
