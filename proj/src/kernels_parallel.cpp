#include <algorithm>
#include <cmath>
#include <vector>

#include "beamblow/kernels.hpp"
#include "stencil_detail.hpp"

namespace beamblow::kernels::parallel {

namespace {

bool go_parallel(std::size_t n) { return n >= kParallelThreshold; }

// Sum of term(k) for k in [0, n): per-block partials, then an in-order sum.
template <class Term>
double blocked_sum(std::size_t n, Term term) {
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  if (blocks <= 1) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum += term(k);
    return sum;
  }
  std::vector<double> partial(blocks, 0.0);
  const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static) if (go_parallel(n))
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    double sum = 0.0;
    for (std::size_t k = lo; k < hi; ++k) sum += term(k);
    partial[static_cast<std::size_t>(b)] = sum;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

template <class NodeFn>
void apply_nodes(const Shape& s, std::span<double> out, NodeFn fn) {
  const int rows = s.dim == 2 ? s.ny : 1;
  const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(s.nx) * rows;
#pragma omp parallel for schedule(static) if (go_parallel(s.size()))
  for (std::ptrdiff_t k = 0; k < total; ++k) {
    const int i = static_cast<int>(k % s.nx);
    const int j = static_cast<int>(k / s.nx);
    out[static_cast<std::size_t>(k)] = fn(i, j);
  }
}

}  // namespace

void laplacian(const Shape& s, std::span<const double> u, std::span<double> out) {
  apply_nodes(s, out, [&](int i, int j) { return detail::laplacian_at(s, u, i, j); });
}

void biharmonic(const Shape& s, std::span<const double> u, std::span<double> out) {
  apply_nodes(s, out, [&](int i, int j) { return detail::biharmonic_at(s, u, i, j); });
}

double dot(std::span<const double> a, std::span<const double> b) {
  return blocked_sum(a.size(), [&](std::size_t k) { return a[k] * b[k]; });
}

double sum_abs_pow(std::span<const double> u, double q) {
  return blocked_sum(u.size(), [&](std::size_t k) { return detail::abs_pow(u[k], q); });
}

double max_abs(std::span<const double> u) {
  // max is order independent, so a plain OpenMP reduction is deterministic
  double m = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for reduction(max : m) schedule(static) if (go_parallel(u.size()))
  for (std::ptrdiff_t k = 0; k < n; ++k) m = std::max(m, std::abs(u[static_cast<std::size_t>(k)]));
  return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (go_parallel(x.size()))
  for (std::ptrdiff_t k = 0; k < n; ++k) y[static_cast<std::size_t>(k)] += alpha * x[static_cast<std::size_t>(k)];
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (go_parallel(x.size()))
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto u = static_cast<std::size_t>(k);
    y[u] = x[u] + beta * y[u];
  }
}

}  // namespace beamblow::kernels::parallel
