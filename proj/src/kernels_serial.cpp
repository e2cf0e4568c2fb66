#include <algorithm>
#include <cmath>

#include "beamblow/kernels.hpp"
#include "stencil_detail.hpp"

namespace beamblow::kernels::serial {

void laplacian(const Shape& s, std::span<const double> u, std::span<double> out) {
  const int rows = s.dim == 2 ? s.ny : 1;
  for (int j = 0; j < rows; ++j)
    for (int i = 0; i < s.nx; ++i)
      out[static_cast<std::size_t>(i) + static_cast<std::size_t>(s.nx) * j] =
          detail::laplacian_at(s, u, i, j);
}

void biharmonic(const Shape& s, std::span<const double> u, std::span<double> out) {
  const int rows = s.dim == 2 ? s.ny : 1;
  for (int j = 0; j < rows; ++j)
    for (int i = 0; i < s.nx; ++i)
      out[static_cast<std::size_t>(i) + static_cast<std::size_t>(s.nx) * j] =
          detail::biharmonic_at(s, u, i, j);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] * b[k];
  return sum;
}

double sum_abs_pow(std::span<const double> u, double q) {
  double sum = 0.0;
  for (double x : u) sum += detail::abs_pow(x, q);
  return sum;
}

double max_abs(std::span<const double> u) {
  double m = 0.0;
  for (double x : u) m = std::max(m, std::abs(x));
  return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += alpha * x[k];
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  for (std::size_t k = 0; k < x.size(); ++k) y[k] = x[k] + beta * y[k];
}

}  // namespace beamblow::kernels::serial
