#pragma once

// Per-node stencil formulas shared by the serial and OpenMP kernels.
//
// Interior nodes are 0..n-1 along an axis; -1 and n are boundary nodes where
// u = 0; -2 and n+1 are ghost nodes mirroring the first interior node inside
// the same boundary (u_{-2} = u_0, u_{n+1} = u_{n-1}), which encodes the zero
// normal derivative of the clamped condition.

#include <cmath>
#include <span>

#include "beamblow/kernels.hpp"

namespace beamblow::kernels::detail {

inline double abs_pow(double x, double q) {
  const double a = std::abs(x);
  if (q == 2.0) return a * a;
  if (q == 1.0) return a;
  return std::pow(a, q);
}

inline double zero_ext(const Shape& s, std::span<const double> u, int i, int j) {
  if (i < 0 || i >= s.nx || j < 0 || j >= (s.dim == 2 ? s.ny : 1)) return 0.0;
  return u[static_cast<std::size_t>(i) + static_cast<std::size_t>(s.nx) * j];
}

// Offset `i` along x, row j, with boundary and ghost closure.
inline double clamped_x(const Shape& s, std::span<const double> u, int i, int j) {
  if (i == -2) i = 0;
  else if (i == s.nx + 1) i = s.nx - 1;
  return zero_ext(s, u, i, j);
}

inline double clamped_y(const Shape& s, std::span<const double> u, int i, int j) {
  if (j == -2) j = 0;
  else if (j == s.ny + 1) j = s.ny - 1;
  return zero_ext(s, u, i, j);
}

inline double laplacian_at(const Shape& s, std::span<const double> u, int i, int j) {
  const double c = zero_ext(s, u, i, j);
  double out = (zero_ext(s, u, i - 1, j) - 2.0 * c + zero_ext(s, u, i + 1, j)) / (s.hx * s.hx);
  if (s.dim == 2) {
    out += (zero_ext(s, u, i, j - 1) - 2.0 * c + zero_ext(s, u, i, j + 1)) / (s.hy * s.hy);
  }
  return out;
}

inline double biharmonic_at(const Shape& s, std::span<const double> u, int i, int j) {
  const double c = zero_ext(s, u, i, j);
  const double hx4 = s.hx * s.hx * s.hx * s.hx;
  double out = (clamped_x(s, u, i - 2, j) - 4.0 * clamped_x(s, u, i - 1, j) + 6.0 * c -
                4.0 * clamped_x(s, u, i + 1, j) + clamped_x(s, u, i + 2, j)) /
               hx4;
  if (s.dim == 2) {
    const double hy4 = s.hy * s.hy * s.hy * s.hy;
    out += (clamped_y(s, u, i, j - 2) - 4.0 * clamped_y(s, u, i, j - 1) + 6.0 * c -
            4.0 * clamped_y(s, u, i, j + 1) + clamped_y(s, u, i, j + 2)) /
           hy4;
    // 2 * D_xx D_yy with Dirichlet closure; only reaches the boundary ring.
    static constexpr double w[3] = {1.0, -2.0, 1.0};
    double mixed = 0.0;
    for (int b = -1; b <= 1; ++b)
      for (int a = -1; a <= 1; ++a) mixed += w[a + 1] * w[b + 1] * zero_ext(s, u, i + a, j + b);
    out += 2.0 * mixed / (s.hx * s.hx * s.hy * s.hy);
  }
  return out;
}

}  // namespace beamblow::kernels::detail
