#pragma once

// Low-level loops over interior-node arrays of a tensor-product grid.
//
// Two implementations with identical signatures:
//   kernels::serial    straightforward loops, kept as the reference
//   kernels::parallel  OpenMP loops; what the library calls
//
// Reductions in `parallel` are computed over fixed blocks of kReductionBlock
// entries and the block partials are summed in block order, so the result does
// not depend on the thread count. It can differ from `serial` in the last bits.

#include <cstddef>
#include <span>

namespace beamblow::kernels {

// Geometry needed by the stencils. Row-major with x fastest: index = i + nx*j.
struct Shape {
  int dim = 1;
  int nx = 1;
  int ny = 1;
  double hx = 1.0;
  double hy = 1.0;

  std::size_t size() const { return static_cast<std::size_t>(nx) * (dim == 2 ? ny : 1); }
};

inline constexpr std::size_t kReductionBlock = 2048;
// Below this many entries the OpenMP regions run on one thread.
inline constexpr std::size_t kParallelThreshold = 1 << 14;

namespace serial {
void laplacian(const Shape& s, std::span<const double> u, std::span<double> out);
void biharmonic(const Shape& s, std::span<const double> u, std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
double sum_abs_pow(std::span<const double> u, double q);
double max_abs(std::span<const double> u);
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
// y = x + beta * y
void xpby(std::span<const double> x, double beta, std::span<double> y);
}  // namespace serial

namespace parallel {
void laplacian(const Shape& s, std::span<const double> u, std::span<double> out);
void biharmonic(const Shape& s, std::span<const double> u, std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
double sum_abs_pow(std::span<const double> u, double q);
double max_abs(std::span<const double> u);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void xpby(std::span<const double> x, double beta, std::span<double> y);
}  // namespace parallel

}  // namespace beamblow::kernels
