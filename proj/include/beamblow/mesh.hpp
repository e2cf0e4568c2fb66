#pragma once

// Uniform clamped mesh on an interval or an axis-aligned rectangle, with the
// discrete operators and mesh norms every other module builds on.
//
// Only interior nodes carry unknowns. The Dirichlet Laplacian treats values
// outside the domain as zero; the clamped biharmonic additionally mirrors a
// ghost node across each boundary. ||grad u||^2 and ||Lap u||^2 are defined
// through these operators, (-L u, u) and (B u, u), so the discrete Green
// identities hold exactly and the semi-discrete energy law has no spatial
// error term.

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "beamblow/kernels.hpp"

namespace beamblow {

class Field;

class Grid {
 public:
  // One node on the unit interval; use make/make_grid for real grids.
  Grid() = default;
  // make_grid: dim in {1, 2}; for dim == 1 only the first entries are read.
  static Grid make(int dim, std::array<double, 2> extent, std::array<int, 2> n_interior);

  int dim() const { return shape_.dim; }
  double extent(int axis) const { return extent_[axis]; }
  int n_interior(int axis) const { return axis == 0 ? shape_.nx : shape_.ny; }
  double spacing(int axis) const { return axis == 0 ? shape_.hx : shape_.hy; }
  // Quadrature weight of every node: the product of the spacings.
  double weight() const { return weight_; }
  std::size_t size() const { return shape_.size(); }
  // |Omega|, the product of the extents.
  double volume() const { return dim() == 2 ? extent_[0] * extent_[1] : extent_[0]; }

  // Coordinate of interior node i (0-based) along an axis.
  double coordinate(int axis, int i) const { return (i + 1) * spacing(axis); }

  const kernels::Shape& shape() const { return shape_; }

  Field zeros() const;
  // Field sampled from f(x) in 1D or f(x, y) in 2D (y = 0 passed in 1D).
  template <class F>
  Field sample(F&& f) const;

  bool operator==(const Grid&) const = default;

 private:
  kernels::Shape shape_{};
  std::array<double, 2> extent_{1.0, 1.0};
  double weight_ = 1.0;
};

Grid make_grid(int dim, double extent, int n_interior);

class Field {
 public:
  Field() = default;
  explicit Field(std::size_t n, double value = 0.0) : values_(n, value) {}
  explicit Field(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& vector() const { return values_; }

  bool all_finite() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

  bool operator==(const Field&) const = default;

 private:
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

// Throws InvalidArgument unless u has one entry per interior node.
void require_match(const Grid& grid, const Field& u);

// Into-buffer forms used in the hot loops; `out` must already be sized.
void apply_laplacian(const Grid& grid, std::span<const double> u, std::span<double> out);
void apply_biharmonic(const Grid& grid, std::span<const double> u, std::span<double> out);

Field laplacian_dirichlet(const Grid& grid, const Field& u);
Field biharmonic_clamped(const Grid& grid, const Field& u);

inline constexpr double kInfinityNorm = std::numeric_limits<double>::infinity();

// (sum_i weight * |u_i|^q)^(1/q); q = kInfinityNorm gives max |u_i|.
double norm_lq(const Grid& grid, const Field& u, double q);
// sum_i weight * |u_i|^q without the root; q must be finite.
double power_sum(const Grid& grid, const Field& u, double q);
double inner(const Grid& grid, const Field& u, const Field& w);
double grad_norm_sq(const Grid& grid, const Field& u);
double lap_norm_sq(const Grid& grid, const Field& u);
// ||u||_H^2 = ||grad u||^2 + ||Lap u||^2
double h_norm_sq(const Grid& grid, const Field& u);

template <class F>
Field Grid::sample(F&& f) const {
  Field out(size());
  const int rows = dim() == 2 ? shape_.ny : 1;
  for (int j = 0; j < rows; ++j)
    for (int i = 0; i < shape_.nx; ++i) {
      const double x = coordinate(0, i);
      const double y = dim() == 2 ? coordinate(1, j) : 0.0;
      out[static_cast<std::size_t>(i) + static_cast<std::size_t>(shape_.nx) * j] = f(x, y);
    }
  return out;
}

}  // namespace beamblow
