#include "beamblow/mesh.hpp"

#include <cmath>
#include <string>

#include "beamblow/errors.hpp"

namespace beamblow {

Grid Grid::make(int dim, std::array<double, 2> extent, std::array<int, 2> n_interior) {
  if (dim != 1 && dim != 2) throw InvalidArgument("grid dim must be 1 or 2, got " + std::to_string(dim));
  for (int a = 0; a < dim; ++a) {
    if (!(extent[a] > 0.0) || !std::isfinite(extent[a]))
      throw InvalidArgument("grid extent must be positive");
    if (n_interior[a] < 1) throw InvalidArgument("grid needs at least one interior node per axis");
  }
  Grid g;
  g.shape_.dim = dim;
  g.shape_.nx = n_interior[0];
  g.shape_.hx = extent[0] / (n_interior[0] + 1);
  g.extent_[0] = extent[0];
  if (dim == 2) {
    g.shape_.ny = n_interior[1];
    g.shape_.hy = extent[1] / (n_interior[1] + 1);
    g.extent_[1] = extent[1];
  } else {
    g.shape_.ny = 1;
    g.shape_.hy = 1.0;
    g.extent_[1] = 1.0;
  }
  g.weight_ = dim == 2 ? g.shape_.hx * g.shape_.hy : g.shape_.hx;
  return g;
}

Grid make_grid(int dim, double extent, int n_interior) {
  return Grid::make(dim, {extent, extent}, {n_interior, n_interior});
}

Field Grid::zeros() const { return Field(size()); }

bool Field::all_finite() const {
  for (double x : values_)
    if (!std::isfinite(x)) return false;
  return true;
}

Field& Field::operator+=(const Field& other) {
  if (other.size() != size()) throw InvalidArgument("field size mismatch");
  kernels::parallel::axpy(1.0, other.values(), values());
  return *this;
}

Field& Field::operator-=(const Field& other) {
  if (other.size() != size()) throw InvalidArgument("field size mismatch");
  kernels::parallel::axpy(-1.0, other.values(), values());
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& x : values_) x *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

void require_match(const Grid& grid, const Field& u) {
  if (u.size() != grid.size())
    throw InvalidArgument("field has " + std::to_string(u.size()) + " entries, grid has " +
                          std::to_string(grid.size()) + " interior nodes");
}

void apply_laplacian(const Grid& grid, std::span<const double> u, std::span<double> out) {
  kernels::parallel::laplacian(grid.shape(), u, out);
}

void apply_biharmonic(const Grid& grid, std::span<const double> u, std::span<double> out) {
  kernels::parallel::biharmonic(grid.shape(), u, out);
}

Field laplacian_dirichlet(const Grid& grid, const Field& u) {
  require_match(grid, u);
  Field out(u.size());
  apply_laplacian(grid, u.values(), out.values());
  return out;
}

Field biharmonic_clamped(const Grid& grid, const Field& u) {
  require_match(grid, u);
  Field out(u.size());
  apply_biharmonic(grid, u.values(), out.values());
  return out;
}

double norm_lq(const Grid& grid, const Field& u, double q) {
  require_match(grid, u);
  if (std::isinf(q) && q > 0) return kernels::parallel::max_abs(u.values());
  return std::pow(power_sum(grid, u, q), 1.0 / q);
}

double power_sum(const Grid& grid, const Field& u, double q) {
  require_match(grid, u);
  if (!(q >= 1.0) || !std::isfinite(q)) throw InvalidArgument("norm exponent must be finite and >= 1");
  return grid.weight() * kernels::parallel::sum_abs_pow(u.values(), q);
}

double inner(const Grid& grid, const Field& u, const Field& w) {
  require_match(grid, u);
  require_match(grid, w);
  return grid.weight() * kernels::parallel::dot(u.values(), w.values());
}

double grad_norm_sq(const Grid& grid, const Field& u) {
  return -inner(grid, laplacian_dirichlet(grid, u), u);
}

double lap_norm_sq(const Grid& grid, const Field& u) {
  return inner(grid, biharmonic_clamped(grid, u), u);
}

double h_norm_sq(const Grid& grid, const Field& u) {
  return grad_norm_sq(grid, u) + lap_norm_sq(grid, u);
}

}  // namespace beamblow
