#include "beamblow/linalg.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "beamblow/errors.hpp"
#include "beamblow/kernels.hpp"

namespace beamblow {

namespace kp = kernels::parallel;

CgResult conjugate_gradient(const LinearOperator& apply, std::span<const double> b,
                            std::span<double> x, const CgOptions& options) {
  const std::size_t n = b.size();
  if (x.size() != n) throw InvalidArgument("cg: x and b differ in length");
  const double b_norm = std::sqrt(kp::dot(b, b));
  if (b_norm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return {};
  }
  const int max_iter =
      options.max_iterations > 0 ? options.max_iterations : static_cast<int>(10 * n + 100);
  const double target = options.relative_tolerance * b_norm;

  std::vector<double> r(n), z(n), p(n), ap(n);
  const auto precondition = [&] {
    if (options.preconditioner) options.preconditioner(r, z);
    else z = r;
  };
  apply(x, r);
  for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - r[k];
  precondition();
  double rz = kp::dot(r, z);
  double r_norm = std::sqrt(kp::dot(r, r));
  p = z;

  int it = 0;
  while (r_norm > target) {
    if (it == max_iter) throw ConvergenceFailure("conjugate gradient did not converge", r_norm / b_norm);
    apply(p, ap);
    const double pap = kp::dot(p, ap);
    if (!(pap > 0.0) || !std::isfinite(pap) || !(rz > 0.0))
      throw ConvergenceFailure("conjugate gradient lost positive definiteness", r_norm / b_norm);
    const double alpha = rz / pap;
    kp::axpy(alpha, p, x);
    kp::axpy(-alpha, ap, r);
    r_norm = std::sqrt(kp::dot(r, r));
    precondition();
    const double rz_next = kp::dot(r, z);
    kp::xpby(z, rz_next / rz, p);
    rz = rz_next;
    ++it;
  }

  apply(x, ap);
  for (std::size_t k = 0; k < n; ++k) ap[k] = b[k] - ap[k];
  return {it, std::sqrt(kp::dot(ap, ap)) / b_norm};
}

LinearOperator factorized_inverse(const Grid& grid, const LinearOperator& apply) {
  using Matrix = Eigen::SparseMatrix<double>;
  constexpr int kPeriod = 5;
  const int nx = grid.n_interior(0);
  const int ny = grid.dim() == 2 ? grid.n_interior(1) : 1;
  const int colors_y = grid.dim() == 2 ? kPeriod : 1;
  const std::size_t n = grid.size();

  std::vector<Eigen::Triplet<double>> entries;
  std::vector<double> probe(n), column(n);
  for (int cy = 0; cy < colors_y; ++cy)
    for (int cx = 0; cx < kPeriod; ++cx) {
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
          probe[static_cast<std::size_t>(i + nx * j)] = (i % kPeriod == cx && j % colors_y == cy) ? 1.0 : 0.0;
      apply(probe, column);
      // Row (i, j) sees exactly one probed node within two steps per axis.
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          const double value = column[static_cast<std::size_t>(i + nx * j)];
          if (value == 0.0) continue;
          const int si = i + ((cx - i) % kPeriod + kPeriod + 2) % kPeriod - 2;
          const int sj = j + ((cy - j) % colors_y + colors_y + 2) % colors_y - (colors_y == 1 ? 0 : 2);
          if (si < 0 || si >= nx || sj < 0 || sj >= ny) continue;
          entries.emplace_back(i + nx * j, si + nx * sj, value);
        }
    }
  Matrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  a.setFromTriplets(entries.begin(), entries.end());
  auto solver = std::make_shared<Eigen::SimplicialLDLT<Matrix>>(a);
  if (solver->info() != Eigen::Success) throw NumericalFailure("sparse factorization failed");
  return [solver](std::span<const double> x, std::span<double> out) {
    const Eigen::Map<const Eigen::VectorXd> in(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size())) = solver->solve(in);
  };
}

}  // namespace beamblow
