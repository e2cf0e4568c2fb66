#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "beamblow/mesh.hpp"

namespace beamblow::test {

inline Field random_field(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Field u(g.size());
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = unit(rng);
  return u;
}

inline double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

inline double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace beamblow::test
