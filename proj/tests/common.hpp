#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "solmod/field.hpp"

namespace solmod::testutil {

inline GridSpec grid_1024() { return make_grid(20.0 * std::numbers::pi, 1024); }
inline GridSpec grid_2048() { return make_grid(20.0 * std::numbers::pi, 2048); }

// Gaussian envelope with a plane-wave phase; tails < 1e-100 on grid_1024
// even after shifts of a few units.
inline ComplexField gaussian_packet(const GridSpec& grid, double width = 2.0,
                                    double carrier = 0.3, double center = 0.0) {
  ComplexField u = zero_field(grid);
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double x = grid.x(j);
    const double r = (x - center) / width;
    u.values[j] = std::exp(-r * r) * std::exp(cxd(0.0, carrier * x));
  }
  return u;
}

inline double sup_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j)
    m = std::max(m, std::abs(a.values[j] - b.values[j]));
  return m;
}

inline double sup_abs(const ComplexField& a) {
  double m = 0.0;
  for (const auto& v : a.values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace solmod::testutil
