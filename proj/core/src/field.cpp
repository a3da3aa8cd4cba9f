#include "solmod/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace solmod {

double GridSpec::wavenumber(std::size_t m) const {
  const auto half = n / 2;
  const double mm = m < half ? static_cast<double>(m)
                             : static_cast<double>(m) - static_cast<double>(n);
  return std::numbers::pi * mm / half_length;
}

std::vector<double> GridSpec::points() const {
  std::vector<double> xs(n);
  for (std::size_t j = 0; j < n; ++j) xs[j] = x(j);
  return xs;
}

GridSpec make_grid(double half_length, std::size_t n) {
  if (!(half_length > 0.0)) throw std::invalid_argument("grid: half_length must be positive");
  if (n < 8 || (n & (n - 1)) != 0)
    throw std::invalid_argument("grid: point count must be a power of two >= 8");
  return GridSpec{half_length, n};
}

ComplexField zero_field(const GridSpec& grid) {
  return ComplexField{grid, std::vector<cxd>(grid.n, cxd{0.0, 0.0})};
}

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw std::invalid_argument("fields live on different grids");
}

double integral(const GridSpec& grid, std::span<const double> f) {
  double sum = 0.0;
  for (double x : f) sum += x;
  return grid.dx() * sum;
}

cxd integral(const GridSpec& grid, std::span<const cxd> f) {
  cxd sum{0.0, 0.0};
  for (const cxd& x : f) sum += x;
  return grid.dx() * sum;
}

double l2_norm(const ComplexField& u) {
  double sum = 0.0;
  for (const cxd& z : u.values) sum += std::norm(z);
  return std::sqrt(u.grid.dx() * sum);
}

double inner(const ComplexField& u, const ComplexField& v) {
  require_same_grid(u.grid, v.grid);
  double sum = 0.0;
  for (std::size_t j = 0; j < u.values.size(); ++j)
    sum += u.values[j].real() * v.values[j].real() + u.values[j].imag() * v.values[j].imag();
  return u.grid.dx() * sum;
}

double boundary_tail(const ComplexField& u) {
  constexpr std::size_t band = 4;
  const std::size_t n = u.values.size();
  double tail = 0.0;
  for (std::size_t j = 0; j < std::min(band, n); ++j)
    tail = std::max(tail, std::abs(u.values[j]));
  for (std::size_t j = n - std::min(band, n); j < n; ++j)
    tail = std::max(tail, std::abs(u.values[j]));
  return tail;
}

ComplexField operator+(const ComplexField& u, const ComplexField& v) {
  require_same_grid(u.grid, v.grid);
  ComplexField out = u;
  for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] += v.values[j];
  return out;
}

ComplexField operator-(const ComplexField& u, const ComplexField& v) {
  require_same_grid(u.grid, v.grid);
  ComplexField out = u;
  for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] -= v.values[j];
  return out;
}

ComplexField operator*(cxd c, const ComplexField& u) {
  ComplexField out = u;
  for (auto& z : out.values) z *= c;
  return out;
}

}  // namespace solmod
