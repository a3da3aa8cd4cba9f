#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace solmod {

using cxd = std::complex<double>;

/// Uniform periodic grid on [-L, L): x_j = -L + j*dx, dx = 2L/n.
struct GridSpec {
  double half_length = 0.0;  // L
  std::size_t n = 0;         // number of samples, a power of two

  double dx() const { return 2.0 * half_length / static_cast<double>(n); }
  double x(std::size_t j) const {
    return -half_length + static_cast<double>(j) * dx();
  }
  // Wavenumber of FFT bin m, in the usual order: pi*m/L for m < n/2,
  // pi*(m-n)/L for m >= n/2.
  double wavenumber(std::size_t m) const;
  std::vector<double> points() const;

  bool operator==(const GridSpec&) const = default;
};

// Throws std::invalid_argument unless L > 0 and n is a power of two >= 8.
GridSpec make_grid(double half_length, std::size_t n);

/// Complex scalar field sampled on a GridSpec.
struct ComplexField {
  GridSpec grid;
  std::vector<cxd> values;
};

ComplexField zero_field(const GridSpec& grid);

// Throws std::invalid_argument when two operands live on different grids.
void require_same_grid(const GridSpec& a, const GridSpec& b);

// Trapezoid rule, dx * sum; exact to spectral accuracy for smooth periodic
// integrands.
double integral(const GridSpec& grid, std::span<const double> f);
cxd integral(const GridSpec& grid, std::span<const cxd> f);

double l2_norm(const ComplexField& u);
/// Re \int u conj(v)
double inner(const ComplexField& u, const ComplexField& v);
/// max |u| over a few samples next to x = -L and x = L
double boundary_tail(const ComplexField& u);

ComplexField operator+(const ComplexField& u, const ComplexField& v);
ComplexField operator-(const ComplexField& u, const ComplexField& v);
ComplexField operator*(cxd c, const ComplexField& u);

}  // namespace solmod
