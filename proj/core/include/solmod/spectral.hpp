#pragma once

#include <span>
#include <vector>

#include "solmod/field.hpp"

namespace solmod {

// Unnormalized forward DFT / normalized (1/n) inverse DFT.  in and out must
// both have grid.n entries and may not alias each other.
void fft_forward(const GridSpec& grid, std::span<const cxd> in, std::span<cxd> out);
void fft_inverse(const GridSpec& grid, std::span<const cxd> in, std::span<cxd> out);

ComplexField derivative(const ComplexField& u);
ComplexField second_derivative(const ComplexField& u);

/// sqrt(int |u'|^2 + |u|^2), with the spectral derivative.
double h1_norm(const ComplexField& u);

// Values of the trigonometric interpolant of u at arbitrary points.  The
// interpolant is the band-limited extension of the samples, periodic with
// period 2L; modes below 1e-18 of the spectral peak are dropped.
std::vector<cxd> interpolate(const ComplexField& u, std::span<const double> points);

/// u(x - shift), exactly, via a Fourier phase shift.
ComplexField translate(const ComplexField& u, double shift);

}  // namespace solmod
