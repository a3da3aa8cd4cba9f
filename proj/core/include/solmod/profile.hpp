#pragma once

#include <vector>

#include "solmod/field.hpp"

namespace solmod {

/// Nonlinearity exponents for i u_t = -u_xx - |u|^{2s} u + eps*lambda*|u|^{2st} u.
struct NonlinearityParams {
  double s = 1.0;        // focusing exponent, 0 < s < 2 in one dimension
  double s_tilde = 1.0;  // perturbation exponent, >= 0
  int dimension = 1;     // only N = 1 is implemented
};

// Throws std::invalid_argument on out-of-range exponents or dimension != 1.
void validate(const NonlinearityParams& p);

/// Ground-state profile eta_mu sampled on a grid: the positive even solution
/// of -eta'' + mu*eta = eta^{2s+1}.
struct Profile {
  GridSpec grid;
  std::vector<double> values;
  double mu = 1.0;
};

// eta_1(x) = (1+s)^{1/(2s)} sech^{1/s}(s x).  Throws std::domain_error when
// the boundary tail exceeds 1e-10 (box too small for the decay length).
Profile eta1_closed_form(const GridSpec& grid, const NonlinearityParams& p);

// eta_mu(x) = mu^{1/(2s)} eta_1(sqrt(mu) x), evaluated in closed form.
Profile eta_mu(const GridSpec& grid, const NonlinearityParams& p, double mu);

/// max_j |-eta'' + mu*eta - eta^{2s+1}| with the spectral second derivative.
double profile_residual(const Profile& eta, const NonlinearityParams& p);

/// m(mu) = (1/2) int eta_mu^2.
double mass(const Profile& eta);

// m'(mu) by a central difference with relative step 1e-5.  Throws
// std::runtime_error if the result is not positive.
double mass_derivative(const GridSpec& grid, const NonlinearityParams& p, double mu);

ComplexField to_field(const Profile& eta);

}  // namespace solmod
