#include "solmod/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "solmod/spectral.hpp"

namespace solmod {
namespace {

constexpr double kTailTol = 1e-10;
constexpr double kResidualTol = 1e-8;

// (1+s)^{1/(2s)} sech^{1/s}(s sqrt(mu) |x|) * mu^{1/(2s)}; |x| keeps the
// samples even to the bit.
double eta_value(double x, double s, double mu) {
  const double amp = std::pow((1.0 + s) * mu, 1.0 / (2.0 * s));
  const double arg = s * std::sqrt(mu) * std::abs(x);
  return amp * std::pow(1.0 / std::cosh(arg), 1.0 / s);
}

}  // namespace

void validate(const NonlinearityParams& p) {
  if (p.dimension != 1)
    throw std::invalid_argument("nonlinearity: only dimension 1 is implemented");
  if (!(p.s > 0.0) || !(p.s < 2.0))
    throw std::invalid_argument("nonlinearity: s must lie in (0, 2)");
  if (!(p.s_tilde >= 0.0))
    throw std::invalid_argument("nonlinearity: s_tilde must be >= 0");
}

Profile eta_mu(const GridSpec& grid, const NonlinearityParams& p, double mu) {
  validate(p);
  if (!(mu > 0.0)) throw std::invalid_argument("profile: mu must be positive");
  Profile eta{grid, std::vector<double>(grid.n), mu};
  for (std::size_t j = 0; j < grid.n; ++j) eta.values[j] = eta_value(grid.x(j), p.s, mu);

  const double tail = std::max({eta.values[0], eta.values[1], eta.values[grid.n - 1],
                                eta.values[grid.n - 2]});
  if (tail > kTailTol)
    throw std::domain_error("profile: boundary tail above 1e-10, box too small");

  const double res = profile_residual(eta, p);
  if (!(res < kResidualTol))
    throw std::domain_error("profile: equation residual above 1e-8, grid too coarse");
  return eta;
}

Profile eta1_closed_form(const GridSpec& grid, const NonlinearityParams& p) {
  return eta_mu(grid, p, 1.0);
}

double profile_residual(const Profile& eta, const NonlinearityParams& p) {
  const ComplexField f = to_field(eta);
  const ComplexField d2 = second_derivative(f);
  double res = 0.0;
  for (std::size_t j = 0; j < eta.values.size(); ++j) {
    const double e = eta.values[j];
    const double r = -d2.values[j].real() + eta.mu * e - std::pow(e, 2.0 * p.s + 1.0);
    res = std::max(res, std::abs(r));
  }
  return res;
}

double mass(const Profile& eta) {
  double sum = 0.0;
  for (double e : eta.values) sum += e * e;
  return 0.5 * eta.grid.dx() * sum;
}

double mass_derivative(const GridSpec& grid, const NonlinearityParams& p, double mu) {
  const double h = 1e-5 * mu;
  const double m_plus = mass(eta_mu(grid, p, mu + h));
  const double m_minus = mass(eta_mu(grid, p, mu - h));
  const double md = (m_plus - m_minus) / (2.0 * h);
  if (!(md > 0.0))
    throw std::runtime_error("profile: nonpositive mass derivative (quadrature broken?)");
  return md;
}

ComplexField to_field(const Profile& eta) {
  ComplexField f = zero_field(eta.grid);
  for (std::size_t j = 0; j < eta.values.size(); ++j) f.values[j] = cxd{eta.values[j], 0.0};
  return f;
}

}  // namespace solmod
