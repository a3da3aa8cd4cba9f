#include "solmod/manifold.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "solmod/errors.hpp"
#include "solmod/spectral.hpp"

namespace solmod {
namespace {


void check_mu(double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("soliton params: mu must be positive");
}

}  // namespace

double reduce_gamma(double gamma) {
  const double two_pi = 2.0 * std::numbers::pi;
  double g = std::fmod(gamma, two_pi);
  if (g < 0.0) g += two_pi;
  return g;
}

SolitonParams make_soliton_params(double a, double v, double gamma, double mu) {
  check_mu(mu);
  return SolitonParams{a, v, reduce_gamma(gamma), mu};
}

SolitonParams group_identity() { return SolitonParams{0.0, 0.0, 0.0, 1.0}; }

SolitonParams group_compose(const SolitonParams& outer, const SolitonParams& inner) {
  check_mu(outer.mu);
  check_mu(inner.mu);
  const double root = std::sqrt(outer.mu);
  // Derived by commuting the scaling and boost factors of the outer element
  // past the inner translation; the gauge cross term picks up the outer
  // boost against the inner translation.
  return make_soliton_params(inner.a / root + outer.a,
                             root * inner.v + outer.v,
                             inner.gamma + outer.gamma + outer.v * inner.a / (2.0 * root),
                             inner.mu * outer.mu);
}

SolitonParams group_inverse(const SolitonParams& s) {
  check_mu(s.mu);
  const double root = std::sqrt(s.mu);
  return make_soliton_params(-root * s.a, -s.v / root, s.v * s.a / 2.0 - s.gamma,
                             1.0 / s.mu);
}

ComplexField apply_scaling(double mu, const ComplexField& u, const NonlinearityParams& p) {
  validate(p);
  check_mu(mu);
  if (mu == 1.0) return u;
  const double amp = std::pow(mu, 1.0 / (2.0 * p.s));
  const double root = std::sqrt(mu);
  std::vector<double> pts(u.grid.n);
  for (std::size_t j = 0; j < u.grid.n; ++j) pts[j] = root * u.grid.x(j);
  ComplexField out{u.grid, interpolate(u, pts)};
  for (auto& z : out.values) z *= amp;
  return out;
}

ComplexField apply_T_sigma(const SolitonParams& sigma, const ComplexField& u,
                           const NonlinearityParams& p, double tail_tol) {
  validate(p);
  check_mu(sigma.mu);
  const auto& g = u.grid;
  if (sigma.a == 0.0 && sigma.v == 0.0 && sigma.gamma == 0.0 && sigma.mu == 1.0) return u;

  ComplexField out = zero_field(g);
  if (sigma.mu == 1.0) {
    out = translate(u, sigma.a);
  } else {
    const double root = std::sqrt(sigma.mu);
    std::vector<double> pts(g.n);
    for (std::size_t j = 0; j < g.n; ++j) pts[j] = root * (g.x(j) - sigma.a);
    out.values = interpolate(u, pts);
  }

  const double amp = std::pow(sigma.mu, 1.0 / (2.0 * p.s));
  for (std::size_t j = 0; j < g.n; ++j) {
    const double phase = 0.5 * sigma.v * (g.x(j) - sigma.a) + sigma.gamma;
    out.values[j] *= amp * std::polar(1.0, phase);
  }

  if (boundary_tail(out) > tail_tol)
    throw SupportOverflow("transform: field support ran into the box boundary");
  return out;
}

ComplexField apply_T_sigma_inverse(const SolitonParams& sigma, const ComplexField& u,
                                   const NonlinearityParams& p, double tail_tol) {
  return apply_T_sigma(group_inverse(sigma), u, p, tail_tol);
}

ComplexField generator_apply(int alpha, const ComplexField& u, const NonlinearityParams& p) {
  validate(p);
  const auto& g = u.grid;
  switch (alpha) {
    case kTranslation: {
      ComplexField du = derivative(u);
      for (auto& z : du.values) z = -z;
      return du;
    }
    case kBoost: {
      ComplexField out = u;
      for (std::size_t j = 0; j < g.n; ++j) out.values[j] *= cxd{0.0, g.x(j)};
      return out;
    }
    case kGauge: {
      ComplexField out = u;
      for (auto& z : out.values) z *= cxd{0.0, 1.0};
      return out;
    }
    case kScaling: {
      const ComplexField du = derivative(u);
      ComplexField out = u;
      const double c = 1.0 / (2.0 * p.s);
      for (std::size_t j = 0; j < g.n; ++j)
        out.values[j] = c * u.values[j] + 0.5 * g.x(j) * du.values[j];
      return out;
    }
    default:
      throw std::invalid_argument("generator index must be 0..3");
  }
}

double symplectic_form(const ComplexField& u, const ComplexField& v) {
  require_same_grid(u.grid, v.grid);
  double sum = 0.0;
  for (std::size_t j = 0; j < u.values.size(); ++j) {
    // Im(u conj(v))
    sum += u.values[j].imag() * v.values[j].real() - u.values[j].real() * v.values[j].imag();
  }
  return u.grid.dx() * sum;
}

TangentBasis tangent_basis(const Profile& eta, const NonlinearityParams& p) {
  const ComplexField f = to_field(eta);
  TangentBasis basis{{generator_apply(kTranslation, f, p), generator_apply(kBoost, f, p),
                      generator_apply(kGauge, f, p), generator_apply(kScaling, f, p)},
                     eta.mu};
  return basis;
}

Mat4 omega_inverse_matrix(const GridSpec& grid, const NonlinearityParams& p, double mu) {
  const TangentBasis basis = tangent_basis(eta_mu(grid, p, mu), p);
  Mat4 m{};
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k)
      m[j][k] = symplectic_form(basis.vectors[j], basis.vectors[k]);
  return m;
}

LieCoeffs LsProjection::project(const ComplexField& u) const {
  // Normalized pairings against the symplectic duals of the tangent fields;
  // the translation/boost pair carries 1/m(1), the gauge/scaling pair 1/m'(1).
  return LieCoeffs{
      -symplectic_form(u, basis.vectors[kBoost]) / m1,
      symplectic_form(u, basis.vectors[kTranslation]) / m1,
      symplectic_form(u, basis.vectors[kScaling]) / m1_prime,
      -symplectic_form(u, basis.vectors[kGauge]) / m1_prime,
  };
}

ComplexField LsProjection::remove_tangent(const ComplexField& u) const {
  const LieCoeffs c = project(u);
  ComplexField out = u;
  for (int alpha = 0; alpha < 4; ++alpha)
    for (std::size_t j = 0; j < out.values.size(); ++j)
      out.values[j] -= c[static_cast<std::size_t>(alpha)] *
                       basis.vectors[static_cast<std::size_t>(alpha)].values[j];
  return out;
}

LsProjection make_ls_projection(const GridSpec& grid, const NonlinearityParams& p) {
  LsProjection proj;
  proj.eta = eta1_closed_form(grid, p);
  proj.basis = tangent_basis(proj.eta, p);
  proj.params = p;
  proj.m1 = mass(proj.eta);
  proj.m1_prime = mass_derivative(grid, p, 1.0);
  return proj;
}

ComplexField hessian_apply(const Profile& eta, const NonlinearityParams& p,
                           const ComplexField& w) {
  require_same_grid(eta.grid, w.grid);
  const ComplexField d2 = second_derivative(w);
  ComplexField out = zero_field(w.grid);
  const double two_s = 2.0 * p.s;
  for (std::size_t j = 0; j < w.values.size(); ++j) {
    const double es = std::pow(eta.values[j], two_s);
    const cxd lin{(two_s + 1.0) * es * w.values[j].real(), es * w.values[j].imag()};
    out.values[j] = -d2.values[j] + eta.mu * w.values[j] - lin;
  }
  return out;
}

}  // namespace solmod
