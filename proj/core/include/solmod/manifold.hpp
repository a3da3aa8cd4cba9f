#pragma once

#include <array>

#include "solmod/field.hpp"
#include "solmod/profile.hpp"

namespace solmod {

/// Point on the soliton manifold: translation a, boost v, gauge gamma, scale mu.
struct SolitonParams {
  double a = 0.0;
  double v = 0.0;
  double gamma = 0.0;  // kept in [0, 2*pi)
  double mu = 1.0;     // > 0
};

double reduce_gamma(double gamma);
// Normalizes gamma and rejects mu <= 0.
SolitonParams make_soliton_params(double a, double v, double gamma, double mu);

SolitonParams group_identity();

// Composition law of the symmetry group, outer applied after inner:
//   T_outer(T_inner(u)) = T_compose(outer, inner)(u).
SolitonParams group_compose(const SolitonParams& outer, const SolitonParams& inner);
SolitonParams group_inverse(const SolitonParams& s);

inline constexpr double kTransformTailTol = 1e-10;

// T_sigma u(x) = e^{i(v(x-a)/2 + gamma)} mu^{1/(2s)} u(sqrt(mu)(x-a)),
// with band-limited resampling.  Throws SupportOverflow when the result's
// boundary tail exceeds tail_tol; callers feeding fields that carry the
// solver's dispersive noise floor pass a looser tolerance.
ComplexField apply_T_sigma(const SolitonParams& sigma, const ComplexField& u,
                           const NonlinearityParams& p,
                           double tail_tol = kTransformTailTol);
ComplexField apply_T_sigma_inverse(const SolitonParams& sigma, const ComplexField& u,
                                   const NonlinearityParams& p,
                                   double tail_tol = kTransformTailTol);
/// The scaling factor alone: mu^{1/(2s)} u(sqrt(mu) x).
ComplexField apply_scaling(double mu, const ComplexField& u, const NonlinearityParams& p);

// Generator indices, in the fixed order used for Lie coefficients.
inline constexpr int kTranslation = 0;  // e_1 = -d/dx
inline constexpr int kBoost = 1;        // e_2 = ix
inline constexpr int kGauge = 2;        // e_3 = i
inline constexpr int kScaling = 3;      // e_4 = 1/(2s) + (x/2) d/dx

/// Coefficients of a tangent vector X = sum_alpha X_alpha e_alpha.
using LieCoeffs = std::array<double, 4>;

ComplexField generator_apply(int alpha, const ComplexField& u, const NonlinearityParams& p);

/// omega(u, v) = Im \int u conj(v)
double symplectic_form(const ComplexField& u, const ComplexField& v);

/// The four tangent fields e_alpha eta_mu at one profile.
struct TangentBasis {
  std::array<ComplexField, 4> vectors;
  double mu = 1.0;
};

TangentBasis tangent_basis(const Profile& eta, const NonlinearityParams& p);

using Mat4 = std::array<std::array<double, 4>, 4>;

/// M_jk = omega(e_j eta_mu, e_k eta_mu), by quadrature.
Mat4 omega_inverse_matrix(const GridSpec& grid, const NonlinearityParams& p, double mu);

/// Projection onto Lie coefficients along the tangent space at eta_1,
/// normalized so that project(X eta_1) = X.
struct LsProjection {
  TangentBasis basis;  // at mu = 1
  Profile eta;
  NonlinearityParams params;
  double m1 = 0.0;        // m(1)
  double m1_prime = 0.0;  // m'(1)

  LieCoeffs project(const ComplexField& u) const;
  /// u - sum_alpha project(u)_alpha e_alpha eta_1; symplectically orthogonal
  /// to every tangent direction.
  ComplexField remove_tangent(const ComplexField& u) const;
};

LsProjection make_ls_projection(const GridSpec& grid, const NonlinearityParams& p);

// Linearized operator at eta_mu acting on a complex fluctuation,
//   L_mu w = -w'' + mu w - (2s+1) eta^{2s} Re w - i eta^{2s} Im w.
ComplexField hessian_apply(const Profile& eta, const NonlinearityParams& p,
                           const ComplexField& w);

}  // namespace solmod
