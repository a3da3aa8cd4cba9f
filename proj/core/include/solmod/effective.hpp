#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "solmod/extractor.hpp"
#include "solmod/manifold.hpp"
#include "solmod/solver.hpp"

namespace solmod {

// Precomputed profile moments for the averaged potentials: eta_1^{2st+2} and
// the x-derivatives that the integrated-by-parts gradient forms need.
struct EffectiveTable {
  GridSpec grid;
  NonlinearityParams params;
  std::vector<double> eta_pow;        // eta_1^{2st+2}
  std::vector<double> d_eta_pow;      // d/dx eta_1^{2st+2}
  std::vector<double> d_x_eta_pow;    // d/dx [x eta_1^{2st+2}]
};

EffectiveTable make_effective_table(const GridSpec& grid, const NonlinearityParams& p);

// V_eff(a, mu) = eps*mu^{st/s}/(2+2st) * int lambda((x+a)/sqrt(mu)) eta_1^{2st+2}(x) dx
double v_eff(const EffectiveTable& table, const RoughCoefficient& lambda, double eps,
             double a, double mu);
// d/da V_eff, with the derivative moved onto the smooth profile factor:
// -eps*mu^{st/s}/(2+2st) * int lambda((x+a)/sqrt(mu)) d/dx[eta_1^{2st+2}] dx
double grad_v_eff(const EffectiveTable& table, const RoughCoefficient& lambda, double eps,
                  double a, double mu);
// Same with the first moment x eta_1^{2st+2}.
double b_eff(const EffectiveTable& table, const RoughCoefficient& lambda, double eps,
             double a, double mu);

struct EffectivePotentials {
  double v = 0.0;
  double grad_v = 0.0;
  double b = 0.0;
};

EffectivePotentials effective_potentials(const EffectiveTable& table,
                                         const RoughCoefficient& lambda, double eps,
                                         double a, double mu);

// Convenience one-shot forms that build the table internally.
double v_eff(const GridSpec& grid, const NonlinearityParams& p, const RoughCoefficient& lambda,
             double eps, double a, double mu);
double grad_v_eff(const GridSpec& grid, const NonlinearityParams& p,
                  const RoughCoefficient& lambda, double eps, double a, double mu);
double b_eff(const GridSpec& grid, const NonlinearityParams& p, const RoughCoefficient& lambda,
             double eps, double a, double mu);

struct EffectiveOdeSample {
  double t = 0.0;
  SolitonParams sigma;
  EffectivePotentials potentials;
};

// Fixed-step RK4 for the closed modulation system
//   a' = v,
//   v' = -2 sqrt(mu) dV_eff/da,
//   gamma' = mu + v^2/4 - (2-Ns+2st)/(2-Ns) V_eff + s/(2-Ns) B_eff,
//   mu' = 0,
// recording every step; gamma is reduced mod 2pi at output.  Requires
// 0 < dt_ode <= 0.1.
std::vector<EffectiveOdeSample> integrate_modulation(const SolitonParams& sigma0, double T,
                                                     double dt_ode, double eps,
                                                     const RoughCoefficient& lambda,
                                                     const NonlinearityParams& p,
                                                     const GridSpec& grid);

/// CSV rows t,a,v,gamma,mu,v_eff,grad_v_eff,b_eff.
void write_effective_csv(std::ostream& out, std::span<const EffectiveOdeSample> samples);

// Energy centered at the manifold point of a decomposition:
//   C(psi) = E_mu(eta_mu + w') + eps F(psi) - E_mu(eta_mu) - eps F(eta_mu(. - a)),
// with E_mu(u) = (1/2)int(|u'|^2 + mu|u|^2) - G(u) and w' = T^s_mu w.
double lyapunov_functional(const ComplexField& psi, const Decomposition& d, double eps,
                           const RoughCoefficient& lambda, const NonlinearityParams& p);

// E_mu of a field; exposed for the frame-change energy identity
//   E_mu(u') = H_eps(psi) + (1/2)(v^2/4 + mu)||psi||^2 - (v/2)<psi, -i psi'> - eps F(psi)
// where u' is psi pulled back by translation, boost and gauge only.
double centered_energy(const ComplexField& u, double mu, const NonlinearityParams& p);

}  // namespace solmod
