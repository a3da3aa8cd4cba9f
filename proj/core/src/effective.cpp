#include "solmod/effective.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "solmod/spectral.hpp"

namespace solmod {
namespace {

double lambda_moment(const EffectiveTable& table, const RoughCoefficient& lambda,
                     const std::vector<double>& weight, double a, double mu) {
  const double root = std::sqrt(mu);
  double sum = 0.0;
  for (std::size_t j = 0; j < table.grid.n; ++j)
    sum += lambda((table.grid.x(j) + a) / root) * weight[j];
  return table.grid.dx() * sum;
}

double prefactor(const EffectiveTable& table, double eps, double mu) {
  const double st = table.params.s_tilde;
  return eps * std::pow(mu, st / table.params.s) / (2.0 + 2.0 * st);
}

}  // namespace

EffectiveTable make_effective_table(const GridSpec& grid, const NonlinearityParams& p) {
  validate(p);
  const Profile eta = eta1_closed_form(grid, p);
  EffectiveTable t;
  t.grid = grid;
  t.params = p;
  t.eta_pow.resize(grid.n);
  const double expo = 2.0 * p.s_tilde + 2.0;
  for (std::size_t j = 0; j < grid.n; ++j) t.eta_pow[j] = std::pow(eta.values[j], expo);

  ComplexField f = zero_field(grid);
  for (std::size_t j = 0; j < grid.n; ++j) f.values[j] = t.eta_pow[j];
  const ComplexField df = derivative(f);
  t.d_eta_pow.resize(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) t.d_eta_pow[j] = df.values[j].real();

  for (std::size_t j = 0; j < grid.n; ++j) f.values[j] = grid.x(j) * t.eta_pow[j];
  const ComplexField dxf = derivative(f);
  t.d_x_eta_pow.resize(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) t.d_x_eta_pow[j] = dxf.values[j].real();
  return t;
}

double v_eff(const EffectiveTable& table, const RoughCoefficient& lambda, double eps,
             double a, double mu) {
  return prefactor(table, eps, mu) * lambda_moment(table, lambda, table.eta_pow, a, mu);
}

double grad_v_eff(const EffectiveTable& table, const RoughCoefficient& lambda, double eps,
                  double a, double mu) {
  return -prefactor(table, eps, mu) * lambda_moment(table, lambda, table.d_eta_pow, a, mu);
}

double b_eff(const EffectiveTable& table, const RoughCoefficient& lambda, double eps,
             double a, double mu) {
  return -prefactor(table, eps, mu) * lambda_moment(table, lambda, table.d_x_eta_pow, a, mu);
}

EffectivePotentials effective_potentials(const EffectiveTable& table,
                                         const RoughCoefficient& lambda, double eps,
                                         double a, double mu) {
  return EffectivePotentials{v_eff(table, lambda, eps, a, mu),
                             grad_v_eff(table, lambda, eps, a, mu),
                             b_eff(table, lambda, eps, a, mu)};
}

double v_eff(const GridSpec& grid, const NonlinearityParams& p, const RoughCoefficient& lambda,
             double eps, double a, double mu) {
  return v_eff(make_effective_table(grid, p), lambda, eps, a, mu);
}

double grad_v_eff(const GridSpec& grid, const NonlinearityParams& p,
                  const RoughCoefficient& lambda, double eps, double a, double mu) {
  return grad_v_eff(make_effective_table(grid, p), lambda, eps, a, mu);
}

double b_eff(const GridSpec& grid, const NonlinearityParams& p, const RoughCoefficient& lambda,
             double eps, double a, double mu) {
  return b_eff(make_effective_table(grid, p), lambda, eps, a, mu);
}

std::vector<EffectiveOdeSample> integrate_modulation(const SolitonParams& sigma0, double T,
                                                     double dt_ode, double eps,
                                                     const RoughCoefficient& lambda,
                                                     const NonlinearityParams& p,
                                                     const GridSpec& grid) {
  if (!(dt_ode > 0.0) || dt_ode > 0.1)
    throw std::invalid_argument("modulation ode: dt must lie in (0, 0.1]");
  if (!(T >= 0.0)) throw std::invalid_argument("modulation ode: negative horizon");
  validate(p);

  const EffectiveTable table = make_effective_table(grid, p);
  const double ns = static_cast<double>(p.dimension) * p.s;
  const double c_v = (2.0 - ns + 2.0 * p.s_tilde) / (2.0 - ns);
  const double c_b = p.s / (2.0 - ns);

  struct State {
    double a, v, gamma, mu;
  };
  auto rhs = [&](const State& y) {
    const double gv = grad_v_eff(table, lambda, eps, y.a, y.mu);
    const double ve = v_eff(table, lambda, eps, y.a, y.mu);
    const double be = b_eff(table, lambda, eps, y.a, y.mu);
    return State{y.v, -2.0 * std::sqrt(y.mu) * gv,
                 y.mu + 0.25 * y.v * y.v - c_v * ve + c_b * be, 0.0};
  };
  auto axpy = [](const State& y, double h, const State& d) {
    return State{y.a + h * d.a, y.v + h * d.v, y.gamma + h * d.gamma, y.mu + h * d.mu};
  };

  State y{sigma0.a, sigma0.v, sigma0.gamma, sigma0.mu};
  const auto nsteps = static_cast<std::size_t>(std::llround(T / dt_ode));

  std::vector<EffectiveOdeSample> out;
  out.reserve(nsteps + 1);
  auto record = [&](double t) {
    EffectiveOdeSample s;
    s.t = t;
    s.sigma = make_soliton_params(y.a, y.v, y.gamma, y.mu);
    s.potentials = effective_potentials(table, lambda, eps, y.a, y.mu);
    out.push_back(std::move(s));
  };
  record(0.0);
  for (std::size_t i = 1; i <= nsteps; ++i) {
    const State k1 = rhs(y);
    const State k2 = rhs(axpy(y, 0.5 * dt_ode, k1));
    const State k3 = rhs(axpy(y, 0.5 * dt_ode, k2));
    const State k4 = rhs(axpy(y, dt_ode, k3));
    y = State{y.a + dt_ode / 6.0 * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a),
              y.v + dt_ode / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v),
              y.gamma + dt_ode / 6.0 * (k1.gamma + 2.0 * k2.gamma + 2.0 * k3.gamma + k4.gamma),
              y.mu};
    record(static_cast<double>(i) * dt_ode);
  }
  return out;
}

void write_effective_csv(std::ostream& out, std::span<const EffectiveOdeSample> samples) {
  out << "t,a,v,gamma,mu,v_eff,grad_v_eff,b_eff\n";
  char buf[256];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  s.t, s.sigma.a, s.sigma.v, s.sigma.gamma, s.sigma.mu, s.potentials.v,
                  s.potentials.grad_v, s.potentials.b);
    out << buf;
  }
}

namespace {

double g_functional(const ComplexField& u, const NonlinearityParams& p) {
  double sum = 0.0;
  for (const cxd& z : u.values) sum += std::pow(std::norm(z), p.s + 1.0);
  return u.grid.dx() * sum / (2.0 * p.s + 2.0);
}

double f_functional(const ComplexField& u, const RoughCoefficient& lambda,
                    const NonlinearityParams& p) {
  require_same_grid(u.grid, lambda.grid);
  double sum = 0.0;
  for (std::size_t j = 0; j < u.values.size(); ++j)
    sum += lambda.grid_values[j] * std::pow(std::norm(u.values[j]), p.s_tilde + 1.0);
  return u.grid.dx() * sum / (2.0 * p.s_tilde + 2.0);
}

}  // namespace

double centered_energy(const ComplexField& u, double mu, const NonlinearityParams& p) {
  const ComplexField du = derivative(u);
  double quad = 0.0;
  for (std::size_t j = 0; j < u.values.size(); ++j)
    quad += std::norm(du.values[j]) + mu * std::norm(u.values[j]);
  return 0.5 * u.grid.dx() * quad - g_functional(u, p);
}

double lyapunov_functional(const ComplexField& psi, const Decomposition& d, double eps,
                           const RoughCoefficient& lambda, const NonlinearityParams& p) {
  const double mu = d.sigma.mu;
  const Profile eta = eta_mu(psi.grid, p, mu);
  const ComplexField eta_field = to_field(eta);

  const ComplexField w_prime = apply_scaling(mu, d.w, p);
  const ComplexField u_prime = eta_field + w_prime;

  const ComplexField eta_shifted = translate(eta_field, d.sigma.a);

  return centered_energy(u_prime, mu, p) + eps * f_functional(psi, lambda, p) -
         centered_energy(eta_field, mu, p) - eps * f_functional(eta_shifted, lambda, p);
}

}  // namespace solmod
