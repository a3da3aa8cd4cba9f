// Split-step solver checks built on exactly solvable cases:
//   - plane waves A e^{ikx} rotate as e^{-i(k^2 - A^{2s} + eps*lambda*A^{2st}) t}
//     and both substeps handle them exactly;
//   - the standing soliton evolves as e^{i mu t} eta_mu;
//   - |psi| is untouched by the nonlinear substep and the kinetic substep is
//     unitary, so charge holds to round-off.

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "common.hpp"
#include "doctest.h"
#include "solmod/errors.hpp"
#include "solmod/manifold.hpp"
#include "solmod/profile.hpp"
#include "solmod/solver.hpp"

using namespace solmod;
using namespace solmod::testutil;

namespace {

ComplexField soliton_field(const GridSpec& g, const SolitonParams& sigma) {
  const NonlinearityParams p;
  return apply_T_sigma(sigma, to_field(eta1_closed_form(g, p)), p);
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("plane wave rotates at the exact phase rate") {
  const GridSpec g = grid_1024();
  const NonlinearityParams p;
  const double A = 0.7;
  const double k = g.wavenumber(5);
  const double eps = 0.3;
  const RoughCoefficient lambda = make_constant_lambda(g, 0.8);

  ComplexField psi0 = zero_field(g);
  for (std::size_t j = 0; j < g.n; ++j)
    psi0.values[j] = A * std::exp(cxd(0.0, k * g.x(j)));

  SolverState state = make_solver_state(psi0, eps, p, lambda);
  const double dt = 1e-3;
  for (int i = 0; i < 100; ++i) step(state, dt);

  const double rate = -(k * k - A * A + eps * 0.8 * A * A);
  ComplexField expect = zero_field(g);
  for (std::size_t j = 0; j < g.n; ++j)
    expect.values[j] = psi0.values[j] * std::exp(cxd(0.0, rate * state.t));
  CHECK(state.t == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(sup_diff(state.psi, expect) < 1e-12);
}

TEST_CASE("standing soliton keeps its shape and phase to O(dt^2)") {
  const GridSpec g = grid_1024();
  const NonlinearityParams p;
  const ComplexField eta = to_field(eta1_closed_form(g, p));
  SolverState state = make_solver_state(eta, 0.0, p, make_constant_lambda(g, 0.0));
  const auto samples = evolve(state, 0.1, 1e-3, 100);

  ComplexField expect = zero_field(g);
  for (std::size_t j = 0; j < g.n; ++j)
    expect.values[j] = eta.values[j] * std::exp(cxd(0.0, state.t));
  const ComplexField diff = state.psi - expect;
  CHECK(l2_norm(diff) < 1e-6);
  CHECK(samples.size() == 2);
}

TEST_CASE("charge is conserved to round-off even with the perturbation on") {
  const GridSpec g = grid_1024();
  const NonlinearityParams p;
  const RoughCoefficient lambda = make_smooth_bump_lambda(g, 1.0, 0.0, 5.0);
  SolverState state = make_solver_state(soliton_field(g, group_identity()), 0.3, p, lambda);
  const double q0 = diagnostics(state).charge;
  for (int i = 0; i < 50; ++i) step(state, 1e-3);
  CHECK(diagnostics(state).charge == doctest::Approx(q0).epsilon(1e-12));
}

TEST_CASE("a global phase commutes with the flow") {
  const GridSpec g = grid_1024();
  const NonlinearityParams p;
  const RoughCoefficient lambda = make_smooth_bump_lambda(g, 1.0, 1.0, 2.0);
  const ComplexField psi0 = soliton_field(g, group_identity());
  const cxd phase = std::exp(cxd(0.0, 1.234));

  SolverState plain = make_solver_state(psi0, 0.1, p, lambda);
  SolverState rotated = make_solver_state(phase * psi0, 0.1, p, lambda);
  for (int i = 0; i < 100; ++i) {
    step(plain, 1e-3);
    step(rotated, 1e-3);
  }
  CHECK(sup_diff(rotated.psi, phase * plain.psi) < 1e-12);
}

TEST_CASE("diagnostics of the cubic soliton: H = -2/3, charge 2, momentum 0") {
  const GridSpec g = grid_1024();
  const NonlinearityParams p;
  SolverState state =
      make_solver_state(soliton_field(g, group_identity()), 0.0, p,
                        make_constant_lambda(g, 0.0));
  const ConservedDiagnostics d = diagnostics(state);
  CHECK(d.energy == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
  CHECK(d.charge == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(d.momentum) < 1e-13);
}

TEST_CASE("momentum of a boosted soliton is conserved without perturbation") {
  const GridSpec g = grid_1024();
  const NonlinearityParams p;
  SolverState state =
      make_solver_state(soliton_field(g, make_soliton_params(0.0, 0.2, 0.0, 1.0)), 0.0, p,
                        make_constant_lambda(g, 0.0));
  const double p0 = diagnostics(state).momentum;
  CHECK(p0 == doctest::Approx(0.2 * 2.0 * 2.0 / 2.0).epsilon(1e-10));  // v * charge
  for (int i = 0; i < 200; ++i) step(state, 1e-3);
  CHECK(diagnostics(state).momentum == doctest::Approx(p0).epsilon(1e-12));
}

TEST_CASE("energy drift shrinks by about 4 when dt is halved") {
  const GridSpec g = grid_1024();
  const NonlinearityParams p;
  const RoughCoefficient lambda = make_smooth_bump_lambda(g, 1.0, 0.0, 5.0);
  const ComplexField psi0 = soliton_field(g, group_identity());

  const auto drift = [&](double dt) {
    SolverState state = make_solver_state(psi0, 0.05, p, lambda);
    const double e0 = diagnostics(state).energy;
    evolve(state, 0.5, dt, 1000000);
    return std::abs(diagnostics(state).energy - e0);
  };
  const double ratio = drift(1e-3) / drift(5e-4);
  CHECK(ratio > 2.5);
  CHECK(ratio < 6.0);
}

TEST_CASE("momentum obeys the forced Ehrenfest relation along a perturbed run") {
  const GridSpec g = grid_1024();
  const NonlinearityParams p;
  // bump off-center so the force on the soliton is nonzero
  const RoughCoefficient lambda = make_smooth_bump_lambda(g, 1.0, 2.0, 5.0);
  SolverState state = make_solver_state(soliton_field(g, group_identity()), 0.05, p, lambda);
  const auto samples = evolve(state, 0.5, 1e-3, 25);
  double worst = 0.0;
  for (const auto& [t, r] : ehrenfest_residual(samples, 0.05, p, lambda))
    worst = std::max(worst, r);
  CHECK(worst < 1e-4);
  CHECK(worst > 1e-12);

  // A finer sampling interval shrinks the centered-difference error; the
  // divisor must split the 500 steps evenly or the ragged final interval
  // degrades the last stencil to first order.
  SolverState fine_state =
      make_solver_state(soliton_field(g, group_identity()), 0.05, p, lambda);
  const auto fine_samples = evolve(fine_state, 0.5, 1e-3, 10);
  double worst_fine = 0.0;
  for (const auto& [t, r] : ehrenfest_residual(fine_samples, 0.05, p, lambda))
    worst_fine = std::max(worst_fine, r);
  CHECK(worst_fine < worst);
}

TEST_CASE("evolve records t=0, every sample_every-th step, and the final time") {
  const GridSpec g = grid_1024();
  const NonlinearityParams p;
  SolverState state = make_solver_state(soliton_field(g, group_identity()), 0.0, p,
                                        make_constant_lambda(g, 0.0));
  const double dt = 1e-3;
  const auto samples = evolve(state, 10.0 * dt, dt, 5);
  REQUIRE(samples.size() == 3);
  CHECK(samples[0].t == 0.0);
  CHECK(samples[1].t == doctest::Approx(5.0 * dt).epsilon(1e-12));
  CHECK(samples[2].t == doctest::Approx(10.0 * dt).epsilon(1e-12));
}

TEST_CASE("step size and state validation") {
  const GridSpec g = grid_1024();
  const NonlinearityParams p;
  const RoughCoefficient lambda = make_constant_lambda(g, 0.0);
  const ComplexField psi0 = soliton_field(g, group_identity());
  CHECK_THROWS_AS(make_solver_state(psi0, 1.0, p, lambda), std::invalid_argument);
  CHECK_THROWS_AS(make_solver_state(psi0, -0.1, p, lambda), std::invalid_argument);

  SolverState state = make_solver_state(psi0, 0.0, p, lambda);
  CHECK_THROWS_AS(step(state, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(step(state, 5e-3), std::invalid_argument);  // dt * k_max^2 >= pi
  CHECK_THROWS_AS(evolve(state, -1.0, 1e-3, 1), std::invalid_argument);
  CHECK_THROWS_AS(evolve(state, 1.0, 1e-3, 0), std::invalid_argument);
}

TEST_CASE("a field parked at the box edge trips the support monitor") {
  const GridSpec g = grid_1024();
  const NonlinearityParams p;
  const ComplexField edge = gaussian_packet(g, 2.0, 0.0, g.half_length - 1.0);
  SolverState state = make_solver_state(edge, 0.0, p, make_constant_lambda(g, 0.0));
  CHECK_THROWS_AS(evolve(state, 0.01, 1e-3, 1), SupportOverflow);
}

TEST_CASE("trajectory binary record round-trips bit for bit") {
  const GridSpec g = make_grid(10.0, 64);
  const NonlinearityParams p;
  ComplexField u = gaussian_packet(g, 2.0, 0.7);
  std::vector<TrajectorySample> samples;
  samples.push_back({0.0, u});
  samples.push_back({0.125, cxd(0.0, 1.0) * u});

  std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
  write_trajectory(buf, g, 0.125, samples);
  const TrajectoryRecord rec = read_trajectory(buf);

  CHECK(rec.grid == g);
  CHECK(rec.dt == 0.125);
  REQUIRE(rec.samples.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(rec.samples[i].t == samples[i].t);
    for (std::size_t j = 0; j < g.n; ++j)
      CHECK(rec.samples[i].psi.values[j] == samples[i].psi.values[j]);
  }
}

TEST_CASE("diagnostics CSV starts with the documented header") {
  const GridSpec g = grid_1024();
  const NonlinearityParams p;
  const RoughCoefficient lambda = make_constant_lambda(g, 0.0);
  SolverState state = make_solver_state(soliton_field(g, group_identity()), 0.0, p, lambda);
  const auto samples = evolve(state, 0.01, 1e-3, 5);
  std::ostringstream out;
  write_diagnostics_csv(out, samples, 0.0, p, lambda);
  CHECK(out.str().substr(0, 25) == "t,energy,charge,momentum\n");
}

TEST_CASE("constant coefficient evaluates to its value everywhere") {
  const GridSpec g = grid_1024();
  const RoughCoefficient lam = make_constant_lambda(g, -0.4);
  CHECK(lam(0.0) == -0.4);
  CHECK(lam(17.3) == -0.4);
  CHECK(lam.linf() == doctest::Approx(0.4));
}

TEST_CASE("smooth bump peaks at its center with the requested amplitude") {
  const GridSpec g = grid_1024();
  const RoughCoefficient lam = make_smooth_bump_lambda(g, 0.9, 1.5, 2.0);
  CHECK(lam(1.5) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(lam(1.5 + 2.0) == doctest::Approx(0.9 * std::exp(-1.0)).epsilon(1e-14));
  CHECK(std::abs(lam(1.5 + 20.0)) < 1e-8);
  CHECK_THROWS_AS(make_smooth_bump_lambda(g, 1.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("random coefficients are seeded, bounded, and hit their sup norm") {
  const GridSpec g = grid_1024();
  for (int kind = 0; kind < 2; ++kind) {
    const auto build = [&](std::uint64_t seed) {
      return kind == 0 ? make_random_fourier_lambda(g, 8, 0.7, seed)
                       : make_random_step_lambda(g, 32, 0.7, seed);
    };
    const RoughCoefficient a = build(123), b = build(123), c = build(124);
    CHECK(a.linf() == doctest::Approx(0.7).epsilon(1e-12));
    double peak = 0.0;
    bool same_as_b = true, same_as_c = true;
    for (std::size_t j = 0; j < g.n; ++j) {
      const double x = g.x(j);
      peak = std::max(peak, std::abs(a(x)));
      same_as_b = same_as_b && a(x) == b(x);
      same_as_c = same_as_c && a(x) == c(x);
    }
    CHECK(peak == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(same_as_b);
    CHECK_FALSE(same_as_c);
  }
  CHECK_THROWS_AS(make_random_fourier_lambda(g, 0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_random_step_lambda(g, 1, 1.0, 1), std::invalid_argument);
}

TEST_CASE("step coefficient is constant inside a cell") {
  const GridSpec g = grid_1024();
  const RoughCoefficient lam = make_random_step_lambda(g, 16, 1.0, 7);
  // Cells are a few units wide on this box; nearby points share a value.
  CHECK(lam(0.3) == lam(0.3 + 1e-6));
  CHECK(lam(-11.7) == lam(-11.7 + 1e-6));
}

}  // TEST_SUITE
