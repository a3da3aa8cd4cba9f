#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "solmod/field.hpp"
#include "solmod/profile.hpp"

namespace solmod {

enum class RoughKind { constant, smooth_bump, random_fourier, random_step };

/// Bounded coefficient lambda in the perturbation eps*lambda(x)*|u|^{2st} u.
/// Only pointwise evaluation is ever used: lambda may be merely L-infinity,
/// so it is never smoothed or interpolated.
struct RoughCoefficient {
  RoughKind kind = RoughKind::constant;
  GridSpec grid;
  std::vector<double> grid_values;  // lambda(x_j), the solver's multiplier table

  // constant / smooth_bump
  double amplitude = 1.0;
  double center = 0.0;
  double width = 1.0;
  // random_fourier: amplitude * sum_{m=1..modes} cos(m pi x / L + phase_m),
  // rescaled so max_j |lambda(x_j)| equals linf_bound
  std::vector<double> phases;
  // random_step: cell edges in (-L, L), ascending; values[i] on
  // [edges[i-1], edges[i]), values.front() also left of edges.front()
  std::vector<double> edges;
  std::vector<double> step_values;
  std::uint64_t seed = 0;

  /// Exact value of lambda at any point (periodic extension of the box).
  double operator()(double x) const;
  double linf() const;
};

RoughCoefficient make_constant_lambda(const GridSpec& grid, double value);
RoughCoefficient make_smooth_bump_lambda(const GridSpec& grid, double amplitude,
                                         double center, double width);
RoughCoefficient make_random_fourier_lambda(const GridSpec& grid, int modes,
                                            double linf_bound, std::uint64_t seed);
RoughCoefficient make_random_step_lambda(const GridSpec& grid, int cells,
                                         double linf_bound, std::uint64_t seed);

struct SolverState {
  ComplexField psi;
  double t = 0.0;
  double eps = 0.0;  // in [0, 1)
  NonlinearityParams params;
  RoughCoefficient lambda;
};

SolverState make_solver_state(ComplexField psi, double eps, const NonlinearityParams& p,
                              RoughCoefficient lambda);

// One Strang step: half nonlinear phase, full kinetic multiplier
// exp(-i k^2 dt), half nonlinear phase.  Requires dt > 0 and
// dt * k_max^2 < pi.  Throws std::runtime_error on NaN/overflow.
void step(SolverState& state, double dt);

struct TrajectorySample {
  double t = 0.0;
  ComplexField psi;
};

// Integrates to T = nsteps*dt (nsteps = round(T/dt)), recording t = 0, every
// sample_every-th step, and the final state.  Throws SupportOverflow when a
// sampled state's boundary tail exceeds 1e-8 (the scheme's own dispersive
// noise floor stays below that; a soliton nearing the box edge does not).
std::vector<TrajectorySample> evolve(SolverState& state, double T, double dt,
                                     std::size_t sample_every);

struct ConservedDiagnostics {
  double energy = 0.0;    // (1/2)int|u'|^2 - G + eps*F
  double charge = 0.0;    // (1/2)int|u|^2
  double momentum = 0.0;  // Im int conj(u) u'
};

ConservedDiagnostics diagnostics(const SolverState& state);
ConservedDiagnostics diagnostics(const ComplexField& psi, double eps,
                                 const NonlinearityParams& p, const RoughCoefficient& lambda);

// |d/dt momentum - eps*2*Re int f conj(psi')|, f = lambda |psi|^{2st} psi,
// with centered differences over the sample times; one entry per interior
// sample, as (t, residual).
std::vector<std::pair<double, double>> ehrenfest_residual(
    std::span<const TrajectorySample> samples, double eps, const NonlinearityParams& p,
    const RoughCoefficient& lambda);

// Binary trajectory record (little-endian): header double L, uint64 n,
// double dt, then per sample a double t followed by n interleaved re/im
// doubles.
void write_trajectory(std::ostream& out, const GridSpec& grid, double dt,
                      std::span<const TrajectorySample> samples);

struct TrajectoryRecord {
  GridSpec grid;
  double dt = 0.0;
  std::vector<TrajectorySample> samples;
};

TrajectoryRecord read_trajectory(std::istream& in);

/// CSV rows t,energy,charge,momentum for each sample.
void write_diagnostics_csv(std::ostream& out, std::span<const TrajectorySample> samples,
                           double eps, const NonlinearityParams& p,
                           const RoughCoefficient& lambda);

}  // namespace solmod
