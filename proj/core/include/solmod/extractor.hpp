#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "solmod/manifold.hpp"
#include "solmod/solver.hpp"

namespace solmod {

/// Result of splitting psi = T_sigma(eta + w) with w symplectically
/// orthogonal to the tangent space at eta_1.
struct Decomposition {
  SolitonParams sigma;
  ComplexField w;           // fluctuation in the soliton frame
  double residual = 0.0;    // max_alpha |omega(w, e_alpha eta_1)|
  double h1_norm_w = 0.0;   // H1 norm of w
  int iterations = 0;       // Newton iterations used
};

struct DecomposeOptions {
  double tol = 1e-10;      // on max_alpha |omega(w, e_alpha eta_1)|
  int max_iterations = 50;
  double fd_step = 1e-6;   // forward-difference step for the Jacobian
  // Solver trajectories carry a dispersive round-off floor at the boundary,
  // so the frame changes inside the Newton loop tolerate more than the
  // strict transform default.
  double tail_tol = 1e-8;
};

// Basis data reused across repeated decompositions on one grid.
struct ExtractorContext {
  Profile eta;         // eta_1
  TangentBasis basis;  // at mu = 1
  NonlinearityParams params;
};

ExtractorContext make_extractor_context(const GridSpec& grid, const NonlinearityParams& p);

// Damped Newton refinement of sigma from the given guess.  Throws
// NoConvergence when the orthogonality system cannot be solved, and
// std::runtime_error if an iterate drives mu to zero.
Decomposition decompose(const ComplexField& psi, const SolitonParams& guess,
                        const ExtractorContext& ctx, const DecomposeOptions& opts = {});
Decomposition decompose(const ComplexField& psi, const SolitonParams& guess,
                        const NonlinearityParams& p, const DecomposeOptions& opts = {});

struct ModulationSample {
  double t = 0.0;
  SolitonParams sigma;
  double h1_w_prime = 0.0;  // H1 norm of w' = T^s_mu w
  double residual = 0.0;
  double lyapunov = 0.0;
};

struct ModulationTrajectory {
  std::vector<ModulationSample> samples;
  bool truncated = false;
  std::size_t truncated_at = 0;   // index of the first failed sample
  int max_newton_iterations = 0;
};

/// Optional per-sample diagnostic (e.g. the Lyapunov functional).
using SampleDiagnostic = std::function<double(const ComplexField& psi, const Decomposition&)>;

// Decomposes each sample, warm-starting Newton from the previous parameters
// with the translation advanced by v*dt.  A failed sample truncates the
// trajectory; earlier samples are kept.
ModulationTrajectory track(std::span<const TrajectorySample> samples,
                           const SolitonParams& guess, const ExtractorContext& ctx,
                           const DecomposeOptions& opts = {},
                           const SampleDiagnostic& diagnostic = nullptr);

/// CSV rows t,a,v,gamma,mu,h1_w,residual,lyapunov.
void write_modulation_csv(std::ostream& out, const ModulationTrajectory& traj);

}  // namespace solmod
