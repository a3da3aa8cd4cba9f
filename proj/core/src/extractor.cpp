#include "solmod/extractor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "solmod/errors.hpp"
#include "solmod/spectral.hpp"

namespace solmod {
namespace {

constexpr double kMuFloor = 1e-8;

using Vec4 = std::array<double, 4>;

double max_abs(const Vec4& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Gaussian elimination with partial pivoting on the 4x4 Newton system.
Vec4 solve4(Mat4 a, Vec4 b) {
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) < 1e-300)
      throw NoConvergence("decompose: singular Newton system");
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (int r = col + 1; r < 4; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  Vec4 x{};
  for (int r = 3; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 4; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return x;
}

struct Unknowns {
  double a, v, gamma, mu;  // gamma unreduced while iterating

  SolitonParams params() const { return make_soliton_params(a, v, gamma, mu); }
  Unknowns shifted(int p, double h) const {
    Unknowns u = *this;
    (p == 0 ? u.a : p == 1 ? u.v : p == 2 ? u.gamma : u.mu) += h;
    return u;
  }
};

Vec4 orthogonality_residual(const ComplexField& psi, const Unknowns& u,
                            const ExtractorContext& ctx, double tail_tol,
                            ComplexField* w_out) {
  if (!(u.mu > kMuFloor))
    throw std::runtime_error("decompose: iterate drove mu to zero");
  const ComplexField pulled = apply_T_sigma_inverse(
      SolitonParams{u.a, u.v, u.gamma, u.mu}, psi, ctx.params, tail_tol);
  ComplexField w = pulled;
  for (std::size_t j = 0; j < w.values.size(); ++j) w.values[j] -= ctx.eta.values[j];
  Vec4 f;
  for (int alpha = 0; alpha < 4; ++alpha)
    f[static_cast<std::size_t>(alpha)] =
        symplectic_form(w, ctx.basis.vectors[static_cast<std::size_t>(alpha)]);
  if (w_out) *w_out = std::move(w);
  return f;
}

}  // namespace

ExtractorContext make_extractor_context(const GridSpec& grid, const NonlinearityParams& p) {
  ExtractorContext ctx;
  ctx.eta = eta1_closed_form(grid, p);
  ctx.basis = tangent_basis(ctx.eta, p);
  ctx.params = p;
  return ctx;
}

Decomposition decompose(const ComplexField& psi, const SolitonParams& guess,
                        const ExtractorContext& ctx, const DecomposeOptions& opts) {
  require_same_grid(psi.grid, ctx.eta.grid);
  Unknowns u{guess.a, guess.v, guess.gamma, guess.mu};

  ComplexField w = zero_field(psi.grid);
  Vec4 f = orthogonality_residual(psi, u, ctx, opts.tail_tol, &w);

  int iter = 0;
  while (max_abs(f) >= opts.tol) {
    if (iter >= opts.max_iterations)
      throw NoConvergence("decompose: no convergence after iteration cap");
    ++iter;

    Mat4 jac{};
    for (int p = 0; p < 4; ++p) {
      const Vec4 fp =
          orthogonality_residual(psi, u.shifted(p, opts.fd_step), ctx, opts.tail_tol, nullptr);
      for (int alpha = 0; alpha < 4; ++alpha)
        jac[static_cast<std::size_t>(alpha)][static_cast<std::size_t>(p)] =
            (fp[static_cast<std::size_t>(alpha)] - f[static_cast<std::size_t>(alpha)]) /
            opts.fd_step;
    }
    Vec4 delta = solve4(jac, f);
    for (double& d : delta) d = -d;

    // Backtracking: halve until the residual actually drops.
    bool accepted = false;
    for (double damp = 1.0; damp >= 1.0 / 256.0; damp *= 0.5) {
      Unknowns trial{u.a + damp * delta[0], u.v + damp * delta[1],
                     u.gamma + damp * delta[2], u.mu + damp * delta[3]};
      if (!(trial.mu > kMuFloor)) continue;
      ComplexField w_trial = zero_field(psi.grid);
      Vec4 f_trial;
      try {
        f_trial = orthogonality_residual(psi, trial, ctx, opts.tail_tol, &w_trial);
      } catch (const SupportOverflow&) {
        continue;
      }
      if (max_abs(f_trial) < max_abs(f) || max_abs(f_trial) < opts.tol) {
        u = trial;
        f = f_trial;
        w = std::move(w_trial);
        accepted = true;
        break;
      }
    }
    if (!accepted) throw NoConvergence("decompose: Newton step rejected at all dampings");
  }

  Decomposition d;
  d.sigma = u.params();
  d.w = std::move(w);
  d.residual = max_abs(f);
  d.h1_norm_w = h1_norm(d.w);
  d.iterations = iter;
  return d;
}

Decomposition decompose(const ComplexField& psi, const SolitonParams& guess,
                        const NonlinearityParams& p, const DecomposeOptions& opts) {
  return decompose(psi, guess, make_extractor_context(psi.grid, p), opts);
}

ModulationTrajectory track(std::span<const TrajectorySample> samples,
                           const SolitonParams& guess, const ExtractorContext& ctx,
                           const DecomposeOptions& opts, const SampleDiagnostic& diagnostic) {
  ModulationTrajectory traj;
  SolitonParams warm = guess;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    Decomposition d;
    try {
      d = decompose(samples[i].psi, warm, ctx, opts);
    } catch (const std::exception&) {
      traj.truncated = true;
      traj.truncated_at = i;
      return traj;
    }
    traj.max_newton_iterations = std::max(traj.max_newton_iterations, d.iterations);

    ModulationSample rec;
    rec.t = samples[i].t;
    rec.sigma = d.sigma;
    rec.residual = d.residual;
    rec.h1_w_prime = h1_norm(apply_scaling(d.sigma.mu, d.w, ctx.params));
    rec.lyapunov = diagnostic ? diagnostic(samples[i].psi, d) : 0.0;
    traj.samples.push_back(rec);

    warm = d.sigma;
    if (i + 1 < samples.size())
      warm.a += warm.v * (samples[i + 1].t - samples[i].t);
  }
  return traj;
}

void write_modulation_csv(std::ostream& out, const ModulationTrajectory& traj) {
  out << "t,a,v,gamma,mu,h1_w,residual,lyapunov\n";
  char buf[256];
  for (const auto& s : traj.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  s.t, s.sigma.a, s.sigma.v, s.sigma.gamma, s.sigma.mu, s.h1_w_prime,
                  s.residual, s.lyapunov);
    out << buf;
  }
}

}  // namespace solmod
