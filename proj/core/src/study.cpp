#include "solmod/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "solmod/errors.hpp"
#include "solmod/spectral.hpp"

namespace solmod {
namespace {

std::string fmt_eps(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", eps);
  return buf;
}

}  // namespace

StudyConfig default_study_config() {
  StudyConfig cfg;
  cfg.grid = GridSpec{40.0 * std::numbers::pi, 4096};
  cfg.epsilons = {0.05, 0.025, 0.0125};
  return cfg;
}

void validate_study(const StudyConfig& cfg) {
  make_grid(cfg.grid.half_length, cfg.grid.n);
  validate(cfg.params);
  if (cfg.epsilons.empty()) throw std::invalid_argument("study: empty epsilon list");
  for (double eps : cfg.epsilons)
    if (!(eps >= 0.0) || !(eps < 1.0))
      throw std::invalid_argument("study: every eps must lie in [0, 1)");
  if (!(cfg.eps_single >= 0.0) || !(cfg.eps_single < 1.0))
    throw std::invalid_argument("study: eps must lie in [0, 1)");

  const double cap = std::min(cfg.beta, cfg.alpha - cfg.beta);
  if (!(cfg.nu > 0.0) || !(cfg.nu < cap) || !(cap < cfg.alpha) || !(cfg.alpha <= 1.0))
    throw std::invalid_argument(
        "study: exponents must satisfy 0 < nu < min(beta, alpha-beta) < alpha <= 1");

  if (!(cfg.dt > 0.0)) throw std::invalid_argument("study: dt must be positive");
  if (!(cfg.sample_dt >= cfg.dt))
    throw std::invalid_argument("study: sample_dt must be at least dt");
  if (!(cfg.ode_dt > 0.0) || cfg.ode_dt > 0.1)
    throw std::invalid_argument("study: ode_dt must lie in (0, 0.1]");
  if (!(cfg.extractor_tol > 0.0))
    throw std::invalid_argument("study: extractor_tol must be positive");
  if (!(cfg.init_constant > 0.0))
    throw std::invalid_argument("study: init_constant must be positive");
  if (!(cfg.v0_coeff >= 0.0) || cfg.v0_coeff > cfg.init_constant)
    throw std::invalid_argument("study: v0_coeff must lie in [0, init_constant]");
  if (!(cfg.mu0 > 0.0)) throw std::invalid_argument("study: mu0 must be positive");
  if (!(cfg.bump_width > 0.0)) throw std::invalid_argument("study: bump_width must be positive");
  if (!(cfg.horizon_prefactor > 0.0) || !(cfg.fixed_horizon > 0.0))
    throw std::invalid_argument("study: horizon factors must be positive");
}

StudyConfig study_config_from(KeyValueConfig& kv) {
  StudyConfig cfg = default_study_config();
  cfg.grid.half_length = kv.get_double("grid_half_length", cfg.grid.half_length);
  cfg.grid.n = kv.get_size("grid_points", cfg.grid.n);
  cfg.params.s = kv.get_double("s", cfg.params.s);
  cfg.params.s_tilde = kv.get_double("s_tilde", cfg.params.s_tilde);
  cfg.epsilons = kv.get_double_list("epsilons", cfg.epsilons);
  cfg.eps_single = kv.get_double("eps", cfg.eps_single);
  cfg.alpha = kv.get_double("alpha", cfg.alpha);
  cfg.beta = kv.get_double("beta", cfg.beta);
  cfg.nu = kv.get_double("nu", cfg.nu);
  cfg.a0 = kv.get_double("a0", cfg.a0);
  cfg.gamma0 = kv.get_double("gamma0", cfg.gamma0);
  cfg.mu0 = kv.get_double("mu0", cfg.mu0);
  cfg.v0_coeff = kv.get_double("v0_coeff", cfg.v0_coeff);
  cfg.init_constant = kv.get_double("init_constant", cfg.init_constant);

  const std::string fluct = kv.get_string("fluctuation", "bump");
  if (fluct == "bump")
    cfg.fluctuation = FluctuationKind::bump;
  else if (fluct == "none")
    cfg.fluctuation = FluctuationKind::none;
  else
    throw std::invalid_argument("config: fluctuation must be bump or none");
  cfg.bump_center = kv.get_double("bump_center", cfg.bump_center);
  cfg.bump_width = kv.get_double("bump_width", cfg.bump_width);

  const std::string kind = kv.get_string("lambda_kind", "smooth_bump");
  if (kind == "constant")
    cfg.lambda_kind = RoughKind::constant;
  else if (kind == "smooth_bump")
    cfg.lambda_kind = RoughKind::smooth_bump;
  else if (kind == "random_fourier")
    cfg.lambda_kind = RoughKind::random_fourier;
  else if (kind == "random_step")
    cfg.lambda_kind = RoughKind::random_step;
  else
    throw std::invalid_argument(
        "config: lambda_kind must be constant, smooth_bump, random_fourier or random_step");
  cfg.lambda_amplitude = kv.get_double("lambda_amplitude", cfg.lambda_amplitude);
  cfg.lambda_center = kv.get_double("lambda_center", cfg.lambda_center);
  cfg.lambda_width = kv.get_double("lambda_width", cfg.lambda_width);
  cfg.lambda_linf = kv.get_double("lambda_linf", cfg.lambda_linf);
  cfg.lambda_modes = kv.get_int("lambda_modes", cfg.lambda_modes);
  cfg.lambda_cells = kv.get_int("lambda_cells", cfg.lambda_cells);

  cfg.dt = kv.get_double("dt", cfg.dt);
  cfg.sample_dt = kv.get_double("sample_dt", cfg.sample_dt);
  cfg.ode_dt = kv.get_double("ode_dt", cfg.ode_dt);

  const std::string rule = kv.get_string("horizon_rule", "theorem_window");
  if (rule == "theorem_window")
    cfg.horizon_rule = HorizonRule::theorem_window;
  else if (rule == "fixed")
    cfg.horizon_rule = HorizonRule::fixed;
  else
    throw std::invalid_argument("config: horizon_rule must be theorem_window or fixed");
  cfg.horizon_prefactor = kv.get_double("horizon_prefactor", cfg.horizon_prefactor);
  cfg.fixed_horizon = kv.get_double("fixed_horizon", cfg.fixed_horizon);

  cfg.extractor_tol = kv.get_double("extractor_tol", cfg.extractor_tol);
  cfg.seed = kv.get_u64("seed", cfg.seed);

  kv.reject_unknown_keys();
  validate_study(cfg);
  return cfg;
}

StudyConfig load_study_config(const std::string& path) {
  KeyValueConfig kv = KeyValueConfig::load(path);
  return study_config_from(kv);
}

std::string config_reference() {
  return R"(# All keys with their defaults.  '#' starts a comment.

# Periodic box [-L, L) with a power-of-two sample count.
grid_half_length = 125.66370614359172   # 40*pi
grid_points = 4096

# Nonlinearity exponents: focusing |u|^{2s} u, perturbation eps*lambda*|u|^{2s_tilde} u.
s = 1.0
s_tilde = 1.0

# Sweep values of eps, and the value used by the single-run commands.
epsilons = 0.05, 0.025, 0.0125
eps = 0.05

# Scaling-window exponents, constrained by 0 < nu < min(beta, alpha-beta) < alpha <= 1.
alpha = 1.0
beta = 0.5
nu = 0.2

# Initial data T_{sigma0}(eta + w0) with v0 = v0_coeff * eps^alpha and
# ||w0||_H1 = init_constant * eps^{(1+alpha)/2}.
a0 = 0.0
gamma0 = 0.0
mu0 = 1.0
v0_coeff = 1.0
init_constant = 1.0
fluctuation = bump        # bump | none
bump_center = 1.0
bump_width = 1.0

# Bounded coefficient lambda.
lambda_kind = smooth_bump # constant | smooth_bump | random_fourier | random_step
lambda_amplitude = 1.0    # constant value / bump height
lambda_center = 0.0
lambda_width = 1.0
lambda_linf = 1.0         # sup norm for the random kinds
lambda_modes = 8          # random_fourier mode count
lambda_cells = 64         # random_step cell count
seed = 12345

# Starting split-step time step (the study halves it until the tracked
# observables settle within 1%), extraction cadence, effective-ODE step.
dt = 0.001
sample_dt = 0.1
ode_dt = 0.001

# Horizon: nu*|log eps|/eps^{min(beta-nu,1-alpha)} * prefactor, or a fixed time.
horizon_rule = theorem_window  # theorem_window | fixed
horizon_prefactor = 1.0
fixed_horizon = 1.0            # also used when eps = 0

# Newton tolerance on the symplectic-orthogonality residuals.
extractor_tol = 1e-10
)";
}

double theorem_horizon(const StudyConfig& cfg, double eps) {
  if (cfg.horizon_rule == HorizonRule::fixed || eps == 0.0) return cfg.fixed_horizon;
  if (!(eps > 0.0) || !(eps < 1.0))
    throw std::invalid_argument("horizon: eps must lie in (0, 1)");
  const double expo = std::min(cfg.beta - cfg.nu, 1.0 - cfg.alpha);
  return cfg.horizon_prefactor * cfg.nu * std::abs(std::log(eps)) / std::pow(eps, expo);
}

RoughCoefficient build_lambda(const StudyConfig& cfg) {
  switch (cfg.lambda_kind) {
    case RoughKind::constant:
      return make_constant_lambda(cfg.grid, cfg.lambda_amplitude);
    case RoughKind::smooth_bump:
      return make_smooth_bump_lambda(cfg.grid, cfg.lambda_amplitude, cfg.lambda_center,
                                     cfg.lambda_width);
    case RoughKind::random_fourier:
      return make_random_fourier_lambda(cfg.grid, cfg.lambda_modes, cfg.lambda_linf, cfg.seed);
    case RoughKind::random_step:
      return make_random_step_lambda(cfg.grid, cfg.lambda_cells, cfg.lambda_linf, cfg.seed);
  }
  throw std::logic_error("study: bad lambda kind");
}

ComplexField make_initial_data(const SolitonParams& sigma0, double eps, double alpha,
                               FluctuationKind fluct, double bump_center, double bump_width,
                               double c, const LsProjection& proj) {
  if (!(eps >= 0.0) || !(eps < 1.0))
    throw std::invalid_argument("initial data: eps must lie in [0, 1)");
  if (!(c > 0.0)) throw std::invalid_argument("initial data: c must be positive");

  const double v_cap = c * std::pow(eps, alpha);
  if (std::abs(sigma0.v) > v_cap * (1.0 + 1e-12))
    throw std::invalid_argument("initial data: |v0| exceeds c * eps^alpha");

  const GridSpec& grid = proj.eta.grid;
  ComplexField u = to_field(proj.eta);

  const double w_target = c * std::pow(eps, 0.5 * (1.0 + alpha));
  if (fluct == FluctuationKind::bump && w_target > 0.0) {
    ComplexField bump = zero_field(grid);
    for (std::size_t j = 0; j < grid.n; ++j) {
      const double r = (grid.x(j) - bump_center) / bump_width;
      bump.values[j] = std::exp(-r * r);
    }
    ComplexField w0 = proj.remove_tangent(bump);
    const double nrm = h1_norm(w0);
    if (!(nrm > 0.0))
      throw std::runtime_error("initial data: fluctuation vanished after orthogonalization");
    const double scale = w_target / nrm;
    for (std::size_t j = 0; j < grid.n; ++j) u.values[j] += scale * w0.values[j];
  }
  return apply_T_sigma(sigma0, u, proj.params);
}

FitResult fit_scaling(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3)
    throw std::invalid_argument("fit: need at least three (eps, y) points");
  std::vector<double> xs(points.size()), ys(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].first > 0.0) || !(points[i].second > 0.0))
      throw std::invalid_argument("fit: eps and y must be positive");
    xs[i] = std::log(points[i].first);
    ys[i] = std::log(points[i].second);
  }
  const double n = static_cast<double>(points.size());
  const double xbar = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double ybar = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
  }
  if (!(sxx > 0.0))
    throw std::invalid_argument("fit: degenerate data, all eps equal");

  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  fit.count = points.size();
  double ssr = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ssr += r * r;
  }
  fit.stderr_slope = std::sqrt(ssr / (n - 2.0) / sxx);
  return fit;
}

namespace {

struct EpsOutcome {
  EpsilonRecord record;
  std::string modulation_csv;
  std::string effective_csv;
  std::string diagnostics_csv;
};

// One full run at a fixed split-step dt: evolve, extract, effective ODE.
struct EpsAttempt {
  std::vector<TrajectorySample> samples;
  ModulationTrajectory traj;
  std::vector<EffectiveOdeSample> ode;
  double sample_dt = 0.0;
  double y_T = 0.0;
  double z_T = 0.0;
  double a_gap = 0.0;
  double mu_gap = 0.0;
};

EpsOutcome run_one_eps(const StudyConfig& cfg, double eps, const RoughCoefficient& lambda,
                       const ExtractorContext& ctx, const LsProjection& proj) {
  EpsOutcome out;
  out.record.eps = eps;
  try {
    const double T = theorem_horizon(cfg, eps);
    out.record.horizon = T;

    const double v0 = cfg.v0_coeff * std::pow(eps, cfg.alpha);
    const SolitonParams sigma0 = make_soliton_params(cfg.a0, v0, cfg.gamma0, cfg.mu0);
    const ComplexField phi =
        make_initial_data(sigma0, eps, cfg.alpha, cfg.fluctuation, cfg.bump_center,
                          cfg.bump_width, cfg.init_constant, proj);

    const auto diagnostic = [&](const ComplexField& psi, const Decomposition& d) {
      return lyapunov_functional(psi, d, eps, lambda, cfg.params);
    };
    DecomposeOptions opts;
    opts.tol = cfg.extractor_tol;

    const auto run_at = [&](double dt) {
      EpsAttempt at;
      // The extraction cadence is halved (up to twice) when warm-started
      // Newton works too hard or loses the trajectory.
      at.sample_dt = cfg.sample_dt;
      for (int attempt = 0;; ++attempt) {
        SolverState state = make_solver_state(phi, eps, cfg.params, lambda);
        const auto sample_every =
            static_cast<std::size_t>(std::max(1.0, std::round(at.sample_dt / dt)));
        at.samples = evolve(state, T, dt, sample_every);
        at.traj = track(at.samples, sigma0, ctx, opts, diagnostic);
        if ((!at.traj.truncated && at.traj.max_newton_iterations <= 10) || attempt == 2) break;
        at.sample_dt *= 0.5;
      }

      for (const auto& s : at.traj.samples) {
        at.y_T = std::max(at.y_T, s.h1_w_prime);
        at.z_T = std::max(at.z_T, std::abs(s.sigma.v));
        at.mu_gap = std::max(at.mu_gap, std::abs(s.sigma.mu - cfg.mu0));
      }

      if (!at.traj.samples.empty()) {
        // Effective dynamics seeded from the extracted t = 0 parameters,
        // stepped so that every extraction time lands on an ODE node.
        const auto per_sample =
            static_cast<std::size_t>(std::max(1.0, std::ceil(at.sample_dt / cfg.ode_dt)));
        const double dt_ode = at.sample_dt / static_cast<double>(per_sample);
        at.ode = integrate_modulation(at.traj.samples.front().sigma, T + 2.0 * dt_ode, dt_ode,
                                      eps, lambda, cfg.params, cfg.grid);
        for (const auto& s : at.traj.samples) {
          const auto idx = static_cast<std::size_t>(std::llround(s.t / dt_ode));
          if (idx >= at.ode.size()) continue;
          at.a_gap = std::max(at.a_gap, std::abs(s.sigma.a - at.ode[idx].sigma.a));
        }
      }
      return at;
    };

    // Halve dt until the observables move by less than 1% between successive
    // refinements (capped at three halvings); the finer pass is kept.
    const auto settled = [](double fine, double coarse) {
      const double scale = std::max({std::abs(fine), std::abs(coarse), 1e-9});
      return std::abs(fine - coarse) <= 0.01 * scale;
    };
    double dt = cfg.dt;
    EpsAttempt kept = run_at(dt);
    bool converged = false;
    for (int halvings = 0; halvings < 3 && !kept.traj.truncated; ++halvings) {
      EpsAttempt finer = run_at(dt / 2.0);
      const bool ok = !finer.traj.truncated && settled(finer.y_T, kept.y_T) &&
                      settled(finer.z_T, kept.z_T) && settled(finer.a_gap, kept.a_gap) &&
                      settled(finer.mu_gap, kept.mu_gap);
      dt /= 2.0;
      kept = std::move(finer);
      if (ok) {
        converged = true;
        break;
      }
      if (kept.traj.truncated) break;
    }

    out.record.dt_used = dt;
    out.record.dt_converged = converged;
    out.record.sample_dt_used = kept.sample_dt;
    out.record.newton_max = kept.traj.max_newton_iterations;
    out.record.truncated = kept.traj.truncated;
    if (kept.traj.truncated) out.record.truncation_time = kept.samples[kept.traj.truncated_at].t;
    out.record.y_T = kept.y_T;
    out.record.z_T = kept.z_T;
    out.record.a_gap_max = kept.a_gap;
    out.record.mu_gap_max = kept.mu_gap;

    if (!kept.ode.empty()) {
      std::ostringstream eff;
      write_effective_csv(eff, kept.ode);
      out.effective_csv = eff.str();
    }

    std::ostringstream mod;
    write_modulation_csv(mod, kept.traj);
    out.modulation_csv = mod.str();

    std::ostringstream diag;
    write_diagnostics_csv(diag, kept.samples, eps, cfg.params, lambda);
    out.diagnostics_csv = diag.str();
  } catch (const std::exception& e) {
    out.record.failed = true;
    out.record.error = e.what();
  }
  return out;
}

}  // namespace

StudyResult run_study(const StudyConfig& cfg, const std::string& out_dir) {
  validate_study(cfg);
  const RoughCoefficient lambda = build_lambda(cfg);
  const ExtractorContext ctx = make_extractor_context(cfg.grid, cfg.params);
  const LsProjection proj = make_ls_projection(cfg.grid, cfg.params);

  std::vector<std::future<EpsOutcome>> futures;
  futures.reserve(cfg.epsilons.size());
  for (double eps : cfg.epsilons)
    futures.push_back(std::async(std::launch::async, run_one_eps, std::cref(cfg), eps,
                                 std::cref(lambda), std::cref(ctx), std::cref(proj)));

  std::vector<EpsOutcome> outcomes;
  outcomes.reserve(futures.size());
  for (auto& f : futures) outcomes.push_back(f.get());
  std::sort(outcomes.begin(), outcomes.end(),
            [](const EpsOutcome& a, const EpsOutcome& b) { return a.record.eps < b.record.eps; });

  StudyResult result;
  for (const auto& o : outcomes) result.records.push_back(o.record);

  std::vector<std::pair<double, double>> fit_points;
  for (const auto& r : result.records)
    if (!r.failed && !r.truncated && r.eps > 0.0 && r.y_T > 0.0)
      fit_points.emplace_back(r.eps, r.y_T);
  if (fit_points.size() >= 3) result.fit = fit_scaling(fit_points);

  if (!out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    for (const auto& o : outcomes) {
      const std::string tag = "eps" + fmt_eps(o.record.eps);
      auto dump = [&](const std::string& name, const std::string& text) {
        if (text.empty()) return;
        std::ofstream f(fs::path(out_dir) / (tag + "_" + name));
        f << text;
        if (!f) throw std::runtime_error("study: failed writing " + name);
      };
      dump("modulation.csv", o.modulation_csv);
      dump("effective.csv", o.effective_csv);
      dump("diagnostics.csv", o.diagnostics_csv);
    }
    std::ofstream js(fs::path(out_dir) / "summary.json");
    js << summary_json(cfg, result) << "\n";
    if (!js) throw std::runtime_error("study: failed writing summary.json");
  }
  return result;
}

std::string summary_json(const StudyConfig& cfg, const StudyResult& result) {
  nlohmann::json j;
  j["seed"] = cfg.seed;
  j["epsilons"] = nlohmann::json::array();
  j["horizon"] = nlohmann::json::array();
  j["y_T"] = nlohmann::json::array();
  j["z_T"] = nlohmann::json::array();
  j["a_gap_max"] = nlohmann::json::array();
  j["mu_gap_max"] = nlohmann::json::array();
  j["truncated"] = nlohmann::json::array();
  j["failed"] = nlohmann::json::array();
  j["dt_used"] = nlohmann::json::array();
  for (const auto& r : result.records) {
    j["epsilons"].push_back(r.eps);
    j["horizon"].push_back(r.horizon);
    j["y_T"].push_back(r.y_T);
    j["z_T"].push_back(r.z_T);
    j["a_gap_max"].push_back(r.a_gap_max);
    j["mu_gap_max"].push_back(r.mu_gap_max);
    j["truncated"].push_back(r.truncated);
    j["failed"].push_back(r.failed);
    j["dt_used"].push_back(r.dt_used);
  }
  if (result.fit) {
    j["slope"] = result.fit->slope;
    j["intercept"] = result.fit->intercept;
    j["stderr"] = result.fit->stderr_slope;
  } else {
    j["slope"] = nullptr;
    j["intercept"] = nullptr;
    j["stderr"] = nullptr;
  }
  return j.dump(2);
}

}  // namespace solmod
