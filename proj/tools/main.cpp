#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "solmod/profile.hpp"
#include "solmod/study.hpp"

namespace fs = std::filesystem;
using namespace solmod;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "key = value config file (see --config-reference)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "override the config seed")
      ->each([&o](const std::string&) { o.seed_set = true; });
  cmd->add_option("--out", o.out_dir, "output directory, created if missing");
}

StudyConfig load_config(const CommonOpts& o) {
  StudyConfig cfg =
      o.config_path.empty() ? default_study_config() : load_study_config(o.config_path);
  if (o.seed_set) cfg.seed = o.seed;
  validate_study(cfg);
  fs::create_directories(o.out_dir);
  return cfg;
}

std::ofstream open_out(const fs::path& path, bool binary = false) {
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return f;
}

SolitonParams initial_sigma(const StudyConfig& cfg, double eps) {
  const double v0 = cfg.v0_coeff * std::pow(eps, cfg.alpha);
  return make_soliton_params(cfg.a0, v0, cfg.gamma0, cfg.mu0);
}

int run_profile(const CommonOpts& o) {
  const StudyConfig cfg = load_config(o);
  const Profile eta = eta_mu(cfg.grid, cfg.params, cfg.mu0);

  const fs::path path = fs::path(o.out_dir) / "profile.csv";
  auto f = open_out(path);
  f << "x,eta\n";
  char buf[80];
  for (std::size_t j = 0; j < cfg.grid.n; ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", cfg.grid.x(j), eta.values[j]);
    f << buf;
  }

  std::printf("profile: s=%g mu=%g mass=%.12g residual=%.3e -> %s\n", cfg.params.s, cfg.mu0,
              mass(eta), profile_residual(eta, cfg.params), path.string().c_str());
  return 0;
}

int run_simulate(const CommonOpts& o) {
  const StudyConfig cfg = load_config(o);
  const double eps = cfg.eps_single;
  const RoughCoefficient lambda = build_lambda(cfg);
  const LsProjection proj = make_ls_projection(cfg.grid, cfg.params);
  const SolitonParams sigma0 = initial_sigma(cfg, eps);
  const ComplexField phi = make_initial_data(sigma0, eps, cfg.alpha, cfg.fluctuation,
                                             cfg.bump_center, cfg.bump_width,
                                             cfg.init_constant, proj);

  const double T = theorem_horizon(cfg, eps);
  SolverState state = make_solver_state(phi, eps, cfg.params, lambda);
  const auto sample_every =
      static_cast<std::size_t>(std::max(1.0, std::round(cfg.sample_dt / cfg.dt)));
  const auto samples = evolve(state, T, cfg.dt, sample_every);

  const fs::path traj_path = fs::path(o.out_dir) / "trajectory.bin";
  {
    auto f = open_out(traj_path, true);
    write_trajectory(f, cfg.grid, cfg.dt, samples);
  }
  const fs::path diag_path = fs::path(o.out_dir) / "diagnostics.csv";
  {
    auto f = open_out(diag_path);
    write_diagnostics_csv(f, samples, eps, cfg.params, lambda);
  }

  const auto first = diagnostics(samples.front().psi, eps, cfg.params, lambda);
  const auto last = diagnostics(samples.back().psi, eps, cfg.params, lambda);
  std::printf("simulate: eps=%g T=%g samples=%zu energy_drift=%.3e charge_drift=%.3e\n", eps, T,
              samples.size(), std::abs(last.energy - first.energy),
              std::abs(last.charge - first.charge));
  std::printf("simulate: wrote %s and %s\n", traj_path.string().c_str(),
              diag_path.string().c_str());
  return 0;
}

int run_extract(const CommonOpts& o) {
  const StudyConfig cfg = load_config(o);
  const fs::path traj_path = fs::path(o.out_dir) / "trajectory.bin";
  std::ifstream in(traj_path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + traj_path.string() + " (run simulate first)");
  const TrajectoryRecord rec = read_trajectory(in);

  StudyConfig on_grid = cfg;
  on_grid.grid = rec.grid;
  const double eps = cfg.eps_single;
  const RoughCoefficient lambda = build_lambda(on_grid);
  const ExtractorContext ctx = make_extractor_context(rec.grid, cfg.params);
  DecomposeOptions opts;
  opts.tol = cfg.extractor_tol;
  const auto diagnostic = [&](const ComplexField& psi, const Decomposition& d) {
    return lyapunov_functional(psi, d, eps, lambda, cfg.params);
  };

  const ModulationTrajectory traj =
      track(rec.samples, initial_sigma(cfg, eps), ctx, opts, diagnostic);

  const fs::path mod_path = fs::path(o.out_dir) / "modulation.csv";
  {
    auto f = open_out(mod_path);
    write_modulation_csv(f, traj);
  }

  if (traj.truncated)
    std::printf("extract: truncated at sample %zu (t=%.6g)\n", traj.truncated_at,
                rec.samples[traj.truncated_at].t);
  std::printf("extract: %zu samples, max newton iterations %d -> %s\n", traj.samples.size(),
              traj.max_newton_iterations, mod_path.string().c_str());
  return traj.truncated ? 1 : 0;
}

int run_effective(const CommonOpts& o) {
  const StudyConfig cfg = load_config(o);
  const double eps = cfg.eps_single;
  const RoughCoefficient lambda = build_lambda(cfg);
  const double T = theorem_horizon(cfg, eps);
  const auto ode =
      integrate_modulation(initial_sigma(cfg, eps), T, cfg.ode_dt, eps, lambda, cfg.params,
                           cfg.grid);

  const fs::path path = fs::path(o.out_dir) / "effective.csv";
  {
    auto f = open_out(path);
    write_effective_csv(f, ode);
  }
  const auto& end = ode.back().sigma;
  std::printf("effective: eps=%g T=%g a=%.8g v=%.8g gamma=%.8g mu=%.8g -> %s\n", eps, T, end.a,
              end.v, end.gamma, end.mu, path.string().c_str());
  return 0;
}

int run_study_cmd(const CommonOpts& o) {
  const StudyConfig cfg = load_config(o);
  const StudyResult res = run_study(cfg, o.out_dir);

  for (const auto& r : res.records) {
    if (r.failed) {
      std::printf("study: eps=%-8g FAILED: %s\n", r.eps, r.error.c_str());
      continue;
    }
    std::printf("study: eps=%-8g T=%-8.4g y_T=%-12.6g a_gap=%-12.6g mu_gap=%-12.6g%s\n", r.eps,
                r.horizon, r.y_T, r.a_gap_max, r.mu_gap_max,
                r.truncated ? "  [truncated]" : "");
  }
  if (res.fit)
    std::printf("study: slope=%.4f stderr=%.4f over %zu points\n", res.fit->slope,
                res.fit->stderr_slope, res.fit->count);
  std::printf("study: wrote %s\n", (fs::path(o.out_dir) / "summary.json").string().c_str());

  for (const auto& r : res.records)
    if (r.failed) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soliton modulation laboratory for a perturbed 1-D nonlinear"
               " Schroedinger equation"};
  app.require_subcommand(0, 1);

  bool reference = false;
  app.add_flag("--config-reference", reference, "print every config key with its default");

  CommonOpts profile_o, simulate_o, extract_o, effective_o, study_o;
  auto* profile_c = app.add_subcommand("profile", "sample the ground-state profile -> profile.csv");
  add_common(profile_c, profile_o);
  auto* simulate_c =
      app.add_subcommand("simulate", "split-step PDE run -> trajectory.bin, diagnostics.csv");
  add_common(simulate_c, simulate_o);
  auto* extract_c =
      app.add_subcommand("extract", "modulation parameters from trajectory.bin -> modulation.csv");
  add_common(extract_c, extract_o);
  auto* effective_c =
      app.add_subcommand("effective", "effective modulation ODE run -> effective.csv");
  add_common(effective_c, effective_o);
  auto* study_c = app.add_subcommand(
      "study", "epsilon sweep: PDE vs effective ODE -> per-eps CSVs, summary.json");
  add_common(study_c, study_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (reference) {
      std::fputs(config_reference().c_str(), stdout);
      return 0;
    }
    if (profile_c->parsed()) return run_profile(profile_o);
    if (simulate_c->parsed()) return run_simulate(simulate_o);
    if (extract_c->parsed()) return run_extract(extract_o);
    if (effective_c->parsed()) return run_effective(effective_o);
    if (study_c->parsed()) return run_study_cmd(study_o);
    std::fputs(app.help().c_str(), stdout);
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
