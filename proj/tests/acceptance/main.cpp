// Acceptance gate: one line per criterion, nonzero exit on any failure.
// Criteria 1-6 exercise the library in-process; 7 and 8 drive the installed
// CLI binary end to end and read back its summary.json and CSVs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "solmod/effective.hpp"
#include "solmod/extractor.hpp"
#include "solmod/manifold.hpp"
#include "solmod/profile.hpp"
#include "solmod/solver.hpp"
#include "solmod/spectral.hpp"

using namespace solmod;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(3) << x;
  return os.str();
}

GridSpec narrow_grid() { return make_grid(20.0 * std::numbers::pi, 1024); }

double sup_gap(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j)
    m = std::max(m, std::abs(a.values[j] - b.values[j]));
  return m;
}

double l2_gap(const ComplexField& a, const ComplexField& b) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j)
    sum += std::norm(a.values[j] - b.values[j]);
  return std::sqrt(a.grid.dx() * sum);
}

SolitonParams random_sigma(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> da(-1.0, 1.0), dv(-0.5, 0.5), dg(0.0, 6.28),
      dm(0.8, 1.25);
  return make_soliton_params(da(rng), dv(rng), dg(rng), dm(rng));
}

double sigma_gap(const SolitonParams& p, const SolitonParams& q) {
  const double dg = std::abs(reduce_gamma(p.gamma - q.gamma + std::numbers::pi) -
                             std::numbers::pi);
  return std::max({std::abs(p.a - q.a), std::abs(p.v - q.v), dg, std::abs(p.mu - q.mu)});
}

// 1. Closed-form profile: spectral residual and the mass scaling law.
Outcome criterion_profile() {
  // mu = 4 halves the soliton width, so this criterion needs twice the
  // resolution the others use
  const GridSpec g = make_grid(20.0 * std::numbers::pi, 2048);
  double worst_res = 0.0, worst_mass = 0.0;
  for (double s : {0.5, 1.0}) {
    const NonlinearityParams p{s, 1.0, 1};
    worst_res = std::max(worst_res, profile_residual(eta1_closed_form(g, p), p));
    const double m1 = mass(eta1_closed_form(g, p));
    for (double mu : {0.5, 1.0, 2.0, 4.0}) {
      const double want = std::pow(mu, 1.0 / s - 0.5);
      const double got = mass(eta_mu(g, p, mu)) / m1;
      worst_mass = std::max(worst_mass, std::abs(got - want) / want);
    }
  }
  return {worst_res < 1e-8 && worst_mass < 1e-8,
          "residual " + fmt(worst_res) + " (tol 1e-8), mass-scaling rel err " +
              fmt(worst_mass) + " (tol 1e-8)"};
}

// 2. Lie algebra and group structure.
Outcome criterion_group() {
  const GridSpec g = narrow_grid();
  const NonlinearityParams p;
  const ComplexField eta = to_field(eta1_closed_form(g, p));

  // commutators [e1,e2]=-e3, [e1,e4]=e1/2, [e2,e4]=-e2/2, rest zero
  double worst_comm = 0.0;
  const auto bracket = [&](int a, int b) {
    return generator_apply(a, generator_apply(b, eta, p), p) -
           generator_apply(b, generator_apply(a, eta, p), p);
  };
  const auto scaled = [&](int a, double c) {
    ComplexField f = generator_apply(a, eta, p);
    for (auto& v : f.values) v *= c;
    return f;
  };
  worst_comm = std::max(worst_comm, sup_gap(bracket(0, 1), scaled(2, -1.0)));
  worst_comm = std::max(worst_comm, sup_gap(bracket(0, 3), scaled(0, 0.5)));
  worst_comm = std::max(worst_comm, sup_gap(bracket(1, 3), scaled(1, -0.5)));
  const ComplexField zero = zero_field(g);
  worst_comm = std::max(worst_comm, sup_gap(bracket(0, 2), zero));
  worst_comm = std::max(worst_comm, sup_gap(bracket(1, 2), zero));
  worst_comm = std::max(worst_comm, sup_gap(bracket(2, 3), zero));

  // group homomorphism over 100 random pairs
  std::mt19937_64 rng(42);
  double worst_hom = 0.0;
  for (int i = 0; i < 100; ++i) {
    const SolitonParams outer = random_sigma(rng), inner = random_sigma(rng);
    const ComplexField once = apply_T_sigma(group_compose(outer, inner), eta, p, 1e-6);
    const ComplexField twice =
        apply_T_sigma(outer, apply_T_sigma(inner, eta, p, 1e-6), p, 1e-6);
    worst_hom = std::max(worst_hom, sup_gap(once, twice));
  }

  // P(X eta) = X over 100 random coefficient vectors
  const LsProjection proj = make_ls_projection(g, p);
  std::uniform_real_distribution<double> dx(-1.0, 1.0);
  double worst_proj = 0.0;
  std::mt19937_64 rng2(99);
  for (int i = 0; i < 100; ++i) {
    LieCoeffs want{};
    ComplexField u = zero_field(g);
    for (int alpha = 0; alpha < 4; ++alpha) {
      want[static_cast<std::size_t>(alpha)] = dx(rng2);
      const ComplexField e = generator_apply(alpha, eta, p);
      for (std::size_t j = 0; j < g.n; ++j)
        u.values[j] += want[static_cast<std::size_t>(alpha)] * e.values[j];
    }
    const LieCoeffs got = proj.project(u);
    for (int alpha = 0; alpha < 4; ++alpha)
      worst_proj = std::max(worst_proj, std::abs(got[static_cast<std::size_t>(alpha)] -
                                                 want[static_cast<std::size_t>(alpha)]));
  }

  // Omega_mu^{-1} block pattern with numeric m, m'
  double worst_omega = 0.0;
  for (double mu : {1.0, 2.0}) {
    const Mat4 M = omega_inverse_matrix(g, p, mu);
    const double m = mass(eta_mu(g, p, mu));
    const double mp = mass_derivative(g, p, mu);
    Mat4 want{};
    want[0][1] = -m;
    want[1][0] = m;
    want[2][3] = mu * mp;
    want[3][2] = -mu * mp;
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        worst_omega = std::max(worst_omega, std::abs(M[static_cast<std::size_t>(j)]
                                                      [static_cast<std::size_t>(k)] -
                                                     want[static_cast<std::size_t>(j)]
                                                         [static_cast<std::size_t>(k)]));
  }

  const bool pass = worst_comm < 1e-8 && worst_hom < 1e-7 && worst_proj < 1e-7 &&
                    worst_omega < 1e-8;
  return {pass, "commutators " + fmt(worst_comm) + " (1e-8), homomorphism " +
                    fmt(worst_hom) + " (1e-7), projection " + fmt(worst_proj) +
                    " (1e-7), metric blocks " + fmt(worst_omega) + " (1e-8)"};
}

// 3. Zero modes of the linearized operator.
Outcome criterion_zero_modes() {
  const GridSpec g = narrow_grid();
  const NonlinearityParams p;
  const Profile eta = eta1_closed_form(g, p);
  const TangentBasis basis = tangent_basis(eta, p);
  const auto& z_t = basis.vectors[kTranslation];
  const auto& z_b = basis.vectors[kBoost];
  const auto& z_g = basis.vectors[kGauge];
  const auto& z_s = basis.vectors[kScaling];

  const auto times_i = [](ComplexField f, double c) {
    for (auto& v : f.values) v *= cxd(0.0, c);
    return f;
  };
  double worst = 0.0;
  worst = std::max(worst, sup_gap(hessian_apply(eta, p, z_t), zero_field(g)));
  worst = std::max(worst, sup_gap(hessian_apply(eta, p, z_g), zero_field(g)));
  worst = std::max(worst, sup_gap(hessian_apply(eta, p, z_b), times_i(z_t, 2.0)));
  worst = std::max(worst, sup_gap(hessian_apply(eta, p, z_s), times_i(z_g, 1.0)));
  return {worst < 1e-7, "worst zero-mode defect " + fmt(worst) + " (tol 1e-7)"};
}

// 4. Split-step solver fidelity.
Outcome criterion_solver() {
  const NonlinearityParams p;

  // standing soliton, 4096 points, dt = 1e-3, t = 1
  const GridSpec g4 = make_grid(40.0 * std::numbers::pi, 4096);
  const Profile eta4 = eta1_closed_form(g4, p);
  SolverState standing =
      make_solver_state(to_field(eta4), 0.0, p, make_constant_lambda(g4, 0.0));
  evolve(standing, 1.0, 1e-3, 1000);
  ComplexField exact = to_field(eta4);
  for (auto& v : exact.values) v *= std::exp(cxd(0.0, standing.t));
  const double standing_err = l2_gap(standing.psi, exact);

  // traveling soliton to t = 10 with peak tracking; the long horizon needs a
  // wide box and a small step so the scheme's dispersive error stays off the
  // boundary monitor
  const GridSpec g = make_grid(40.0 * std::numbers::pi, 2048);
  const NonlinearityParams pp;
  const ExtractorContext ctx = make_extractor_context(g, pp);
  const SolitonParams sigma0 = make_soliton_params(0.0, 0.1, 0.0, 1.0);
  SolverState travel = make_solver_state(apply_T_sigma(sigma0, to_field(ctx.eta), pp),
                                         0.0, pp, make_constant_lambda(g, 0.0));
  const auto samples = evolve(travel, 10.0, 5e-4, 200);
  const ModulationTrajectory traj = track(samples, sigma0, ctx);
  double track_err = traj.truncated ? 1.0 : 0.0;
  for (const auto& s : traj.samples)
    track_err = std::max(track_err, std::abs(s.sigma.a - 0.1 * s.t));

  // charge conservation along the traveling run
  const double q0 = diagnostics(samples.front().psi, 0.0, pp, travel.lambda).charge;
  double charge_err = 0.0;
  for (const auto& s : samples)
    charge_err =
        std::max(charge_err, std::abs(diagnostics(s.psi, 0.0, pp, travel.lambda).charge - q0) /
                                 q0);

  // energy drift halves like dt^2 on a perturbed run
  const GridSpec gd = narrow_grid();
  const RoughCoefficient bump = make_smooth_bump_lambda(gd, 1.0, 0.0, 5.0);
  const auto drift = [&](double dt) {
    SolverState st = make_solver_state(to_field(eta1_closed_form(gd, pp)), 0.05, pp, bump);
    const double e0 = diagnostics(st).energy;
    evolve(st, 1.0, dt, static_cast<std::size_t>(std::llround(1.0 / dt)));
    return std::abs(diagnostics(st).energy - e0);
  };
  const double ratio = drift(1e-3) / drift(5e-4);

  const bool pass = standing_err < 1e-6 && track_err < 1e-4 && charge_err < 1e-10 &&
                    ratio > 2.0 && ratio < 8.0;
  return {pass, "standing L2 err " + fmt(standing_err) + " (tol 1e-6), tracking err " +
                    fmt(track_err) + " (1e-4), charge drift " + fmt(charge_err) +
                    " (1e-10), energy-drift halving ratio " + fmt(ratio) + " ([2,8])"};
}

// 5. Extractor: recovery, equivariance, energy-shift identity.
Outcome criterion_extractor() {
  const GridSpec g = narrow_grid();
  const NonlinearityParams p;
  const ExtractorContext ctx = make_extractor_context(g, p);
  const ComplexField eta = to_field(ctx.eta);

  std::mt19937_64 rng(7);
  double worst_rec = 0.0;
  for (int i = 0; i < 20; ++i) {
    const SolitonParams truth = random_sigma(rng);
    const ComplexField psi = apply_T_sigma(truth, eta, p);
    const SolitonParams guess = make_soliton_params(truth.a + 0.05, truth.v - 0.05,
                                                    truth.gamma + 0.05, truth.mu * 1.05);
    worst_rec = std::max(worst_rec, sigma_gap(decompose(psi, guess, ctx).sigma, truth));
  }

  const LsProjection proj = make_ls_projection(g, p);
  ComplexField w = proj.remove_tangent([&] {
    ComplexField f = zero_field(g);
    for (std::size_t j = 0; j < g.n; ++j) {
      const double x = g.x(j);
      f.values[j] = std::exp(-(x - 1.0) * (x - 1.0)) * std::exp(cxd(0.0, 0.3 * x));
    }
    return f;
  }());
  const double w_scale = 0.02 / h1_norm(w);
  for (auto& v : w.values) v *= w_scale;
  const SolitonParams base = make_soliton_params(0.2, 0.1, 0.5, 1.1);
  const ComplexField psi = apply_T_sigma(base, eta + w, p);
  const SolitonParams sig_psi = decompose(psi, base, ctx).sigma;
  double worst_eq = 0.0;
  for (int i = 0; i < 10; ++i) {
    const SolitonParams shift = random_sigma(rng);
    const ComplexField moved = apply_T_sigma(shift, psi, p);
    const SolitonParams want = group_compose(shift, sig_psi);
    worst_eq = std::max(worst_eq, sigma_gap(decompose(moved, want, ctx).sigma, want));
  }

  // energy-shift identity on an evolved, perturbed, decomposed state
  const RoughCoefficient lam = make_smooth_bump_lambda(g, 1.0, 0.0, 5.0);
  SolverState st = make_solver_state(psi, 0.05, p, lam);
  const auto samples = evolve(st, 0.5, 1e-3, 500);
  const ComplexField& psi_t = samples.back().psi;
  const Decomposition d = decompose(psi_t, sig_psi, ctx);
  const ConservedDiagnostics diag = diagnostics(psi_t, 0.05, p, lam);
  double f_pert = 0.0;
  for (std::size_t j = 0; j < g.n; ++j) {
    const double m2 = std::norm(psi_t.values[j]);
    f_pert += lam(g.x(j)) * m2 * m2;
  }
  f_pert *= g.dx() / 4.0;
  const SolitonParams tbg =
      make_soliton_params(d.sigma.a, d.sigma.v, d.sigma.gamma, 1.0);
  const ComplexField pulled = apply_T_sigma_inverse(tbg, psi_t, p, 1e-6);
  const double mu = d.sigma.mu;
  const double lhs = centered_energy(pulled, mu, p);
  const double rhs = diag.energy +
                     0.5 * (d.sigma.v * d.sigma.v / 4.0 + mu) * 2.0 * diag.charge -
                     0.5 * d.sigma.v * diag.momentum - 0.05 * f_pert;
  const double energy_gap = std::abs(lhs - rhs);

  const bool pass = worst_rec < 1e-8 && worst_eq < 1e-7 && energy_gap < 1e-8;
  return {pass, "recovery " + fmt(worst_rec) + " (1e-8), equivariance " + fmt(worst_eq) +
                    " (1e-7), energy identity " + fmt(energy_gap) + " (1e-8)"};
}

// 6. Effective potentials and the gauge rate.
Outcome criterion_effective() {
  const GridSpec g = narrow_grid();
  const NonlinearityParams p;
  const EffectiveTable table = make_effective_table(g, p);

  const RoughCoefficient one = make_constant_lambda(g, 1.0);
  const double eps = 0.1;
  const double v_gap = std::abs(v_eff(table, one, eps, 0.7, 1.0) - 4.0 * eps / 3.0);

  const RoughCoefficient bump = make_smooth_bump_lambda(g, 1.0, 0.0, 2.0);
  const double h = 1e-4;
  double grad_rel = 0.0;
  for (double a : {-0.5, 1.0}) {
    const double fd =
        (v_eff(table, bump, eps, a + h, 1.0) - v_eff(table, bump, eps, a - h, 1.0)) /
        (2.0 * h);
    grad_rel = std::max(grad_rel,
                        std::abs(grad_v_eff(table, bump, eps, a, 1.0) - fd) / std::abs(fd));
  }

  const auto ode = integrate_modulation(make_soliton_params(0.0, 0.0, 0.25, 1.0), 1.0,
                                        1e-3, eps, one, p, g);
  const double want = reduce_gamma(0.25 + (1.0 - 4.0 * eps) * 1.0);
  const double gamma_gap = std::abs(ode.back().sigma.gamma - want);

  const bool pass = v_gap < 1e-8 && grad_rel < 1e-6 && gamma_gap < 1e-8;
  return {pass, "constant-coefficient V gap " + fmt(v_gap) + " (1e-8), grad FD rel err " +
                    fmt(grad_rel) + " (1e-6), gauge-rate gap " + fmt(gamma_gap) +
                    " (1e-8)"};
}

std::string sweep_config(const std::string& lambda_kind) {
  std::ostringstream cfg;
  cfg << std::setprecision(17);
  cfg << "epsilons = 0.05, 0.025, 0.0125\n"
      << "alpha = 1.0\nbeta = 0.5\nnu = 0.2\n"
      << "s = 1.0\ns_tilde = 1.0\n"
      << "grid_half_length = " << 40.0 * std::numbers::pi << "\n"
      << "grid_points = 4096\n"
      << "dt = 0.001\nsample_dt = 0.1\n"
      << "horizon_rule = theorem_window\nhorizon_prefactor = 1.0\n"
      << "seed = 12345\n"
      << "lambda_kind = " << lambda_kind << "\n";
  if (lambda_kind == "smooth_bump")
    cfg << "lambda_amplitude = 1.0\nlambda_center = 0.0\nlambda_width = 1.0\n";
  else
    cfg << "lambda_linf = 1.0\nlambda_cells = 64\n";
  return cfg.str();
}

// Runs `cli study` on the given config and parses summary.json.
nlohmann::json run_sweep(const std::string& cli, const fs::path& scratch,
                         const std::string& tag, const std::string& lambda_kind) {
  const fs::path dir = scratch / tag;
  fs::create_directories(dir);
  const fs::path cfg_path = scratch / (tag + ".cfg");
  {
    std::ofstream cfg(cfg_path);
    cfg << sweep_config(lambda_kind);
    if (!cfg) throw std::runtime_error("cannot write " + cfg_path.string());
  }
  const std::string cmd = "\"" + cli + "\" study --config \"" + cfg_path.string() +
                          "\" --out \"" + dir.string() + "\" > \"" +
                          (dir / "cli.log").string() + "\" 2>&1";
  const int rc = std::system(cmd.c_str());
  if (rc != 0) throw std::runtime_error("CLI study run failed, see " +
                                        (dir / "cli.log").string());
  std::ifstream js(dir / "summary.json");
  if (!js) throw std::runtime_error("missing summary.json under " + dir.string());
  nlohmann::json j;
  js >> j;
  return j;
}

// 7. Desk-scale verification of the modulation theorem through the CLI.
Outcome criterion_theorem(const std::string& cli, const fs::path& scratch) {
  const nlohmann::json j = run_sweep(cli, scratch, "c7", "smooth_bump");
  const auto eps = j.at("epsilons").get<std::vector<double>>();
  const auto a_gap = j.at("a_gap_max").get<std::vector<double>>();
  const auto mu_gap = j.at("mu_gap_max").get<std::vector<double>>();
  const auto truncated = j.at("truncated").get<std::vector<bool>>();
  const auto failed = j.at("failed").get<std::vector<bool>>();
  const double slope = j.at("slope").get<double>();

  bool clean = true;
  for (std::size_t i = 0; i < eps.size(); ++i) clean = clean && !truncated[i] && !failed[i];
  bool monotone = eps.size() == 3;
  for (std::size_t i = 0; i + 1 < a_gap.size(); ++i)
    monotone = monotone && a_gap[i] < a_gap[i + 1];
  bool mu_ok = true;
  for (std::size_t i = 0; i < eps.size(); ++i) mu_ok = mu_ok && mu_gap[i] < 5.0 * eps[i];
  const bool a_small = !a_gap.empty() && a_gap.front() < 0.1;

  const bool pass = clean && slope >= 0.5 && monotone && a_small && mu_ok;
  return {pass, std::string("tracking ") + (clean ? "clean" : "TRUNCATED") + ", slope " +
                    fmt(slope) + " (>= 0.5), a-gap at eps=0.0125 " +
                    fmt(a_gap.empty() ? 1.0 : a_gap.front()) + " (< 0.1, monotone " +
                    (monotone ? "yes" : "no") + "), worst mu-gap/eps " +
                    fmt([&] {
                      double w = 0.0;
                      for (std::size_t i = 0; i < eps.size(); ++i)
                        w = std::max(w, mu_gap[i] / eps[i]);
                      return w;
                    }()) +
                    " (< 5)"};
}

// 8. Same sweep with a seeded piecewise-constant coefficient.
Outcome criterion_rough(const std::string& cli, const fs::path& scratch) {
  const nlohmann::json j = run_sweep(cli, scratch, "c8", "random_step");
  const auto eps = j.at("epsilons").get<std::vector<double>>();
  const auto mu_gap = j.at("mu_gap_max").get<std::vector<double>>();
  const auto truncated = j.at("truncated").get<std::vector<bool>>();
  const auto failed = j.at("failed").get<std::vector<bool>>();

  bool clean = eps.size() == 3;
  for (std::size_t i = 0; i < truncated.size(); ++i)
    clean = clean && !truncated[i] && !failed[i];
  bool mu_ok = true;
  for (std::size_t i = 0; i < eps.size(); ++i) mu_ok = mu_ok && mu_gap[i] < 5.0 * eps[i];

  // extractor residuals at every accepted extraction
  double worst_res = 0.0;
  for (double e : {0.05, 0.025, 0.0125}) {
    std::ostringstream name;
    name << "eps" << e << "_modulation.csv";
    std::ifstream csv(scratch / "c8" / name.str());
    if (!csv) return {false, "missing " + name.str()};
    std::string line;
    std::getline(csv, line);  // header
    while (std::getline(csv, line)) {
      std::istringstream row(line);
      std::string cell;
      for (int c = 0; c < 7 && std::getline(row, cell, ','); ++c)
        if (c == 6) worst_res = std::max(worst_res, std::abs(std::stod(cell)));
    }
  }

  const bool pass = clean && mu_ok && worst_res < 1e-8;
  return {pass, std::string("tracking ") + (clean ? "clean" : "TRUNCATED") +
                    ", worst mu-gap/eps " +
                    fmt([&] {
                      double w = 0.0;
                      for (std::size_t i = 0; i < eps.size(); ++i)
                        w = std::max(w, mu_gap[i] / eps[i]);
                      return w;
                    }()) +
                    " (< 5), worst extraction residual " + fmt(worst_res) + " (1e-8)"};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  std::string scratch = "acceptance_runs";
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc)
      cli = argv[++i];
    else if (arg == "--scratch" && i + 1 < argc)
      scratch = argv[++i];
    else {
      std::fprintf(stderr, "usage: acceptance --cli PATH [--scratch DIR]\n");
      return 2;
    }
  }
  if (cli.empty()) {
    std::fprintf(stderr, "usage: acceptance --cli PATH [--scratch DIR]\n");
    return 2;
  }
  fs::create_directories(scratch);

  struct Entry {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries{
      {"ground-state profile", 1.0, criterion_profile},
      {"symmetry group and metric", 10.0, criterion_group},
      {"linearized zero modes", 1.0, criterion_zero_modes},
      {"split-step solver", 120.0, criterion_solver},
      {"modulation extractor", 30.0, criterion_extractor},
      {"effective potentials", 5.0, criterion_effective},
      {"theorem window, smooth coefficient", 1800.0,
       [&] { return criterion_theorem(cli, scratch); }},
      {"theorem window, rough coefficient", 1800.0,
       [&] { return criterion_rough(cli, scratch); }},
  };

  bool all_pass = true;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = entries[i].run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = elapsed < entries[i].budget_s;
    const bool ok = out.pass && in_budget;
    all_pass = all_pass && ok;
    std::printf("criterion %zu [%s] %s (%.1fs%s): %s\n", i + 1, ok ? "PASS" : "FAIL",
                entries[i].name, elapsed,
                in_budget ? "" : ", OVER BUDGET", out.detail.c_str());
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
