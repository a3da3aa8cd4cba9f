#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "solmod/config.hpp"
#include "solmod/effective.hpp"
#include "solmod/extractor.hpp"
#include "solmod/manifold.hpp"
#include "solmod/solver.hpp"

namespace solmod {

enum class FluctuationKind { none, bump };
enum class HorizonRule { theorem_window, fixed };

/// Everything a sweep needs; see config_reference() for the file keys.
struct StudyConfig {
  GridSpec grid{};
  NonlinearityParams params{};
  std::vector<double> epsilons;
  double eps_single = 0.05;  // for the single-run commands

  // scaling window exponents, 0 < nu < min(beta, alpha - beta) < alpha <= 1
  double alpha = 1.0;
  double beta = 0.5;
  double nu = 0.2;

  // initial data: T_{sigma0}(eta + w0), v0 = v0_coeff * eps^alpha,
  // ||w0||_H1 = init_constant * eps^{(1+alpha)/2}
  double a0 = 0.0;
  double gamma0 = 0.0;
  double mu0 = 1.0;
  double v0_coeff = 1.0;
  double init_constant = 1.0;
  FluctuationKind fluctuation = FluctuationKind::bump;
  double bump_center = 1.0;
  double bump_width = 1.0;

  RoughKind lambda_kind = RoughKind::smooth_bump;
  double lambda_amplitude = 1.0;
  double lambda_center = 0.0;
  double lambda_width = 1.0;
  double lambda_linf = 1.0;
  int lambda_modes = 8;
  int lambda_cells = 64;

  double dt = 1e-3;
  double sample_dt = 0.1;
  double ode_dt = 1e-3;

  HorizonRule horizon_rule = HorizonRule::theorem_window;
  double horizon_prefactor = 1.0;
  double fixed_horizon = 1.0;

  double extractor_tol = 1e-10;
  std::uint64_t seed = 12345;
};

StudyConfig default_study_config();
// Throws std::invalid_argument when the exponent window or any step size is
// out of range.
void validate_study(const StudyConfig& cfg);

StudyConfig study_config_from(KeyValueConfig& kv);
StudyConfig load_study_config(const std::string& path);
/// Self-documenting config text with every key at its default.
std::string config_reference();

// nu * |log eps| / eps^{min(beta - nu, 1 - alpha)} * prefactor; the fixed
// rule (and eps = 0, whose window is unbounded) returns fixed_horizon.
double theorem_horizon(const StudyConfig& cfg, double eps);

RoughCoefficient build_lambda(const StudyConfig& cfg);

// T_{sigma0}(eta + w0): w0 is a fixed smooth bump made symplectically
// orthogonal to the tangent directions and scaled to H1 norm
// c * eps^{(1+alpha)/2}.  Throws std::invalid_argument when |sigma0.v|
// exceeds c * eps^alpha.
ComplexField make_initial_data(const SolitonParams& sigma0, double eps, double alpha,
                               FluctuationKind fluct, double bump_center, double bump_width,
                               double c, const LsProjection& proj);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  std::size_t count = 0;
};

// Least squares on (log eps, log y).  Throws std::invalid_argument on fewer
// than three points, nonpositive entries, or all eps equal.
FitResult fit_scaling(std::span<const std::pair<double, double>> points);

struct EpsilonRecord {
  double eps = 0.0;
  double horizon = 0.0;
  double y_T = 0.0;        // sup_t ||w'(t)||_H1
  double z_T = 0.0;        // sup_t |v(t)|
  double a_gap_max = 0.0;  // sup_t |a_pde - a_ode|
  double mu_gap_max = 0.0;  // sup_t |mu(t) - mu0|
  double truncation_time = 0.0;
  bool truncated = false;
  bool failed = false;     // run aborted (support overflow, blowup, ...)
  std::string error;
  int newton_max = 0;
  double sample_dt_used = 0.0;
  double dt_used = 0.0;       // final (possibly halved) split-step dt
  bool dt_converged = false;  // observables moved < 1% on the last halving
};

struct StudyResult {
  std::vector<EpsilonRecord> records;  // ascending in eps
  std::optional<FitResult> fit;        // log y_T vs log eps, when >= 3 clean points
};

// Full sweep: per eps, PDE run + extraction + effective ODE, with dt halved
// until the tracked observables move by less than 1% between refinements
// (at most three halvings).  Concurrent across eps, merged by sorting on
// eps.  Per-eps failures are recorded, not fatal.  When out_dir is nonempty,
// writes per-eps CSVs and summary.json.
StudyResult run_study(const StudyConfig& cfg, const std::string& out_dir);

std::string summary_json(const StudyConfig& cfg, const StudyResult& result);

}  // namespace solmod
