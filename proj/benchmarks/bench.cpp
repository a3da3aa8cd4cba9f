// Hot paths: one split step, one group transform, one Newton decomposition,
// one effective-potential evaluation.

#include <benchmark/benchmark.h>

#include <numbers>

#include "solmod/effective.hpp"
#include "solmod/extractor.hpp"
#include "solmod/manifold.hpp"
#include "solmod/profile.hpp"
#include "solmod/solver.hpp"

using namespace solmod;

namespace {

GridSpec wide_grid() { return make_grid(40.0 * std::numbers::pi, 4096); }
GridSpec narrow_grid() { return make_grid(20.0 * std::numbers::pi, 1024); }

void BM_split_step_4096(benchmark::State& state) {
  const GridSpec g = wide_grid();
  const NonlinearityParams p;
  SolverState st = make_solver_state(to_field(eta1_closed_form(g, p)), 0.05, p,
                                     make_smooth_bump_lambda(g, 1.0, 0.0, 1.0));
  for (auto _ : state) {
    step(st, 1e-4);
    benchmark::DoNotOptimize(st.psi.values.data());
  }
}

void BM_group_transform_1024(benchmark::State& state) {
  const GridSpec g = narrow_grid();
  const NonlinearityParams p;
  const ComplexField eta = to_field(eta1_closed_form(g, p));
  const SolitonParams sigma = make_soliton_params(0.3, 0.2, 1.0, 1.2);
  for (auto _ : state) {
    ComplexField out = apply_T_sigma(sigma, eta, p);
    benchmark::DoNotOptimize(out.values.data());
  }
}

void BM_decompose_1024(benchmark::State& state) {
  const GridSpec g = narrow_grid();
  const NonlinearityParams p;
  const ExtractorContext ctx = make_extractor_context(g, p);
  const SolitonParams truth = make_soliton_params(0.3, 0.1, 0.8, 1.1);
  const ComplexField psi = apply_T_sigma(truth, to_field(ctx.eta), p);
  const SolitonParams guess =
      make_soliton_params(0.32, 0.09, 0.82, 1.08);
  for (auto _ : state) {
    Decomposition d = decompose(psi, guess, ctx);
    benchmark::DoNotOptimize(d.sigma.a);
  }
}

void BM_effective_potential_1024(benchmark::State& state) {
  const GridSpec g = narrow_grid();
  const NonlinearityParams p;
  const EffectiveTable table = make_effective_table(g, p);
  const RoughCoefficient lam = make_random_step_lambda(g, 64, 1.0, 7);
  double a = 0.0;
  for (auto _ : state) {
    a += 1e-3;
    benchmark::DoNotOptimize(v_eff(table, lam, 0.05, a, 1.0));
  }
}

BENCHMARK(BM_split_step_4096);
BENCHMARK(BM_group_transform_1024);
BENCHMARK(BM_decompose_1024);
BENCHMARK(BM_effective_potential_1024);

}  // namespace

BENCHMARK_MAIN();
