#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "twinfringe/detection_oracle.hpp"
#include "twinfringe/fringe_analytics.hpp"
#include "twinfringe/inverse_estimation.hpp"
#include "twinfringe/optics_config.hpp"
#include "twinfringe/special_functions.hpp"

using namespace twinfringe;

namespace
{

ExperimentConfig partial()
{
  ExperimentConfig cfg = reference_config();
  cfg.model = CorrelationModel::GaussianPartial;
  cfg.sigma_theta = 9.37e-4;
  return cfg;
}

} // namespace

static void BM_Faddeeva(benchmark::State& state)
{
  const special::Complex z{1.3, 0.4};
  for (auto _ : state)
    benchmark::DoNotOptimize(special::faddeeva(z));
}
BENCHMARK(BM_Faddeeva);

static void BM_VisibilityClosedForm(benchmark::State& state)
{
  const ExperimentConfig cfg = partial();
  for (auto _ : state)
    benchmark::DoNotOptimize(visibility_closed_form(1.1e-3, cfg));
}
BENCHMARK(BM_VisibilityClosedForm);

static void BM_QuadratureRate(benchmark::State& state)
{
  const ExperimentConfig cfg = partial();
  for (auto _ : state)
    benchmark::DoNotOptimize(counting_rate_partial_quadrature(1.1e-3, 0.0, cfg));
}
BENCHMARK(BM_QuadratureRate);

static void BM_VisibilityHwhm(benchmark::State& state)
{
  const ExperimentConfig cfg = partial();
  for (auto _ : state)
    benchmark::DoNotOptimize(visibility_hwhm(cfg));
}
BENCHMARK(BM_VisibilityHwhm);

static void BM_EstimateSigma(benchmark::State& state)
{
  const ExperimentConfig cfg = partial();
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_sigma_theta(0.99612, cfg));
}
BENCHMARK(BM_EstimateSigma);

static void BM_RenderPattern(benchmark::State& state)
{
  const ExperimentConfig cfg = partial();
  const int res = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(render_pattern(cfg, 3e-3, res, 0.0));
}
BENCHMARK(BM_RenderPattern)->Arg(128)->Arg(600)->Unit(benchmark::kMillisecond);

static void BM_OracleSweep(benchmark::State& state)
{
  const ExperimentConfig cfg = partial();
  const std::vector<double> radii{0.0, 5e-4, 1e-3, 1.5e-3};
  const auto grid = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
  {
    const SuperposedState s = build_oracle_state(cfg, radii, grid);
    benchmark::DoNotOptimize(sweep_phase(s, 2));
  }
}
BENCHMARK(BM_OracleSweep)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
