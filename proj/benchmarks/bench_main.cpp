#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "dyncop/copula.hpp"
#include "dyncop/limit_law.hpp"
#include "dyncop/nonparametric.hpp"
#include "dyncop/normal.hpp"
#include "dyncop/parametric.hpp"

using namespace dyncop;

namespace {

PairedSample draw(const CorrelationPath& path, std::size_t n, std::uint64_t seed) {
  RngStream s(seed, 0);
  return sample_array(build_schedule(path, n), s);
}

void BM_NormalQuantile(benchmark::State& state) {
  std::vector<double> ps;
  for (int k = 1; k < 1000; ++k) ps.push_back(k / 1000.0);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(std_normal_quantile(ps[i]));
    i = i + 1 < ps.size() ? i + 1 : 0;
  }
}
BENCHMARK(BM_NormalQuantile);

void BM_SampleArray(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto schedule = build_schedule(CorrelationPath::linear(1.0, 1.0), n);
  std::uint64_t rep = 0;
  for (auto _ : state) {
    RngStream s(1, rep++);
    benchmark::DoNotOptimize(sample_array(schedule, s));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleArray)->Arg(300)->Arg(3000);

void BM_FitLinear(benchmark::State& state) {
  const auto sample = draw(CorrelationPath::linear(1.0, 1.0), static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(fit_linear(sample, Estimator::Spearman));
}
BENCHMARK(BM_FitLinear)->Arg(300)->Arg(3000);

void BM_FitPower(benchmark::State& state) {
  const auto z = spearman_responses(draw(CorrelationPath::power(1.0, 1.0, 1.0), 3000, 3));
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(fit_power(z, Estimator::Spearman));
    } catch (const FitNonConvergence& e) {
      benchmark::DoNotOptimize(e.best_iterate());
    }
  }
}
BENCHMARK(BM_FitPower)->Unit(benchmark::kMillisecond);

void BM_LocalLinearCurve(benchmark::State& state) {
  const auto sample = draw(CorrelationPath::linear(1.0, 1.0), 3000, 4);
  const auto grid = default_curve_grid();
  const auto k = Kernel::epanechnikov();
  const double h = practical_bandwidth(3000, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(fit_m_curve(sample, grid, h, k, Estimator::Spearman));
}
BENCHMARK(BM_LocalLinearCurve);

void BM_LimitCdf(benchmark::State& state) {
  const LimitLaw law(CorrelationPath::linear(1.0, 1.0), LimitRegime::HuslerReissMixture);
  for (auto _ : state) benchmark::DoNotOptimize(limit_cdf(law, -0.5, -2.0));
}
BENCHMARK(BM_LimitCdf);

void BM_SpearmanSigma(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(spearman_power_sigma(-0.5, 2.0, 0.3));
}
BENCHMARK(BM_SpearmanSigma);

}  // namespace

BENCHMARK_MAIN();
