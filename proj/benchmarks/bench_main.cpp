#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "wearmon/iir_design.hpp"
#include "wearmon/iir_runtime.hpp"
#include "wearmon/regress.hpp"
#include "wearmon/rig.hpp"
#include "wearmon/spectral.hpp"

namespace {

using namespace wearmon;

TimeSeries noisy_series(std::size_t n) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  TimeSeries s;
  s.sample_period = 1.0 / 6.0;
  s.samples.resize(n);
  for (double& v : s.samples) v = dist(rng);
  return s;
}

void FilterStep(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const double aa[] = {0, 5.0, 17.0, 30.0, 43.0, 56.0, 69.0, 82.0, 95.0, 108.0};
  const LowpassDesign design =
      design_lowpass(FilterSpec(100.0, 5.0, 20.0, 0.5, aa[order]));
  FilterState filter(design.filter);
  double x = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(filter.step(x));
    x = -x;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(FilterStep)->Arg(3)->Arg(5)->Arg(7)->Arg(9);

void FftMagnitude1024(benchmark::State& state) {
  const TimeSeries s = noisy_series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fft_magnitude(s));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(FftMagnitude1024)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void FitSurface200(benchmark::State& state) {
  SurfaceModel truth;
  truth.order_v = 2;
  truth.order_t = 1;
  truth.coefficients = {1.373, -0.005041, 0.2082, 0.002771, 0.06928, 0.0};
  std::mt19937 rng(2);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<Observation> obs(200);
  for (std::size_t k = 0; k < obs.size(); ++k) {
    obs[k].timestamp = static_cast<double>(k);
    obs[k].voltage = 10.0 * static_cast<double>(k % 20) / 19.0;
    obs[k].temperature = 20.0 + 55.0 * static_cast<double>(k % 10) / 9.0;
    obs[k].clearance =
        predict_clearance(truth, obs[k].voltage, obs[k].temperature).clearance + noise(rng);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_surface(obs, 2, 1));
  }
}
BENCHMARK(FitSurface200);

void DesignLowpass(benchmark::State& state) {
  const FilterSpec spec(6.0, 0.1, 0.9, 0.1, 40.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(design_lowpass(spec));
  }
}
BENCHMARK(DesignLowpass);

void EmulateDefaultFixture(benchmark::State& state) {
  const RigConfig config = default_rig_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(emulate(config));
  }
}
BENCHMARK(EmulateDefaultFixture);

}  // namespace

BENCHMARK_MAIN();
