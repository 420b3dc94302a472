#include "wearmon/iir_runtime.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <new>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pole_oracle.hpp"

using namespace wearmon;

namespace {

std::atomic<long> g_allocations{0};

}  // namespace

void* operator new(std::size_t size) {
  g_allocations.fetch_add(1, std::memory_order_relaxed);
  if (void* p = std::malloc(size)) return p;
  throw std::bad_alloc();
}

void* operator new[](std::size_t size) {
  g_allocations.fetch_add(1, std::memory_order_relaxed);
  if (void* p = std::malloc(size)) return p;
  throw std::bad_alloc();
}

void operator delete(void* p) noexcept { std::free(p); }
void operator delete[](void* p) noexcept { std::free(p); }
void operator delete(void* p, std::size_t) noexcept { std::free(p); }
void operator delete[](void* p, std::size_t) noexcept { std::free(p); }

namespace {

// Fifth-order low-pass (6 Hz bench rate) with coefficients rounded to four
// significant digits; the rounding shows up as a small DC gain defect.
DiscreteFilter rounded_fifth_order() {
  DiscreteFilter f;
  f.b = {0.001076, 0.005379, 0.01076, 0.01076, 0.005379, 0.001076};
  f.a = {1.0, -3.06, 3.997, -2.721, 0.9566, -0.138};
  f.sample_period = 0.167;
  return f;
}

DiscreteFilter identity_filter(double tau = 1.0) {
  DiscreteFilter f;
  f.b = {1.0};
  f.a = {1.0};
  f.sample_period = tau;
  return f;
}

TimeSeries constant_series(double tau, std::size_t n, double value) {
  TimeSeries s;
  s.sample_period = tau;
  s.samples.assign(n, value);
  return s;
}

}  // namespace

TEST(FilterState, IdentityFilterEchoesInput) {
  FilterState state(identity_filter());
  for (double x : {1.0, -2.5, 0.0, 7.75}) {
    EXPECT_DOUBLE_EQ(state.step(x), x);
  }
  EXPECT_EQ(state.samples_seen(), 4u);
}

TEST(FilterState, TwoTapAverageHandConvolution) {
  DiscreteFilter f;
  f.b = {0.5, 0.5};
  f.a = {1.0};
  f.sample_period = 1.0;
  FilterState state(f);
  EXPECT_DOUBLE_EQ(state.step(1.0), 0.5);
  EXPECT_DOUBLE_EQ(state.step(0.0), 0.5);
  EXPECT_DOUBLE_EQ(state.step(0.0), 0.0);
}

TEST(FilterState, ZeroInitStepResponseStartsAtB0) {
  const DiscreteFilter f = rounded_fifth_order();
  FilterState state(f, InitMode::Zero);
  EXPECT_DOUBLE_EQ(state.step(1.0), f.b[0]);
}

TEST(FilterState, ZeroInitZeroInputStaysZero) {
  FilterState state(rounded_fifth_order(), InitMode::Zero);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(state.step(0.0), 0.0);
  }
}

TEST(FilterState, DcPrimeStartsAtSteadyState) {
  const DiscreteFilter f = rounded_fifth_order();
  const double gain = dc_gain(f);
  FilterState state(f, InitMode::DcPrime);
  const double x0 = 4.2;
  EXPECT_NEAR(state.step(x0), gain * x0, 1e-9);
  for (int i = 0; i < 20; ++i) {
    EXPECT_NEAR(state.step(x0), gain * x0, 1e-9);
  }
}

TEST(FilterState, ImpulseResponseMatchesSeriesDivision) {
  const DiscreteFilter f = rounded_fifth_order();
  const std::vector<double> expected = oracles::impulse_by_division(f.b, f.a, 200);
  FilterState state(f);
  for (std::size_t n = 0; n < expected.size(); ++n) {
    const double y = state.step(n == 0 ? 1.0 : 0.0);
    EXPECT_NEAR(y, expected[n], 1e-9) << "sample " << n;
  }
}

TEST(FilterState, RejectsNonFiniteInput) {
  FilterState state(identity_filter());
  try {
    state.step(std::numeric_limits<double>::infinity());
    FAIL() << "expected InvalidSample";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidSample);
  }
}

TEST(FilterState, UnstableRecursionOverflows) {
  DiscreteFilter f;
  f.b = {1.0};
  f.a = {1.0, -2.0};  // pole at 2
  f.sample_period = 1.0;
  FilterState state(f);
  try {
    for (int i = 0; i < 5000; ++i) state.step(1.0);
    FAIL() << "expected NumericalOverflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NumericalOverflow);
  }
}

TEST(FilterState, StepNeverAllocates) {
  FilterState state(rounded_fifth_order());
  state.step(1.0);
  const long before = g_allocations.load();
  double sink = 0.0;
  for (int i = 0; i < 10000; ++i) sink += state.step(1.0);
  const long after = g_allocations.load();
  EXPECT_EQ(after, before);
  EXPECT_TRUE(std::isfinite(sink));
}

TEST(Run, IdentityFilterReturnsInput) {
  TimeSeries s = constant_series(0.5, 30, 0.0);
  for (std::size_t k = 0; k < s.samples.size(); ++k) {
    s.samples[k] = static_cast<double>(k % 7) - 3.0;
  }
  const TimeSeries out = run(identity_filter(0.5), s);
  EXPECT_EQ(out.samples, s.samples);
}

TEST(Run, StepResponseConvergesToDcGain) {
  const DiscreteFilter f = rounded_fifth_order();
  const TimeSeries step_series = constant_series(f.sample_period, 120, 1.0);
  const TimeSeries out = run(f, step_series);
  const double gain = dc_gain(f);
  for (std::size_t k = 60; k < out.samples.size(); ++k) {
    EXPECT_NEAR(out.samples[k], gain, 1e-3) << "sample " << k;
  }
}

TEST(Run, SampleRateMismatchRejected) {
  const DiscreteFilter f = rounded_fifth_order();
  const TimeSeries wrong = constant_series(0.2, 10, 1.0);
  try {
    run(f, wrong);
    FAIL() << "expected SampleRateMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SampleRateMismatch);
  }
}

TEST(Run, StopbandToneSuppressedBelowOneMicron) {
  // Steady-state residual of a 0.1 mm tone at 1.2 Hz through the bench design.
  const LowpassDesign design = design_lowpass(FilterSpec(6.0, 0.1, 0.9, 0.1, 40.0));
  TimeSeries tone;
  tone.sample_period = design.filter.sample_period;
  tone.samples.resize(600);
  for (std::size_t k = 0; k < tone.samples.size(); ++k) {
    const double t = (static_cast<double>(k) + 1.0) * tone.sample_period;
    tone.samples[k] = 0.1 * std::sin(2.0 * std::numbers::pi * 1.2 * t);
  }
  const TimeSeries out = run(design.filter, tone);
  const double residual = oracles::tone_amplitude(out.samples, 300, 600, 1.2,
                                                  out.sample_period);
  EXPECT_LT(residual, 0.001);
}

TEST(Run, Linearity) {
  const DiscreteFilter f = rounded_fifth_order();
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  TimeSeries x = constant_series(f.sample_period, 300, 0.0);
  TimeSeries z = x;
  for (std::size_t k = 0; k < x.samples.size(); ++k) {
    x.samples[k] = dist(rng);
    z.samples[k] = dist(rng);
  }
  const double alpha = 2.25;
  const double beta = -0.75;
  TimeSeries mix = x;
  for (std::size_t k = 0; k < x.samples.size(); ++k) {
    mix.samples[k] = alpha * x.samples[k] + beta * z.samples[k];
  }
  const TimeSeries fx = run(f, x);
  const TimeSeries fz = run(f, z);
  const TimeSeries fmix = run(f, mix);
  for (std::size_t k = 0; k < x.samples.size(); ++k) {
    EXPECT_NEAR(fmix.samples[k], alpha * fx.samples[k] + beta * fz.samples[k], 1e-9);
  }
}

TEST(Run, TimeInvariance) {
  const DiscreteFilter f = rounded_fifth_order();
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const std::size_t delay = 17;
  TimeSeries x = constant_series(f.sample_period, 200, 0.0);
  for (double& v : x.samples) v = dist(rng);

  TimeSeries delayed = constant_series(f.sample_period, 200 + delay, 0.0);
  for (std::size_t k = 0; k < x.samples.size(); ++k) {
    delayed.samples[k + delay] = x.samples[k];
  }
  const TimeSeries fx = run(f, x);
  const TimeSeries fdelayed = run(f, delayed);
  for (std::size_t k = 0; k < fx.samples.size(); ++k) {
    EXPECT_EQ(fdelayed.samples[k + delay], fx.samples[k]) << "sample " << k;
  }
}

TEST(Run, StepEqualsImpulseCumulativeSum) {
  const DiscreteFilter f = rounded_fifth_order();
  TimeSeries impulse = constant_series(f.sample_period, 200, 0.0);
  impulse.samples[0] = 1.0;
  const TimeSeries h = run(f, impulse);
  const TimeSeries s = run(f, constant_series(f.sample_period, 200, 1.0));
  double acc = 0.0;
  for (std::size_t k = 0; k < h.samples.size(); ++k) {
    acc += h.samples[k];
    EXPECT_NEAR(s.samples[k], acc, 1e-9) << "sample " << k;
  }
}

TEST(JuryStable, SimplePoles) {
  DiscreteFilter f = identity_filter();
  f.a = {1.0, -0.5};
  EXPECT_TRUE(jury_stable(f));
  f.a = {1.0, -2.0};
  EXPECT_FALSE(jury_stable(f));
  f.a = {1.0, -1.0};  // pole on the circle is not strictly stable
  EXPECT_FALSE(jury_stable(f));
}

TEST(JuryStable, RoundedFifthOrderDenominator) {
  const DiscreteFilter f = rounded_fifth_order();
  EXPECT_TRUE(jury_stable(f));
  EXPECT_LT(oracles::max_root_magnitude(f.a), 1.0);
}

TEST(JuryStable, AgreesWithCompanionEigenvalues) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> coeff(-1.5, 1.5);
  std::uniform_int_distribution<int> degree(1, 8);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    DiscreteFilter f = identity_filter();
    const int n = degree(rng);
    f.a.assign(static_cast<std::size_t>(n) + 1, 0.0);
    f.a[0] = 1.0;
    for (int i = 1; i <= n; ++i) f.a[static_cast<std::size_t>(i)] = coeff(rng);
    const double radius = oracles::max_root_magnitude(f.a);
    if (std::abs(radius - 1.0) < 1e-9) continue;  // boundary, ill-posed either way
    EXPECT_EQ(jury_stable(f), radius < 1.0) << "trial " << trial << " radius " << radius;
    ++checked;
  }
  EXPECT_GT(checked, 300);
}

TEST(DcGain, SimpleAndRoundedFilters) {
  DiscreteFilter avg = identity_filter();
  avg.b = {0.5, 0.5};
  EXPECT_DOUBLE_EQ(dc_gain(avg), 1.0);

  // Coefficients rounded to four significant digits cost about half a percent
  // of unity gain.
  EXPECT_NEAR(dc_gain(rounded_fifth_order()), 0.995, 1e-3);
}

TEST(DcGain, DesignedFiltersAreUnity) {
  const double aa[] = {17.0, 43.0, 82.0};
  for (double a : aa) {
    const LowpassDesign design = design_lowpass(FilterSpec(100.0, 5.0, 20.0, 0.5, a));
    EXPECT_NEAR(dc_gain(design.filter), 1.0, 1e-6);
    EXPECT_TRUE(jury_stable(design.filter));
  }
}

TEST(DcGain, PoleAtDcRejected) {
  DiscreteFilter f = identity_filter();
  f.a = {1.0, -1.0};
  try {
    dc_gain(f);
    FAIL() << "expected PoleAtDC";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PoleAtDC);
  }
}
