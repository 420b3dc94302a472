#include "wearmon/rig.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "wearmon/spectral.hpp"

using namespace wearmon;

namespace {

SurfaceModel identity_surface() {
  SurfaceModel m;
  m.order_v = 1;
  m.order_t = 0;
  m.coefficients = {0.0, 1.0};  // d = V
  return m;
}

RigConfig hold_config(double level, double duration, double rate) {
  RigConfig c;
  c.profile = ProfileKind::Hold;
  c.duration_s = duration;
  c.sample_rate_hz = rate;
  c.clearance.start_mm = level;
  c.surface = reference_surface();
  c.noise = {};
  return c;
}

}  // namespace

TEST(SensorVoltage, IdentitySurfacePassesThrough) {
  EXPECT_DOUBLE_EQ(sensor_voltage(identity_surface(), 3.2, 57.0), 3.2);
}

TEST(SensorVoltage, ReferenceSurfaceRoundTrip) {
  EXPECT_NEAR(sensor_voltage(reference_surface(), 2.01306, 50.0), 2.0, 1e-6);
}

TEST(SensorVoltage, InverseConsistencyOnAGrid) {
  const SurfaceModel surface = reference_surface();
  for (int i = 0; i < 50; ++i) {
    const double d = 1.0 + 9.5 * static_cast<double>(i) / 49.0;
    for (int j = 0; j < 20; ++j) {
      const double t = 20.0 + 78.0 * static_cast<double>(j) / 19.0;
      const double v = sensor_voltage(surface, d, t);
      EXPECT_NEAR(predict_clearance(surface, v, t).clearance, d, 1e-9)
          << "d=" << d << " T=" << t;
    }
  }
}

TEST(SensorVoltage, StrictlyIncreasingInClearance) {
  const SurfaceModel surface = reference_surface();
  for (double t : {25.0, 46.5, 95.0}) {
    double prev = sensor_voltage(surface, 1.0, t);
    for (int i = 1; i <= 40; ++i) {
      const double d = 1.0 + 9.5 * static_cast<double>(i) / 40.0;
      const double v = sensor_voltage(surface, d, t);
      EXPECT_GT(v, prev);
      prev = v;
    }
  }
}

TEST(SensorVoltage, UnreachableClearanceRejected) {
  SurfaceModel dome;  // downward parabola peaks at d = 7
  dome.order_v = 2;
  dome.order_t = 0;
  dome.coefficients = {5.0, 2.0, -0.5};
  try {
    sensor_voltage(dome, 20.0, 25.0);
    FAIL() << "expected OutOfSurfaceRange";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfSurfaceRange);
  }
}

TEST(SensorVoltage, CubicSurfaceFallsBackToBisection) {
  SurfaceModel cubic;
  cubic.order_v = 3;
  cubic.order_t = 0;
  cubic.coefficients = {1.0, 0.5, 0.02, 0.003};
  const double v = sensor_voltage(cubic, 4.0, 30.0);
  EXPECT_NEAR(predict_clearance(cubic, v, 30.0).clearance, 4.0, 1e-9);

  try {
    sensor_voltage(cubic, 0.5, 30.0);  // below d(0) = 1, no bracket on [0, 15]
    FAIL() << "expected NoBracket";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoBracket);
  }
}

TEST(ClearanceProfile, HoldIsConstant) {
  const TimeSeries s = clearance_profile(hold_config(5.0, 10.0, 6.0));
  ASSERT_EQ(s.samples.size(), 60u);
  for (double v : s.samples) EXPECT_DOUBLE_EQ(v, 5.0);
}

TEST(ClearanceProfile, StaircaseHasTenPlateaus) {
  const RigConfig config = default_rig_config();
  const TimeSeries s = clearance_profile(config);
  ASSERT_EQ(s.samples.size(), 600u);
  for (std::size_t k = 0; k < s.samples.size(); ++k) {
    const double expected = 1.0 + static_cast<double>(k / 60);
    EXPECT_DOUBLE_EQ(s.samples[k], expected) << "sample " << k;
  }
  EXPECT_DOUBLE_EQ(s.samples.front(), 1.0);
  EXPECT_DOUBLE_EQ(s.samples.back(), 10.0);
}

TEST(ClearanceProfile, RampReachesItsFinalValue) {
  RigConfig config = hold_config(1.5, 100.0, 6.0);
  config.profile = ProfileKind::Ramp;
  config.clearance.ramp_rate_mm_per_s = 0.09;
  const TimeSeries s = clearance_profile(config);
  ASSERT_EQ(s.samples.size(), 600u);
  EXPECT_NEAR(s.samples.back(), 10.5, 1e-12);
}

TEST(ClearanceProfile, RangeGuard) {
  RigConfig config = default_rig_config();
  config.clearance.start_mm = 2.0;  // staircase tops out at 11 mm
  try {
    clearance_profile(config);
    FAIL() << "expected RangeExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RangeExceeded);
  }
}

TEST(TemperatureProfile, ConstantShape) {
  RigConfig config = hold_config(5.0, 10.0, 6.0);
  config.temperature = {20.0, 20.0, TemperatureShape::Constant};
  const TimeSeries s = temperature_profile(config);
  for (double v : s.samples) EXPECT_DOUBLE_EQ(v, 20.0);
}

TEST(TemperatureProfile, LinearSweepEndpointsExact) {
  RigConfig config = hold_config(5.0, 100.0, 6.0);
  config.temperature = {43.0, 50.0, TemperatureShape::Linear};
  const TimeSeries s = temperature_profile(config);
  ASSERT_EQ(s.samples.size(), 600u);
  EXPECT_DOUBLE_EQ(s.samples.front(), 43.0);
  EXPECT_DOUBLE_EQ(s.samples.back(), 50.0);
  // midpoint by symmetry
  EXPECT_NEAR(0.5 * (s.samples[299] + s.samples[300]), 46.5, 1e-12);

  config.temperature = {92.0, 96.0, TemperatureShape::Linear};
  const TimeSeries hot = temperature_profile(config);
  EXPECT_DOUBLE_EQ(hot.samples.front(), 92.0);
  EXPECT_DOUBLE_EQ(hot.samples.back(), 96.0);
}

TEST(InjectNoise, EmptySpecIsIdentity) {
  const TimeSeries s = clearance_profile(default_rig_config());
  const TimeSeries out = inject_noise(s, NoiseSpec{});
  EXPECT_EQ(out.samples, s.samples);
}

TEST(InjectNoise, SingleToneRms) {
  TimeSeries zeros;
  zeros.sample_period = 1.0 / 6.0;
  zeros.samples.assign(6000, 0.0);
  NoiseSpec spec;
  spec.tones = {{1.2, 0.1}};
  spec.seed = 7;
  const TimeSeries out = inject_noise(zeros, spec);
  double acc = 0.0;
  for (double v : out.samples) acc += v * v;
  const double rms = std::sqrt(acc / static_cast<double>(out.samples.size()));
  EXPECT_NEAR(rms, 0.1 / std::numbers::sqrt2, 0.02 * 0.1 / std::numbers::sqrt2);
}

TEST(InjectNoise, DeterministicPerSeed) {
  const TimeSeries s = clearance_profile(default_rig_config());
  const NoiseSpec spec = default_noise();
  const TimeSeries a = inject_noise(s, spec);
  const TimeSeries b = inject_noise(s, spec);
  EXPECT_EQ(a.samples, b.samples);

  NoiseSpec other = spec;
  other.seed += 1;
  const TimeSeries c = inject_noise(s, other);
  EXPECT_NE(c.samples, a.samples);
}

TEST(InjectNoise, NyquistToneRejected) {
  TimeSeries s;
  s.sample_period = 1.0 / 6.0;
  s.samples.assign(100, 0.0);
  NoiseSpec spec;
  spec.tones = {{3.0, 0.1}};
  try {
    inject_noise(s, spec);
    FAIL() << "expected AliasingRisk";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AliasingRisk);
  }
}

TEST(InjectNoise, SpectralPeaksOnlyAtConfiguredTones) {
  TimeSeries zeros;
  zeros.sample_period = 1.0 / 6.0;
  zeros.samples.assign(1024, 0.0);
  const NoiseSpec spec = default_noise();
  const TimeSeries noise_only = inject_noise(zeros, spec);
  // Hann window keeps off-bin tone leakage local so peak positions are sharp.
  const Spectrum spectrum = fft_magnitude(noise_only, Window::Hann);

  std::vector<double> sorted = spectrum.magnitudes;
  std::sort(sorted.begin(), sorted.end());
  const double threshold = 8.0 * sorted[sorted.size() / 2];  // white floor x8

  std::size_t peaks = 0;
  for (std::size_t k = 1; k + 1 < spectrum.magnitudes.size(); ++k) {
    const bool local_max = spectrum.magnitudes[k] > spectrum.magnitudes[k - 1] &&
                           spectrum.magnitudes[k] >= spectrum.magnitudes[k + 1];
    if (!local_max || spectrum.magnitudes[k] <= threshold) continue;
    ++peaks;
    const double f = spectrum.frequency(k);
    bool near_tone = false;
    for (const NoiseTone& tone : spec.tones) {
      if (std::abs(f - tone.frequency_hz) <= spectrum.bin_width) near_tone = true;
    }
    EXPECT_TRUE(near_tone) << "unexpected peak at " << f << " Hz";
  }
  EXPECT_EQ(peaks, spec.tones.size());
}

TEST(Emulate, NoiselessRoundTripIsExact) {
  RigConfig config = default_rig_config();
  config.noise = NoiseSpec{};
  const EmulatedDataset data = emulate(config);
  for (const EmulatedRow& row : data.rows) {
    EXPECT_NEAR(predict_clearance(config.surface, row.voltage, row.temperature).clearance,
                row.true_clearance, 1e-9);
  }
}

TEST(Emulate, RowCountContract) {
  const EmulatedDataset data = emulate(default_rig_config());
  EXPECT_EQ(data.rows.size(), 600u);
}

TEST(Emulate, DeterministicDatasets) {
  const EmulatedDataset a = emulate(default_rig_config());
  const EmulatedDataset b = emulate(default_rig_config());
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    EXPECT_EQ(a.rows[k].voltage, b.rows[k].voltage);
    EXPECT_EQ(a.rows[k].temperature, b.rows[k].temperature);
    EXPECT_EQ(a.rows[k].true_clearance, b.rows[k].true_clearance);
  }
}

TEST(Emulate, DefaultFixtureErrorInLowSingleDigits) {
  const RigConfig config = default_rig_config();
  const EmulatedDataset data = emulate(config);
  double sum_percent = 0.0;
  for (const EmulatedRow& row : data.rows) {
    const double estimate =
        predict_clearance(config.surface, row.voltage, row.temperature).clearance;
    sum_percent += 100.0 * std::abs(estimate - row.true_clearance) / row.true_clearance;
  }
  const double mean_percent = sum_percent / static_cast<double>(data.rows.size());
  EXPECT_GT(mean_percent, 0.3);
  EXPECT_LT(mean_percent, 6.0);
}

TEST(Emulate, VoltageChannelInjection) {
  RigConfig config = default_rig_config();
  config.noise_channel = NoiseChannel::Voltage;
  const EmulatedDataset noisy = emulate(config);

  RigConfig clean_config = config;
  clean_config.noise = NoiseSpec{};
  const EmulatedDataset clean = emulate(clean_config);

  // The disturbance lands on the voltage channel and maps back to roughly the
  // configured millimeter amplitudes through the local slope.
  double max_mm = 0.0;
  for (std::size_t k = 0; k < noisy.rows.size(); ++k) {
    const double estimate = predict_clearance(config.surface, noisy.rows[k].voltage,
                                              noisy.rows[k].temperature)
                                .clearance;
    max_mm = std::max(max_mm, std::abs(estimate - clean.rows[k].true_clearance));
  }
  EXPECT_GT(max_mm, 0.05);
  EXPECT_LT(max_mm, 0.5);
}
