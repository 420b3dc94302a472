#include "wearmon/rig.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace wearmon {

namespace {

// Collapses the surface at fixed temperature into voltage-polynomial
// coefficients c_i = sum_j a_ij T^j.
std::vector<double> voltage_poly(const SurfaceModel& surface, double temperature) {
  std::vector<double> c(static_cast<std::size_t>(surface.order_v) + 1, 0.0);
  for (int i = 0; i <= surface.order_v; ++i) {
    double acc = 0.0;
    for (int j = surface.order_t; j >= 0; --j) {
      acc = acc * temperature + surface.coefficient(i, j);
    }
    c[static_cast<std::size_t>(i)] = acc;
  }
  return c;
}

double invert_by_bisection(const SurfaceModel& surface, double clearance,
                           double temperature) {
  double lo = 0.0;
  double hi = 15.0;
  auto f = [&](double v) {
    return predict_clearance(surface, v, temperature).clearance - clearance;
  };
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw Error(ErrorCode::NoBracket, "no sign change on [0, 15] V");
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::size_t sample_count(const RigConfig& config) {
  if (!(config.duration_s > 0.0) || !(config.sample_rate_hz > 0.0)) {
    throw Error(ErrorCode::InvalidSpec, "duration and sample rate must be positive");
  }
  return static_cast<std::size_t>(
      std::llround(config.duration_s * config.sample_rate_hz));
}

// Local sensitivity dV/dd of the inverted surface, used to express a
// millimeter-scale disturbance on the voltage channel.
double voltage_per_mm(const SurfaceModel& surface, double voltage, double temperature) {
  const std::vector<double> c = voltage_poly(surface, temperature);
  double slope = 0.0;  // dd/dV
  double v_pow = 1.0;
  for (std::size_t i = 1; i < c.size(); ++i) {
    slope += static_cast<double>(i) * c[i] * v_pow;
    v_pow *= voltage;
  }
  if (slope == 0.0) {
    throw Error(ErrorCode::OutOfSurfaceRange, "surface is flat at this operating point");
  }
  return 1.0 / slope;
}

}  // namespace

SurfaceModel reference_surface() {
  SurfaceModel surface;
  surface.order_v = 2;
  surface.order_t = 1;
  surface.coefficients = {1.16, -0.0036, 0.3672, 0.0006618, 0.05812, 0.0};
  return surface;
}

NoiseSpec default_noise() {
  NoiseSpec spec;
  spec.tones = {{1.2, 0.04}, {2.0, 0.1}, {2.7, 0.02}};
  spec.white_sigma_mm = 0.01;
  spec.seed = 20240601;
  return spec;
}

RigConfig default_rig_config() {
  RigConfig config;
  config.profile = ProfileKind::Staircase;
  config.duration_s = 100.0;
  config.sample_rate_hz = 6.0;
  config.clearance = {1.0, 1.0, 10.0, 0.0};
  config.temperature = {43.0, 50.0, TemperatureShape::Linear};
  config.surface = reference_surface();
  config.noise = default_noise();
  config.noise_channel = NoiseChannel::Clearance;
  return config;
}

double sensor_voltage(const SurfaceModel& surface, double clearance_mm,
                      double temperature_c) {
  if (!std::isfinite(clearance_mm) || !std::isfinite(temperature_c)) {
    throw Error(ErrorCode::InvalidSample, "inversion inputs must be finite");
  }
  if (surface.order_v > 2) {
    return invert_by_bisection(surface, clearance_mm, temperature_c);
  }
  const std::vector<double> c = voltage_poly(surface, temperature_c);
  const double c0 = c[0] - clearance_mm;
  const double c1 = c.size() > 1 ? c[1] : 0.0;
  const double c2 = c.size() > 2 ? c[2] : 0.0;

  if (c2 == 0.0) {
    if (c1 == 0.0) {
      throw Error(ErrorCode::OutOfSurfaceRange, "surface does not depend on voltage");
    }
    return -c0 / c1;
  }
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc < 0.0) {
    throw Error(ErrorCode::OutOfSurfaceRange, "clearance unreachable on this surface");
  }
  // Both roots satisfy 2*c2*V + c1 = +-sqrt(disc); the + branch is the one
  // with dd/dV > 0, i.e. voltage rising with clearance.
  return (-c1 + std::sqrt(disc)) / (2.0 * c2);
}

TimeSeries clearance_profile(const RigConfig& config) {
  const std::size_t n = sample_count(config);
  const double tau = 1.0 / config.sample_rate_hz;

  TimeSeries out;
  out.sample_period = tau;
  out.samples.resize(n);

  const ClearanceParams& p = config.clearance;
  switch (config.profile) {
    case ProfileKind::Hold:
      for (std::size_t k = 0; k < n; ++k) out.samples[k] = p.start_mm;
      break;
    case ProfileKind::Ramp:
      for (std::size_t k = 0; k < n; ++k) {
        out.samples[k] = p.start_mm + p.ramp_rate_mm_per_s * (static_cast<double>(k) + 1.0) * tau;
      }
      break;
    case ProfileKind::Staircase: {
      if (!(p.dwell_s > 0.0)) {
        throw Error(ErrorCode::InvalidSpec, "staircase dwell must be positive");
      }
      const std::size_t per_step = static_cast<std::size_t>(
          std::llround(p.dwell_s * config.sample_rate_hz));
      if (per_step == 0) {
        throw Error(ErrorCode::InvalidSpec, "dwell shorter than one sample");
      }
      for (std::size_t k = 0; k < n; ++k) {
        out.samples[k] = p.start_mm + p.step_mm * static_cast<double>(k / per_step);
      }
      break;
    }
  }

  for (double v : out.samples) {
    if (v < 0.0 || v > kSensorRangeMm) {
      throw Error(ErrorCode::RangeExceeded, "profile leaves the 0..10.5 mm sensor range");
    }
  }
  return out;
}

TimeSeries temperature_profile(const RigConfig& config) {
  const std::size_t n = sample_count(config);
  TimeSeries out;
  out.sample_period = 1.0 / config.sample_rate_hz;
  out.samples.resize(n);

  const TemperatureParams& p = config.temperature;
  if (p.shape == TemperatureShape::Constant || n == 1) {
    for (std::size_t k = 0; k < n; ++k) out.samples[k] = p.start_c;
  } else {
    // Endpoint-exact linear sweep.
    const double span = p.end_c - p.start_c;
    for (std::size_t k = 0; k < n; ++k) {
      out.samples[k] =
          p.start_c + span * static_cast<double>(k) / static_cast<double>(n - 1);
    }
  }
  return out;
}

TimeSeries inject_noise(const TimeSeries& series, const NoiseSpec& noise) {
  validate(series);
  const double nyquist = series.nyquist();
  for (const NoiseTone& tone : noise.tones) {
    if (tone.frequency_hz >= nyquist) {
      throw Error(ErrorCode::AliasingRisk, "tone at or above Nyquist");
    }
    if (tone.amplitude_mm < 0.0) {
      throw Error(ErrorCode::InvalidSpec, "tone amplitude must be non-negative");
    }
  }

  std::mt19937_64 rng(noise.seed);
  std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);
  std::vector<double> phases(noise.tones.size());
  for (double& ph : phases) ph = phase_dist(rng);

  TimeSeries out = series;
  const double tau = series.sample_period;
  for (std::size_t k = 0; k < out.samples.size(); ++k) {
    const double t = (static_cast<double>(k) + 1.0) * tau;
    double add = 0.0;
    for (std::size_t i = 0; i < noise.tones.size(); ++i) {
      add += noise.tones[i].amplitude_mm *
             std::sin(2.0 * std::numbers::pi * noise.tones[i].frequency_hz * t + phases[i]);
    }
    out.samples[k] += add;
  }
  if (noise.white_sigma_mm > 0.0) {
    std::normal_distribution<double> white(0.0, noise.white_sigma_mm);
    for (double& v : out.samples) v += white(rng);
  }
  return out;
}

EmulatedDataset emulate(const RigConfig& config) {
  const TimeSeries clearance = clearance_profile(config);
  const TimeSeries temperature = temperature_profile(config);
  const double tau = clearance.sample_period;

  EmulatedDataset data;
  data.sample_rate_hz = config.sample_rate_hz;
  data.rows.resize(clearance.samples.size());

  if (config.noise_channel == NoiseChannel::Clearance) {
    // Disturb the clearance the sensor sees, then synthesize its voltage.
    const TimeSeries disturbed = inject_noise(clearance, config.noise);
    for (std::size_t k = 0; k < data.rows.size(); ++k) {
      EmulatedRow& row = data.rows[k];
      row.timestamp = (static_cast<double>(k) + 1.0) * tau;
      row.temperature = temperature.samples[k];
      row.true_clearance = clearance.samples[k];
      row.voltage = sensor_voltage(config.surface, disturbed.samples[k], row.temperature);
    }
  } else {
    TimeSeries zeros;
    zeros.sample_period = tau;
    zeros.samples.assign(clearance.samples.size(), 0.0);
    const TimeSeries disturbance = inject_noise(zeros, config.noise);
    for (std::size_t k = 0; k < data.rows.size(); ++k) {
      EmulatedRow& row = data.rows[k];
      row.timestamp = (static_cast<double>(k) + 1.0) * tau;
      row.temperature = temperature.samples[k];
      row.true_clearance = clearance.samples[k];
      const double clean =
          sensor_voltage(config.surface, row.true_clearance, row.temperature);
      const double gain = voltage_per_mm(config.surface, clean, row.temperature);
      row.voltage = clean + disturbance.samples[k] * gain;
    }
  }
  return data;
}

}  // namespace wearmon
