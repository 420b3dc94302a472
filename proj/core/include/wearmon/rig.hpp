#pragma once

#include <cstdint>
#include <vector>

#include "wearmon/regress.hpp"
#include "wearmon/time_series.hpp"

namespace wearmon {

struct NoiseTone {
  double frequency_hz = 0.0;
  double amplitude_mm = 0.0;
};

/// Deterministic vibration noise: seeded tone phases plus Gaussian white
/// noise. The same spec always produces the same sample values.
struct NoiseSpec {
  std::vector<NoiseTone> tones;
  double white_sigma_mm = 0.0;
  std::uint64_t seed = 0;
};

enum class ProfileKind { Staircase, Ramp, Hold };
enum class TemperatureShape { Constant, Linear };
enum class NoiseChannel { Clearance, Voltage };

struct ClearanceParams {
  double start_mm = 1.0;
  double step_mm = 1.0;             ///< staircase step height
  double dwell_s = 10.0;            ///< staircase plateau duration
  double ramp_rate_mm_per_s = 0.0;  ///< ramp slope
};

struct TemperatureParams {
  double start_c = 20.0;
  double end_c = 20.0;
  TemperatureShape shape = TemperatureShape::Constant;
};

/// Everything needed to emulate one bench run. The surface model plays the
/// sensor physics: it maps (voltage, temperature) to clearance, and the
/// emulator inverts it to synthesize voltages.
struct RigConfig {
  ProfileKind profile = ProfileKind::Staircase;
  double duration_s = 0.0;
  double sample_rate_hz = 0.0;
  ClearanceParams clearance{};
  TemperatureParams temperature{};
  SurfaceModel surface;
  NoiseSpec noise{};
  NoiseChannel noise_channel = NoiseChannel::Clearance;
};

/// Sensor clearance span in millimeters; profiles must stay inside it.
inline constexpr double kSensorRangeMm = 10.5;

/// Calibrated second-order response surface used as the default emulator
/// physics (clearance in mm from volts and degrees Celsius).
SurfaceModel reference_surface();

/// Bench vibration fixture: three stopband tones plus a white floor.
NoiseSpec default_noise();

/// Ten-plateau staircase sweep (1..10 mm) with a linear 43->50 C drift at
/// 6 Hz, using the reference surface and the default noise fixture.
RigConfig default_rig_config();

/// Inverts the surface at fixed temperature: the voltage V such that the
/// model predicts the requested clearance, taking the physically increasing
/// branch (dV/dd > 0). Quadratic voltage orders are solved in closed form;
/// higher orders fall back to bisection on [0, 15] V.
double sensor_voltage(const SurfaceModel& surface, double clearance_mm,
                      double temperature_c);

TimeSeries clearance_profile(const RigConfig& config);
TimeSeries temperature_profile(const RigConfig& config);

/// Adds the configured tones (seeded phases) and white noise to the series.
TimeSeries inject_noise(const TimeSeries& series, const NoiseSpec& noise);

struct EmulatedRow {
  double timestamp = 0.0;       ///< seconds
  double voltage = 0.0;         ///< volts, noise already applied
  double temperature = 0.0;     ///< degrees Celsius
  double true_clearance = 0.0;  ///< millimeters, clean profile value
};

struct EmulatedDataset {
  double sample_rate_hz = 0.0;
  std::vector<EmulatedRow> rows;
};

/// Full bench run: profiles -> noise -> surface inversion, one row per sample.
EmulatedDataset emulate(const RigConfig& config);

}  // namespace wearmon
