#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wearmon/iir_runtime.hpp"
#include "wearmon/regress.hpp"
#include "wearmon/rig.hpp"
#include "wearmon/time_series.hpp"

namespace wearmon {

struct AccuracyRow {
  double true_clearance = 0.0;  ///< d_a, mm
  double measured = 0.0;        ///< d_o, mm
  double abs_error = 0.0;       ///< |d_o - d_a|, mm
  double percent_error = 0.0;   ///< 100 * abs_error / d_a
};

struct AccuracyReport {
  std::vector<AccuracyRow> rows;
  double mean_percent_error = 0.0;
  double mean_accuracy_percent = 0.0;  ///< 100 - mean_percent_error
};

/// Per-row and mean error metrics over (true, measured) pairs.
/// Throws DivisionDomain unless every true value is positive.
AccuracyReport evaluate_accuracy(std::span<const std::pair<double, double>> pairs);

enum class AlarmLevel { Ok, Warn, Critical };

inline const char* to_string(AlarmLevel level) {
  switch (level) {
    case AlarmLevel::Ok: return "OK";
    case AlarmLevel::Warn: return "WARN";
    case AlarmLevel::Critical: return "CRITICAL";
  }
  return "?";
}

struct WearReport {
  double initial_clearance = 0.0;       ///< s_i, mm
  double current_reading = 0.0;         ///< s_r, mm
  double wear_depth = 0.0;              ///< s_w = s_r - s_i, mm
  double wear_rate_mm_per_hour = 0.0;   ///< trailing-window least-squares slope
  AlarmLevel alarm = AlarmLevel::Ok;
  double wear_limit = 9.0;              ///< s_w_max, mm
  bool reading_unreliable = false;      ///< current reading at/beyond sensor range
};

inline constexpr double kDefaultWearLimitMm = 9.0;
inline constexpr double kDefaultInitialClearanceMm = 1.5;
inline constexpr std::size_t kDefaultWearWindow = 100;

/// Wear analytics over a (filtered) clearance series: the last value is the
/// current reading, the wear rate is the least-squares slope over the trailing
/// window (clipped to the series length), and the alarm trips WARN at 80% of
/// the limit and CRITICAL at the limit.
WearReport wear_report(const TimeSeries& clearance_series, double initial_clearance,
                       double wear_limit = kDefaultWearLimitMm,
                       std::size_t window = kDefaultWearWindow,
                       double sensor_range = kSensorRangeMm);

/// One row of a monitored stream; clearance is present only for labeled data.
struct SensorSample {
  double timestamp = 0.0;
  double voltage = 0.0;
  double temperature = 0.0;
  std::optional<double> clearance;
};

/// Reads the rig dataset CSV (timestamp_s,voltage_v,temperature_c,clearance_mm)
/// into labeled observations. Every row must carry a clearance.
std::vector<Observation> load_observations(const std::string& path);

/// Same format, but the clearance column may be absent (prediction-only
/// streams).
std::vector<SensorSample> load_sensor_stream(const std::string& path);

struct MonitorOptions {
  double threshold_r = 0.975;
  double initial_clearance = kDefaultInitialClearanceMm;
  double wear_limit = kDefaultWearLimitMm;
  std::size_t wear_window = kDefaultWearWindow;
  double sensor_range = kSensorRangeMm;
  bool hot_reload = true;  ///< refit when the database version changes
  InitMode filter_init = InitMode::Zero;
};

struct MonitorRow {
  double timestamp = 0.0;
  double raw_estimate = 0.0;       ///< regression output, mm
  double filtered_estimate = 0.0;  ///< after the IIR stage, mm
  WearReport wear;
};

/// Streaming monitor: prediction -> filtering -> wear report, one row per
/// sample. Polls the database version between samples and refits when it
/// moves, so every emitted row is produced by exactly one model version.
class Monitor {
 public:
  Monitor(const TrainingDatabase& db, DiscreteFilter filter, MonitorOptions options = {});

  MonitorRow process(const SensorSample& sample);
  const SurfaceModel& model() const { return model_; }

 private:
  const TrainingDatabase* db_;
  MonitorOptions options_;
  SurfaceModel model_;
  FilterState state_;
  std::vector<double> window_times_;
  std::vector<double> window_values_;
};

/// Convenience wrapper running a whole stream through a fresh Monitor.
std::vector<MonitorRow> run_monitor(const TrainingDatabase& db, const DiscreteFilter& filter,
                                    std::span<const SensorSample> stream,
                                    const MonitorOptions& options = {});

}  // namespace wearmon
