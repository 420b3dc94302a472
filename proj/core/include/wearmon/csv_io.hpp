#pragma once

#include <optional>
#include <span>
#include <string>

#include "wearmon/pipeline.hpp"
#include "wearmon/rig.hpp"
#include "wearmon/spectral.hpp"
#include "wearmon/time_series.hpp"

namespace wearmon {

/// Rig dataset: header timestamp_s,voltage_v,temperature_c,clearance_mm,
/// values at 9 significant digits. This is also the training/monitor
/// ingestion format.
void write_dataset_csv(const std::string& path, const EmulatedDataset& dataset);

/// Spectrum export: header frequency_hz,magnitude, one row per bin.
void write_spectrum_csv(const std::string& path, const Spectrum& spectrum);

/// Filter output: header t,raw,filtered. Timestamps start at first_timestamp
/// and advance by the raw series' sample period.
void write_filtered_csv(const std::string& path, const TimeSeries& raw,
                        const TimeSeries& filtered, double first_timestamp);

/// Monitor stream with per-sample wear analytics.
void write_monitor_csv(const std::string& path, std::span<const MonitorRow> rows);

/// Loads a uniformly sampled series. The first column is time in seconds; the
/// value column is `column` when given, else clearance_mm when present, else
/// the second column. The sample period is recovered from the time span; the
/// first timestamp is reported through first_timestamp when non-null.
TimeSeries load_series_csv(const std::string& path,
                           const std::optional<std::string>& column = {},
                           double* first_timestamp = nullptr);

}  // namespace wearmon
