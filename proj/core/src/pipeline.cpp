#include "wearmon/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace wearmon {

namespace {

// Least-squares slope of y over t; zero when fewer than two points.
double ls_slope(std::span<const double> t, std::span<const double> y) {
  const std::size_t n = t.size();
  if (n < 2) return 0.0;
  double t_mean = 0.0;
  double y_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    t_mean += t[i];
    y_mean += y[i];
  }
  t_mean /= static_cast<double>(n);
  y_mean /= static_cast<double>(n);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = t[i] - t_mean;
    num += dt * (y[i] - y_mean);
    den += dt * dt;
  }
  return den > 0.0 ? num / den : 0.0;
}

AlarmLevel alarm_for(double wear_depth, double wear_limit) {
  // Boundary equality (s_w == limit, s_w == 0.8*limit) must classify as the
  // higher level despite representation error in the subtraction.
  const double eps = 1e-9 * std::max(1.0, std::abs(wear_limit));
  if (wear_depth >= wear_limit - eps) return AlarmLevel::Critical;
  if (wear_depth >= 0.8 * wear_limit - eps) return AlarmLevel::Warn;
  return AlarmLevel::Ok;
}

DiscreteFilter require_stable(DiscreteFilter filter) {
  if (!jury_stable(filter)) {
    throw Error(ErrorCode::UnstableFilter,
                "monitor refuses a filter with poles outside the unit circle");
  }
  return filter;
}

WearReport make_wear_report(double current, double slope_per_s, double initial_clearance,
                            double wear_limit, double sensor_range) {
  WearReport report;
  report.initial_clearance = initial_clearance;
  report.current_reading = current;
  report.wear_depth = current - initial_clearance;
  report.wear_rate_mm_per_hour = slope_per_s * 3600.0;
  report.wear_limit = wear_limit;
  report.alarm = alarm_for(report.wear_depth, wear_limit);
  report.reading_unreliable = current >= sensor_range;
  return report;
}

}  // namespace

AccuracyReport evaluate_accuracy(std::span<const std::pair<double, double>> pairs) {
  if (pairs.empty()) {
    throw Error(ErrorCode::SchemaError, "no measurement pairs to evaluate");
  }
  AccuracyReport report;
  report.rows.reserve(pairs.size());
  double sum_percent = 0.0;
  for (const auto& [d_a, d_o] : pairs) {
    if (!(d_a > 0.0)) {
      throw Error(ErrorCode::DivisionDomain, "true clearance must be positive");
    }
    AccuracyRow row;
    row.true_clearance = d_a;
    row.measured = d_o;
    row.abs_error = std::abs(d_o - d_a);
    row.percent_error = 100.0 * row.abs_error / d_a;
    sum_percent += row.percent_error;
    report.rows.push_back(row);
  }
  report.mean_percent_error = sum_percent / static_cast<double>(pairs.size());
  report.mean_accuracy_percent = 100.0 - report.mean_percent_error;
  return report;
}

WearReport wear_report(const TimeSeries& clearance_series, double initial_clearance,
                       double wear_limit, std::size_t window, double sensor_range) {
  validate(clearance_series);
  if (initial_clearance < 0.0) {
    throw Error(ErrorCode::InvalidSpec, "initial clearance must be non-negative");
  }
  if (window < 2) {
    throw Error(ErrorCode::InvalidSpec, "wear window needs at least 2 samples");
  }

  const std::size_t n = clearance_series.samples.size();
  const std::size_t used = std::min(window, n);
  std::vector<double> t(used);
  std::vector<double> y(used);
  for (std::size_t i = 0; i < used; ++i) {
    const std::size_t idx = n - used + i;
    t[i] = clearance_series.sample_period * static_cast<double>(idx);
    y[i] = clearance_series.samples[idx];
  }
  return make_wear_report(clearance_series.samples.back(), ls_slope(t, y),
                          initial_clearance, wear_limit, sensor_range);
}

Monitor::Monitor(const TrainingDatabase& db, DiscreteFilter filter, MonitorOptions options)
    : db_(&db),
      options_(options),
      model_(auto_fit(db, options.threshold_r)),
      state_(require_stable(std::move(filter)), options.filter_init) {
  if (options_.wear_window < 2) {
    throw Error(ErrorCode::InvalidSpec, "wear window needs at least 2 samples");
  }
  window_times_.reserve(options_.wear_window);
  window_values_.reserve(options_.wear_window);
}

MonitorRow Monitor::process(const SensorSample& sample) {
  if (options_.hot_reload && db_->version() != model_.db_version) {
    model_ = auto_fit(*db_, options_.threshold_r);
  }

  MonitorRow row;
  row.timestamp = sample.timestamp;
  row.raw_estimate = predict_clearance(model_, sample.voltage, sample.temperature).clearance;
  row.filtered_estimate = state_.step(row.raw_estimate);

  if (window_times_.size() == options_.wear_window) {
    window_times_.erase(window_times_.begin());
    window_values_.erase(window_values_.begin());
  }
  window_times_.push_back(sample.timestamp);
  window_values_.push_back(row.filtered_estimate);

  row.wear = make_wear_report(row.filtered_estimate, ls_slope(window_times_, window_values_),
                              options_.initial_clearance, options_.wear_limit,
                              options_.sensor_range);
  return row;
}

std::vector<MonitorRow> run_monitor(const TrainingDatabase& db, const DiscreteFilter& filter,
                                    std::span<const SensorSample> stream,
                                    const MonitorOptions& options) {
  Monitor monitor(db, filter, options);
  std::vector<MonitorRow> rows;
  rows.reserve(stream.size());
  for (const SensorSample& sample : stream) {
    rows.push_back(monitor.process(sample));
  }
  return rows;
}

}  // namespace wearmon
