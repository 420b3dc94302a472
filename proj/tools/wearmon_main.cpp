// wearmon: wheel-flange wear monitoring toolkit.
//
// Exit codes: 0 success, 1 usage error, 2 data/parse error, 3 numerical
// failure.

#include <cstdio>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "wearmon/csv_io.hpp"
#include "wearmon/iir_design.hpp"
#include "wearmon/iir_runtime.hpp"
#include "wearmon/json_io.hpp"
#include "wearmon/pipeline.hpp"
#include "wearmon/regress.hpp"
#include "wearmon/rig.hpp"
#include "wearmon/spectral.hpp"

namespace {

using namespace wearmon;

std::string poly_z(const std::vector<double>& coeffs) {
  std::string text;
  char buf[64];
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6g", coeffs[i]);
    if (i == 0) {
      text = buf;
    } else {
      text += coeffs[i] < 0.0 ? " - " : " + ";
      std::snprintf(buf, sizeof(buf), "%.6g", std::abs(coeffs[i]));
      text += buf;
      text += " z^-" + std::to_string(i);
    }
  }
  return text;
}

std::string difference_equation(const DiscreteFilter& filter) {
  std::string text = "y(n) = ";
  char buf[64];
  bool first = true;
  for (std::size_t i = 1; i < filter.a.size(); ++i) {
    const double c = -filter.a[i];  // recursion uses the negated denominator
    std::snprintf(buf, sizeof(buf), "%.6g", std::abs(c));
    if (first) {
      text += (c < 0.0 ? "-" : "");
      first = false;
    } else {
      text += c < 0.0 ? " - " : " + ";
    }
    text += buf;
    text += "*y(n-" + std::to_string(i) + ")";
  }
  for (std::size_t i = 0; i < filter.b.size(); ++i) {
    const double c = filter.b[i];
    std::snprintf(buf, sizeof(buf), "%.6g", std::abs(c));
    if (first) {
      text += (c < 0.0 ? "-" : "");
      first = false;
    } else {
      text += c < 0.0 ? " - " : " + ";
    }
    text += buf;
    text += i == 0 ? "*x(n)" : "*x(n-" + std::to_string(i) + ")";
  }
  return text;
}

void print_model_summary(const SurfaceModel& model) {
  std::printf("orders: m=%d (voltage), n=%d (temperature)\n", model.order_v, model.order_t);
  std::printf("r_squared          = %.6f\n", model.metrics.r_squared);
  std::printf("adjusted_r_squared = %.6f\n", model.metrics.adjusted_r_squared);
  std::printf("correlation_r      = %.6f\n", model.metrics.correlation_r);
  if (model.below_threshold) {
    std::printf("warning: no searched order reached the threshold; keeping the best fit\n");
  }
}

void print_wear(const WearReport& wear) {
  std::printf("initial clearance  s_i = %.4f mm\n", wear.initial_clearance);
  std::printf("current reading    s_r = %.4f mm%s\n", wear.current_reading,
              wear.reading_unreliable ? "  (at/beyond sensor range: unreliable)" : "");
  std::printf("wear depth         s_w = %.4f mm (limit %.2f mm)\n", wear.wear_depth,
              wear.wear_limit);
  std::printf("wear rate              = %.6f mm/h\n", wear.wear_rate_mm_per_hour);
  std::printf("alarm: %s\n", to_string(wear.alarm));
}

struct CliOptions {
  // train
  std::string db_path, model_out;
  double threshold = 0.975;
  // predict
  std::string model_path;
  double voltage = 0.0, temperature = 0.0;
  // design
  double fs = 0.0, fp = 0.0, fa = 0.0, ap = 0.1, aa = 40.0;
  std::string filter_out;
  // filter / spectrum / wear
  std::string filter_path, in_path, out_path, column;
  std::string window_name = "rectangular";
  double si = kDefaultInitialClearanceMm;
  double wear_limit = kDefaultWearLimitMm;
  std::size_t wear_window = kDefaultWearWindow;
  // emulate
  std::string config_path, default_config_out;
  // evaluate
  std::string truth_path, measured_path, truth_column, measured_column;
  bool show_rows = false;
  // monitor
  bool prime = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wheel-flange wear monitoring: regression, filter design, streaming analytics"};
  app.require_subcommand(1);
  CliOptions opt;

  auto* train = app.add_subcommand("train", "fit a clearance surface from a dataset CSV");
  train->add_option("--db", opt.db_path, "training dataset CSV")->required();
  train->add_option("--out", opt.model_out, "output model JSON")->required();
  train->add_option("--threshold", opt.threshold, "adjusted R-square acceptance threshold");
  train->callback([&opt] {
    TrainingDatabase db(load_observations(opt.db_path));
    const SurfaceModel model = auto_fit(db, opt.threshold);
    save_model_json(opt.model_out, model);
    print_model_summary(model);
    std::printf("model written to %s\n", opt.model_out.c_str());
  });

  auto* predict = app.add_subcommand("predict", "evaluate a model at one operating point");
  predict->add_option("--model", opt.model_path, "model JSON")->required();
  predict->add_option("--voltage", opt.voltage, "sensor voltage, V")->required();
  predict->add_option("--temperature", opt.temperature, "temperature, C")->required();
  predict->callback([&opt] {
    const SurfaceModel model = load_model_json(opt.model_path);
    const Prediction p = predict_clearance(model, opt.voltage, opt.temperature);
    std::printf("%.9g\n", p.clearance);
    if (p.extrapolated) {
      std::fprintf(stderr, "warning: inputs lie outside the training hull by more than 10%%\n");
    }
  });

  auto* design = app.add_subcommand("design", "synthesize a Butterworth low-pass filter");
  design->add_option("--fs", opt.fs, "sample rate, Hz")->required();
  design->add_option("--fp", opt.fp, "passband edge, Hz")->required();
  design->add_option("--fa", opt.fa, "stopband edge, Hz")->required();
  design->add_option("--ap", opt.ap, "max passband attenuation, dB");
  design->add_option("--aa", opt.aa, "min stopband attenuation, dB");
  design->add_option("--out", opt.filter_out, "output filter JSON")->required();
  design->callback([&opt] {
    const FilterSpec spec(opt.fs, opt.fp, opt.fa, opt.ap, opt.aa);
    const LowpassDesign result = design_lowpass(spec);
    std::printf("prewarped edges: Omega_p = %.6g rad/s, Omega_a = %.6g rad/s\n",
                result.record.omega_p_warped, result.record.omega_a_warped);
    std::printf("order N = %d, cutoff Omega_c = %.6g rad/s\n", result.record.order,
                result.record.omega_c_warped);
    std::printf("H(z) = (%s) / (%s)\n", poly_z(result.filter.b).c_str(),
                poly_z(result.filter.a).c_str());
    std::printf("%s\n", difference_equation(result.filter).c_str());
    save_filter_json(opt.filter_out, result.filter, result.record);
    std::printf("filter written to %s\n", opt.filter_out.c_str());
  });

  auto* filter = app.add_subcommand("filter", "stream a CSV series through a designed filter");
  filter->add_option("--filter", opt.filter_path, "filter JSON")->required();
  filter->add_option("--in", opt.in_path, "input series CSV")->required();
  filter->add_option("--out", opt.out_path, "output CSV (t,raw,filtered)")->required();
  filter->add_option("--column", opt.column, "value column name");
  filter->add_flag("--prime", opt.prime, "pre-fill state at the first sample (no startup transient)");
  filter->callback([&opt] {
    const LowpassDesign loaded = load_filter_json(opt.filter_path);
    double t0 = 0.0;
    const TimeSeries series = load_series_csv(
        opt.in_path, opt.column.empty() ? std::nullopt : std::optional(opt.column), &t0);
    const TimeSeries filtered =
        run(loaded.filter, series, opt.prime ? InitMode::DcPrime : InitMode::Zero);
    write_filtered_csv(opt.out_path, series, filtered, t0);
    std::printf("%zu samples filtered\n", filtered.samples.size());
  });

  auto* emulate_cmd = app.add_subcommand("emulate", "generate a synthetic bench dataset");
  auto* config_opt = emulate_cmd->add_option("--config", opt.config_path, "rig config JSON");
  auto* out_opt = emulate_cmd->add_option("--out", opt.out_path, "output dataset CSV");
  emulate_cmd->add_option("--write-default-config", opt.default_config_out,
                          "write the built-in staircase fixture config and exit");
  emulate_cmd->callback([&opt, config_opt, out_opt] {
    if (!opt.default_config_out.empty()) {
      save_rig_config_json(opt.default_config_out, default_rig_config());
      std::printf("default config written to %s\n", opt.default_config_out.c_str());
      return;
    }
    if (config_opt->empty() || out_opt->empty()) {
      throw CLI::RequiredError("--config and --out");
    }
    const RigConfig config = load_rig_config_json(opt.config_path);
    const EmulatedDataset data = emulate(config);
    write_dataset_csv(opt.out_path, data);
    std::printf("%zu rows written to %s\n", data.rows.size(), opt.out_path.c_str());
  });

  auto* evaluate = app.add_subcommand("evaluate", "accuracy of measured vs true clearances");
  evaluate->add_option("--truth", opt.truth_path, "true clearance CSV")->required();
  evaluate->add_option("--measured", opt.measured_path, "measured clearance CSV")->required();
  evaluate->add_option("--truth-column", opt.truth_column, "value column in the truth CSV");
  evaluate->add_option("--measured-column", opt.measured_column,
                       "value column in the measured CSV");
  evaluate->add_flag("--rows", opt.show_rows, "print the per-row table");
  evaluate->callback([&opt] {
    const auto truth_col =
        opt.truth_column.empty() ? std::nullopt : std::optional(opt.truth_column);
    const auto measured_col =
        opt.measured_column.empty() ? std::nullopt : std::optional(opt.measured_column);
    const TimeSeries truth = load_series_csv(opt.truth_path, truth_col);
    const TimeSeries measured = load_series_csv(opt.measured_path, measured_col);
    if (truth.samples.size() != measured.samples.size()) {
      throw Error(ErrorCode::SchemaError, "truth and measured row counts differ");
    }
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(truth.samples.size());
    for (std::size_t i = 0; i < truth.samples.size(); ++i) {
      pairs.emplace_back(truth.samples[i], measured.samples[i]);
    }
    const AccuracyReport report = evaluate_accuracy(pairs);
    if (opt.show_rows) {
      std::printf("%12s %12s %12s %12s\n", "true_mm", "measured_mm", "abs_err_mm", "pct_err");
      for (const AccuracyRow& row : report.rows) {
        std::printf("%12.6g %12.6g %12.6g %12.6g\n", row.true_clearance, row.measured,
                    row.abs_error, row.percent_error);
      }
    }
    std::printf("rows: %zu\n", report.rows.size());
    std::printf("mean percent error: %.4f %%\n", report.mean_percent_error);
    std::printf("mean accuracy:      %.4f %%\n", report.mean_accuracy_percent);
  });

  auto* wear = app.add_subcommand("wear", "wear depth and rate from a clearance series");
  wear->add_option("--in", opt.in_path, "clearance series CSV")->required();
  wear->add_option("--si", opt.si, "initial clearance s_i, mm")->required();
  wear->add_option("--limit", opt.wear_limit, "wear depth limit s_w_max, mm");
  wear->add_option("--window", opt.wear_window, "trailing samples for the rate estimate");
  wear->add_option("--column", opt.column, "value column name");
  wear->callback([&opt] {
    const auto col = opt.column.empty() ? std::nullopt : std::optional(opt.column);
    const TimeSeries series = load_series_csv(opt.in_path, col);
    print_wear(wear_report(series, opt.si, opt.wear_limit, opt.wear_window));
  });

  auto* spectrum = app.add_subcommand("spectrum", "FFT magnitude spectrum of a series");
  spectrum->add_option("--in", opt.in_path, "input series CSV")->required();
  spectrum->add_option("--out", opt.out_path, "output spectrum CSV")->required();
  spectrum->add_option("--window", opt.window_name, "rectangular|hann");
  spectrum->add_option("--column", opt.column, "value column name");
  spectrum->callback([&opt] {
    const auto col = opt.column.empty() ? std::nullopt : std::optional(opt.column);
    const TimeSeries series = load_series_csv(opt.in_path, col);
    Window window = Window::Rectangular;
    if (opt.window_name == "hann") {
      window = Window::Hann;
    } else if (opt.window_name != "rectangular") {
      throw CLI::ValidationError("--window", "expected rectangular or hann");
    }
    write_spectrum_csv(opt.out_path, fft_magnitude(series, window));
    std::printf("spectrum written to %s\n", opt.out_path.c_str());
  });

  auto* monitor = app.add_subcommand("monitor", "train, predict, filter and report in one pass");
  monitor->add_option("--db", opt.db_path, "training dataset CSV")->required();
  monitor->add_option("--filter", opt.filter_path, "filter JSON")->required();
  monitor->add_option("--in", opt.in_path, "sensor stream CSV")->required();
  monitor->add_option("--out", opt.out_path, "output monitor CSV")->required();
  monitor->add_option("--threshold", opt.threshold, "adjusted R-square acceptance threshold");
  monitor->add_option("--si", opt.si, "initial clearance s_i, mm");
  monitor->add_option("--limit", opt.wear_limit, "wear depth limit, mm");
  monitor->add_option("--window", opt.wear_window, "wear rate window, samples");
  monitor->add_flag("--prime", opt.prime, "dc-prime the filter state");
  monitor->callback([&opt] {
    TrainingDatabase db(load_observations(opt.db_path));
    const LowpassDesign loaded = load_filter_json(opt.filter_path);
    const std::vector<SensorSample> stream = load_sensor_stream(opt.in_path);
    MonitorOptions options;
    options.threshold_r = opt.threshold;
    options.initial_clearance = opt.si;
    options.wear_limit = opt.wear_limit;
    options.wear_window = opt.wear_window;
    options.filter_init = opt.prime ? InitMode::DcPrime : InitMode::Zero;
    const std::vector<MonitorRow> rows = run_monitor(db, loaded.filter, stream, options);
    write_monitor_csv(opt.out_path, rows);
    std::printf("%zu samples monitored\n", rows.size());
    if (!rows.empty()) print_wear(rows.back().wear);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.category() == ErrorCategory::Data ? 2 : 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
