#include "wearmon/csv_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace wearmon {

namespace {

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot open for writing: " + path);
  }
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // Trim surrounding whitespace.
    const auto begin = field.find_first_not_of(" \t\r");
    const auto end = field.find_last_not_of(" \t\r");
    fields.push_back(begin == std::string::npos ? "" : field.substr(begin, end - begin + 1));
  }
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double parse_number(const std::string& text, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing garbage");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line_no) + ": bad number '" + text + "'");
  }
}

// Cells stay strings until a consumer asks for a column, so files may carry
// non-numeric columns (e.g. the monitor output's alarm level) harmlessly.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;

  std::optional<std::size_t> column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  }

  double number(std::size_t row, std::size_t col) const {
    return parse_number(rows[row][col], line_numbers[row]);
  }
};

CsvTable read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open for reading: " + path);
  }
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = split_csv(line);
    if (table.header.empty()) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(table.header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
    table.line_numbers.push_back(line_no);
  }
  if (table.header.empty()) {
    throw Error(ErrorCode::SchemaError, "missing CSV header in " + path);
  }
  return table;
}

struct DatasetColumns {
  std::size_t time, voltage, temperature;
  std::optional<std::size_t> clearance;
};

DatasetColumns dataset_columns(const CsvTable& table, bool require_clearance) {
  const auto t = table.column("timestamp_s");
  const auto v = table.column("voltage_v");
  const auto c = table.column("temperature_c");
  if (!t || !v || !c) {
    throw Error(ErrorCode::SchemaError,
                "expected columns timestamp_s, voltage_v, temperature_c");
  }
  const auto d = table.column("clearance_mm");
  if (require_clearance && !d) {
    throw Error(ErrorCode::SchemaError, "missing required column clearance_mm");
  }
  return {*t, *v, *c, d};
}

}  // namespace

void write_dataset_csv(const std::string& path, const EmulatedDataset& dataset) {
  std::ofstream out = open_out(path);
  out << "timestamp_s,voltage_v,temperature_c,clearance_mm\n";
  for (const EmulatedRow& row : dataset.rows) {
    out << fmt9(row.timestamp) << ',' << fmt9(row.voltage) << ','
        << fmt9(row.temperature) << ',' << fmt9(row.true_clearance) << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path);
}

void write_spectrum_csv(const std::string& path, const Spectrum& spectrum) {
  std::ofstream out = open_out(path);
  out << "frequency_hz,magnitude\n";
  for (std::size_t k = 0; k < spectrum.magnitudes.size(); ++k) {
    out << fmt9(spectrum.frequency(k)) << ',' << fmt9(spectrum.magnitudes[k]) << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path);
}

void write_filtered_csv(const std::string& path, const TimeSeries& raw,
                        const TimeSeries& filtered, double first_timestamp) {
  if (raw.samples.size() != filtered.samples.size()) {
    throw Error(ErrorCode::InvalidSignal, "raw and filtered lengths differ");
  }
  std::ofstream out = open_out(path);
  out << "t,raw,filtered\n";
  for (std::size_t k = 0; k < raw.samples.size(); ++k) {
    const double t = first_timestamp + raw.sample_period * static_cast<double>(k);
    out << fmt9(t) << ',' << fmt9(raw.samples[k]) << ',' << fmt9(filtered.samples[k])
        << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path);
}

void write_monitor_csv(const std::string& path, std::span<const MonitorRow> rows) {
  std::ofstream out = open_out(path);
  out << "timestamp_s,raw_mm,filtered_mm,wear_depth_mm,wear_rate_mm_per_hr,alarm\n";
  for (const MonitorRow& row : rows) {
    out << fmt9(row.timestamp) << ',' << fmt9(row.raw_estimate) << ','
        << fmt9(row.filtered_estimate) << ',' << fmt9(row.wear.wear_depth) << ','
        << fmt9(row.wear.wear_rate_mm_per_hour) << ',' << to_string(row.wear.alarm)
        << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path);
}

TimeSeries load_series_csv(const std::string& path,
                           const std::optional<std::string>& column,
                           double* first_timestamp) {
  const CsvTable table = read_table(path);
  if (table.header.size() < 2) {
    throw Error(ErrorCode::SchemaError, "need a time column and a value column");
  }
  std::size_t value_col = 1;
  if (column) {
    const auto found = table.column(*column);
    if (!found) {
      throw Error(ErrorCode::SchemaError, "no column named '" + *column + "'");
    }
    value_col = *found;
  } else {
    // Preferred value columns of the toolkit's own formats, else the second.
    for (const char* name : {"clearance_mm", "filtered_mm", "filtered"}) {
      if (const auto found = table.column(name)) {
        value_col = *found;
        break;
      }
    }
  }

  if (table.rows.size() < 2) {
    throw Error(ErrorCode::SchemaError, "need at least 2 rows to infer the sample rate");
  }
  TimeSeries series;
  const double t_first = table.number(0, 0);
  const double t_last = table.number(table.rows.size() - 1, 0);
  series.sample_period = (t_last - t_first) / static_cast<double>(table.rows.size() - 1);
  if (!(series.sample_period > 0.0)) {
    throw Error(ErrorCode::ParseError, "time column is not increasing");
  }
  series.samples.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    series.samples.push_back(table.number(r, value_col));
  }
  if (first_timestamp != nullptr) *first_timestamp = t_first;
  return series;
}

std::vector<Observation> load_observations(const std::string& path) {
  const CsvTable table = read_table(path);
  const DatasetColumns cols = dataset_columns(table, true);
  std::vector<Observation> obs;
  obs.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    Observation o;
    o.timestamp = table.number(r, cols.time);
    o.voltage = table.number(r, cols.voltage);
    o.temperature = table.number(r, cols.temperature);
    o.clearance = table.number(r, *cols.clearance);
    try {
      validate(o);
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(table.line_numbers[r]) + ": " + e.what());
    }
    obs.push_back(o);
  }
  return obs;
}

std::vector<SensorSample> load_sensor_stream(const std::string& path) {
  const CsvTable table = read_table(path);
  const DatasetColumns cols = dataset_columns(table, false);
  std::vector<SensorSample> stream;
  stream.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    SensorSample s;
    s.timestamp = table.number(r, cols.time);
    s.voltage = table.number(r, cols.voltage);
    s.temperature = table.number(r, cols.temperature);
    if (cols.clearance) s.clearance = table.number(r, *cols.clearance);
    stream.push_back(s);
  }
  return stream;
}

}  // namespace wearmon
