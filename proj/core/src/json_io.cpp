#include "wearmon/json_io.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include <json.hpp>

namespace wearmon {

namespace {

using nlohmann::json;

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open for reading: " + path);
  }
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot open for writing: " + path);
  }
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path);
}

void check_version(const json& j, const std::string& path) {
  if (!j.contains("format_version") || !j["format_version"].is_number_integer()) {
    throw Error(ErrorCode::SchemaError, path + ": missing format_version");
  }
  if (j["format_version"].get<int>() != kFormatVersion) {
    throw Error(ErrorCode::SchemaError, path + ": unsupported format_version");
  }
}

template <typename T>
T field(const json& j, const char* name, const std::string& path) {
  if (!j.contains(name)) {
    throw Error(ErrorCode::SchemaError, path + ": missing field '" + name + "'");
  }
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, path + ": field '" + name + "': " + e.what());
  }
}

json surface_to_json(const SurfaceModel& model) {
  json j{
      {"order_v", model.order_v},
      {"order_t", model.order_t},
      {"coefficients", model.coefficients},
      {"metrics",
       {{"r_squared", model.metrics.r_squared},
        {"adjusted_r_squared", model.metrics.adjusted_r_squared},
        {"correlation_r", model.metrics.correlation_r},
        {"residual_sum_squares", model.metrics.residual_sum_squares}}},
      {"db_version", model.db_version},
      {"below_threshold", model.below_threshold},
  };
  if (model.has_hull) {
    j["hull"] = {{"voltage_min", model.voltage_min},
                 {"voltage_max", model.voltage_max},
                 {"temperature_min", model.temperature_min},
                 {"temperature_max", model.temperature_max}};
  }
  return j;
}

SurfaceModel surface_from_json(const json& j, const std::string& path) {
  SurfaceModel model;
  model.order_v = field<int>(j, "order_v", path);
  model.order_t = field<int>(j, "order_t", path);
  model.coefficients = field<std::vector<double>>(j, "coefficients", path);
  const std::size_t expected =
      static_cast<std::size_t>(model.order_v + 1) * static_cast<std::size_t>(model.order_t + 1);
  if (model.order_v < 0 || model.order_t < 0 || model.coefficients.size() != expected) {
    throw Error(ErrorCode::SchemaError, path + ": coefficient grid does not match orders");
  }
  if (j.contains("metrics")) {
    const json& m = j["metrics"];
    model.metrics.r_squared = field<double>(m, "r_squared", path);
    model.metrics.adjusted_r_squared = field<double>(m, "adjusted_r_squared", path);
    model.metrics.correlation_r = field<double>(m, "correlation_r", path);
    model.metrics.residual_sum_squares = field<double>(m, "residual_sum_squares", path);
  }
  if (j.contains("db_version")) model.db_version = field<std::uint64_t>(j, "db_version", path);
  if (j.contains("below_threshold")) {
    model.below_threshold = field<bool>(j, "below_threshold", path);
  }
  if (j.contains("hull")) {
    const json& h = j["hull"];
    model.has_hull = true;
    model.voltage_min = field<double>(h, "voltage_min", path);
    model.voltage_max = field<double>(h, "voltage_max", path);
    model.temperature_min = field<double>(h, "temperature_min", path);
    model.temperature_max = field<double>(h, "temperature_max", path);
  }
  return model;
}

}  // namespace

void save_model_json(const std::string& path, const SurfaceModel& model) {
  json j = surface_to_json(model);
  j["format_version"] = kFormatVersion;
  j["trained_at"] = utc_now();
  write_json(path, j);
}

SurfaceModel load_model_json(const std::string& path) {
  const json j = read_json(path);
  check_version(j, path);
  return surface_from_json(j, path);
}

void save_filter_json(const std::string& path, const DiscreteFilter& filter,
                      const DesignRecord& record) {
  const json j{
      {"format_version", kFormatVersion},
      {"sample_period", filter.sample_period},
      {"b", filter.b},
      {"a", filter.a},
      {"design_record",
       {{"omega_p_warped", record.omega_p_warped},
        {"omega_a_warped", record.omega_a_warped},
        {"order", record.order},
        {"omega_c_warped", record.omega_c_warped}}},
  };
  write_json(path, j);
}

LowpassDesign load_filter_json(const std::string& path) {
  const json j = read_json(path);
  check_version(j, path);
  LowpassDesign design;
  design.filter.sample_period = field<double>(j, "sample_period", path);
  design.filter.b = field<std::vector<double>>(j, "b", path);
  design.filter.a = field<std::vector<double>>(j, "a", path);
  if (design.filter.b.empty() || design.filter.a.empty() ||
      design.filter.a.front() != 1.0 || !(design.filter.sample_period > 0.0)) {
    throw Error(ErrorCode::SchemaError, path + ": not a normalized discrete filter");
  }
  if (j.contains("design_record")) {
    const json& r = j["design_record"];
    design.record.omega_p_warped = field<double>(r, "omega_p_warped", path);
    design.record.omega_a_warped = field<double>(r, "omega_a_warped", path);
    design.record.order = field<int>(r, "order", path);
    design.record.omega_c_warped = field<double>(r, "omega_c_warped", path);
  }
  return design;
}

void save_rig_config_json(const std::string& path, const RigConfig& config) {
  const char* profile = config.profile == ProfileKind::Staircase ? "staircase"
                        : config.profile == ProfileKind::Ramp    ? "ramp"
                                                                 : "hold";
  json tones = json::array();
  for (const NoiseTone& tone : config.noise.tones) {
    tones.push_back({{"frequency_hz", tone.frequency_hz}, {"amplitude_mm", tone.amplitude_mm}});
  }
  const json j{
      {"format_version", kFormatVersion},
      {"profile", profile},
      {"duration_s", config.duration_s},
      {"sample_rate_hz", config.sample_rate_hz},
      {"clearance",
       {{"start_mm", config.clearance.start_mm},
        {"step_mm", config.clearance.step_mm},
        {"dwell_s", config.clearance.dwell_s},
        {"ramp_rate_mm_per_s", config.clearance.ramp_rate_mm_per_s}}},
      {"temperature",
       {{"start_c", config.temperature.start_c},
        {"end_c", config.temperature.end_c},
        {"shape",
         config.temperature.shape == TemperatureShape::Linear ? "linear" : "constant"}}},
      {"surface", surface_to_json(config.surface)},
      {"noise",
       {{"tones", tones},
        {"white_sigma_mm", config.noise.white_sigma_mm},
        {"seed", config.noise.seed}}},
      {"noise_channel",
       config.noise_channel == NoiseChannel::Clearance ? "clearance" : "voltage"},
  };
  write_json(path, j);
}

RigConfig load_rig_config_json(const std::string& path) {
  const json j = read_json(path);
  check_version(j, path);

  RigConfig config;
  const std::string profile = field<std::string>(j, "profile", path);
  if (profile == "staircase") {
    config.profile = ProfileKind::Staircase;
  } else if (profile == "ramp") {
    config.profile = ProfileKind::Ramp;
  } else if (profile == "hold") {
    config.profile = ProfileKind::Hold;
  } else {
    throw Error(ErrorCode::SchemaError, path + ": unknown profile '" + profile + "'");
  }
  config.duration_s = field<double>(j, "duration_s", path);
  config.sample_rate_hz = field<double>(j, "sample_rate_hz", path);

  if (j.contains("clearance")) {
    const json& c = j["clearance"];
    if (c.contains("start_mm")) config.clearance.start_mm = c["start_mm"].get<double>();
    if (c.contains("step_mm")) config.clearance.step_mm = c["step_mm"].get<double>();
    if (c.contains("dwell_s")) config.clearance.dwell_s = c["dwell_s"].get<double>();
    if (c.contains("ramp_rate_mm_per_s")) {
      config.clearance.ramp_rate_mm_per_s = c["ramp_rate_mm_per_s"].get<double>();
    }
  }
  if (j.contains("temperature")) {
    const json& t = j["temperature"];
    if (t.contains("start_c")) config.temperature.start_c = t["start_c"].get<double>();
    if (t.contains("end_c")) config.temperature.end_c = t["end_c"].get<double>();
    if (t.contains("shape")) {
      const std::string shape = t["shape"].get<std::string>();
      if (shape == "linear") {
        config.temperature.shape = TemperatureShape::Linear;
      } else if (shape == "constant") {
        config.temperature.shape = TemperatureShape::Constant;
      } else {
        throw Error(ErrorCode::SchemaError, path + ": unknown temperature shape");
      }
    }
  }
  config.surface = j.contains("surface") ? surface_from_json(j["surface"], path)
                                         : reference_surface();
  if (j.contains("noise")) {
    const json& n = j["noise"];
    if (n.contains("tones")) {
      for (const json& tone : n["tones"]) {
        config.noise.tones.push_back({field<double>(tone, "frequency_hz", path),
                                      field<double>(tone, "amplitude_mm", path)});
      }
    }
    if (n.contains("white_sigma_mm")) {
      config.noise.white_sigma_mm = n["white_sigma_mm"].get<double>();
    }
    if (n.contains("seed")) config.noise.seed = n["seed"].get<std::uint64_t>();
  }
  if (j.contains("noise_channel")) {
    const std::string channel = field<std::string>(j, "noise_channel", path);
    if (channel == "clearance") {
      config.noise_channel = NoiseChannel::Clearance;
    } else if (channel == "voltage") {
      config.noise_channel = NoiseChannel::Voltage;
    } else {
      throw Error(ErrorCode::SchemaError, path + ": unknown noise channel");
    }
  }
  return config;
}

}  // namespace wearmon
