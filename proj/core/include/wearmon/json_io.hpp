#pragma once

#include <string>

#include "wearmon/iir_design.hpp"
#include "wearmon/regress.hpp"
#include "wearmon/rig.hpp"

namespace wearmon {

/// Schema version stamped into every JSON artifact.
inline constexpr int kFormatVersion = 1;

/// Model persistence: orders, row-major coefficients, fit metrics, database
/// version, training hull and a trained_at timestamp.
void save_model_json(const std::string& path, const SurfaceModel& model);
SurfaceModel load_model_json(const std::string& path);

/// Filter persistence: sample period, b/a coefficient arrays and the design
/// intermediates.
void save_filter_json(const std::string& path, const DiscreteFilter& filter,
                      const DesignRecord& record);
LowpassDesign load_filter_json(const std::string& path);

/// Rig configuration for the emulate subcommand. Omitting "surface" selects
/// the built-in reference surface.
void save_rig_config_json(const std::string& path, const RigConfig& config);
RigConfig load_rig_config_json(const std::string& path);

}  // namespace wearmon
