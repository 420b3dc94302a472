#pragma once

#include <cmath>
#include <vector>

#include "wearmon/error.hpp"

namespace wearmon {

/// Uniformly sampled real-valued signal. Units of the samples depend on the
/// context (millimeters for clearance channels, volts for sensor output).
struct TimeSeries {
  double sample_period = 0.0;  ///< seconds between consecutive samples
  std::vector<double> samples;

  double sample_rate() const { return 1.0 / sample_period; }
  double nyquist() const { return 0.5 / sample_period; }
  double duration() const { return sample_period * static_cast<double>(samples.size()); }
};

/// Throws Error(InvalidSignal) unless the series has a positive sample period
/// and at least one finite sample (no NaN/Inf anywhere).
inline void validate(const TimeSeries& series) {
  if (!(series.sample_period > 0.0)) {
    throw Error(ErrorCode::InvalidSignal, "sample period must be positive");
  }
  if (series.samples.empty()) {
    throw Error(ErrorCode::InvalidSignal, "series has no samples");
  }
  for (double v : series.samples) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::InvalidSignal, "series contains a non-finite sample");
    }
  }
}

}  // namespace wearmon
