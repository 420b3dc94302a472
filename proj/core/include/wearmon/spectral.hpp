#pragma once

#include <cstddef>
#include <vector>

#include "wearmon/iir_design.hpp"
#include "wearmon/time_series.hpp"

namespace wearmon {

enum class Window { Rectangular, Hann };

/// One-sided magnitude spectrum, DC through Nyquist inclusive.
/// Magnitudes are scaled so a full-scale sinusoid of amplitude A landing on an
/// exact bin reads A, and the DC bin reads the signal mean (rectangular window).
struct Spectrum {
  double bin_width = 0.0;  ///< Hz between consecutive bins (f_s / N_fft)
  std::vector<double> magnitudes;

  double frequency(std::size_t bin) const { return bin_width * static_cast<double>(bin); }
  double nyquist() const {
    return bin_width * static_cast<double>(magnitudes.size() - 1);
  }
};

/// Radix-2 FFT magnitude of the series, zero-padded to the next power of two.
Spectrum fft_magnitude(const TimeSeries& series, Window window = Window::Rectangular);

/// Fraction of the total squared magnitude held by bins at frequencies <= f.
/// Monotone non-decreasing in f; exactly 1 at Nyquist.
double cumulative_energy_fraction(const Spectrum& spectrum, double f_hz);

/// Knobs for reading a filter specification off a measured-vs-reference
/// spectrum pair. The passband edge is the 99%-energy point of the reference;
/// the stopband edge backs off one bin from the first persistently
/// contaminated bin (measured magnitude >= excess_factor x reference on two
/// consecutive bins).
struct SpecExtractOptions {
  double passband_energy_fraction = 0.99;
  double excess_factor = 10.0;
  double passband_atten_db = 0.1;   ///< A_p default attached to the result
  double stopband_atten_db = 40.0;  ///< A_a default attached to the result
  /// Bins below this fraction of the measured peak never count as
  /// contaminated; guards the ratio test against 0-vs-0 bins.
  double magnitude_floor_rel = 1e-9;
};

/// Derives a buildable FilterSpec from the two spectra, or throws
/// NoNoiseDetected / DegenerateSpec.
FilterSpec extract_filter_spec(const Spectrum& measured, const Spectrum& reference,
                               const SpecExtractOptions& options = {});

}  // namespace wearmon
