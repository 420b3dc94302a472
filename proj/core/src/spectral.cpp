#include "wearmon/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace wearmon {

namespace {

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// In-place iterative radix-2 Cooley-Tukey. Length must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(angle), std::sin(angle));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = x[i + k];
        const std::complex<double> v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

}  // namespace

Spectrum fft_magnitude(const TimeSeries& series, Window window) {
  validate(series);
  if (series.samples.size() < 2) {
    throw Error(ErrorCode::InvalidSignal, "need at least 2 samples for a spectrum");
  }

  const std::size_t n_signal = series.samples.size();
  const std::size_t n_fft = next_power_of_two(n_signal);

  std::vector<std::complex<double>> buf(n_fft, {0.0, 0.0});
  for (std::size_t i = 0; i < n_signal; ++i) {
    double v = series.samples[i];
    if (window == Window::Hann) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(i) /
                           static_cast<double>(n_signal - 1);
      v *= 0.5 * (1.0 - std::cos(phase));
    }
    buf[i] = v;
  }
  fft_radix2(buf);

  // Amplitude scaling uses the real sample count, not the padded length, so
  // coherent components keep their physical amplitude after zero padding.
  const double scale = 1.0 / static_cast<double>(n_signal);
  Spectrum out;
  out.bin_width = series.sample_rate() / static_cast<double>(n_fft);
  out.magnitudes.resize(n_fft / 2 + 1);
  for (std::size_t k = 0; k < out.magnitudes.size(); ++k) {
    const bool half_bin = (k == 0) || (k == n_fft / 2);
    out.magnitudes[k] = std::abs(buf[k]) * scale * (half_bin ? 1.0 : 2.0);
  }
  return out;
}

double cumulative_energy_fraction(const Spectrum& spectrum, double f_hz) {
  const double nyq = spectrum.nyquist();
  if (!(f_hz >= 0.0) || f_hz > nyq * (1.0 + 1e-12)) {
    throw Error(ErrorCode::FrequencyOutOfRange, "frequency outside [0, Nyquist]");
  }
  double total = 0.0;
  double below = 0.0;
  for (std::size_t k = 0; k < spectrum.magnitudes.size(); ++k) {
    const double e = spectrum.magnitudes[k] * spectrum.magnitudes[k];
    total += e;
    if (spectrum.frequency(k) <= f_hz * (1.0 + 1e-12)) below += e;
  }
  if (total == 0.0) return 1.0;
  if (below == total) return 1.0;
  return below / total;
}

FilterSpec extract_filter_spec(const Spectrum& measured, const Spectrum& reference,
                               const SpecExtractOptions& options) {
  if (measured.magnitudes.size() != reference.magnitudes.size() ||
      std::abs(measured.bin_width - reference.bin_width) >
          1e-12 * reference.bin_width) {
    throw Error(ErrorCode::InvalidSignal, "spectra do not share bin layout");
  }
  if (!(options.passband_atten_db > 0.0) ||
      !(options.stopband_atten_db > options.passband_atten_db)) {
    throw Error(ErrorCode::InvalidSpec, "need 0 < A_p < A_a");
  }

  const std::size_t bins = reference.magnitudes.size();
  const double sample_rate = 2.0 * reference.nyquist();

  // Passband edge: first bin where the reference accumulates the requested
  // energy fraction.
  double total = 0.0;
  for (double m : reference.magnitudes) total += m * m;
  std::size_t pass_bin = bins - 1;
  double running = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    running += reference.magnitudes[k] * reference.magnitudes[k];
    if (total == 0.0 || running >= options.passband_energy_fraction * total) {
      pass_bin = k;
      break;
    }
  }
  const double f_p = reference.frequency(pass_bin);
  if (pass_bin == 0) {
    throw Error(ErrorCode::DegenerateSpec, "reference energy is all at DC");
  }

  // Stopband edge: one bin below the first persistent contamination.
  double peak = 0.0;
  for (double m : measured.magnitudes) peak = std::max(peak, m);
  const double floor = options.magnitude_floor_rel * peak;

  auto contaminated = [&](std::size_t k) {
    const double m = measured.magnitudes[k];
    return m > floor && m >= options.excess_factor * reference.magnitudes[k];
  };

  std::size_t hot_bin = 0;
  bool found = false;
  for (std::size_t k = pass_bin + 1; k + 1 < bins; ++k) {
    if (contaminated(k) && contaminated(k + 1)) {
      hot_bin = k;
      found = true;
      break;
    }
  }
  if (!found) {
    throw Error(ErrorCode::NoNoiseDetected, "no persistent excess over the reference");
  }
  const double f_a = measured.frequency(hot_bin - 1);
  if (f_a <= f_p) {
    throw Error(ErrorCode::DegenerateSpec, "stopband edge collapsed onto the passband");
  }

  return FilterSpec(sample_rate, f_p, f_a, options.passband_atten_db,
                    options.stopband_atten_db);
}

}  // namespace wearmon
