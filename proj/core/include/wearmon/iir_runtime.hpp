#pragma once

#include <cstdint>
#include <vector>

#include "wearmon/iir_design.hpp"
#include "wearmon/time_series.hpp"

namespace wearmon {

enum class InitMode {
  Zero,     ///< histories start at zero
  DcPrime,  ///< histories pre-filled on the first sample as if x was constant
};

/// Direct Form I execution state for one stream. Owns fixed-size input and
/// output histories; never allocates after construction. Not shareable
/// between concurrent streams, but cheap to move.
class FilterState {
 public:
  explicit FilterState(DiscreteFilter filter, InitMode mode = InitMode::Zero);

  /// Advances one sample: y(n) = sum b_i x(n-i) - sum_{i>=1} a_i y(n-i).
  /// Throws InvalidSample on non-finite input, NumericalOverflow if the
  /// recursion diverges.
  double step(double x);

  const DiscreteFilter& filter() const { return filter_; }
  std::uint64_t samples_seen() const { return samples_seen_; }

 private:
  void prime(double x0);

  DiscreteFilter filter_;
  std::vector<double> x_hist_;  // x(n-1) .. x(n-M), ring buffer
  std::vector<double> y_hist_;  // y(n-1) .. y(n-K), ring buffer
  std::size_t x_head_ = 0;
  std::size_t y_head_ = 0;
  std::uint64_t samples_seen_ = 0;
  bool needs_priming_ = false;
};

/// Streams the whole series through a fresh state. The series sample period
/// must match the filter's within 1e-9 s.
TimeSeries run(const DiscreteFilter& filter, const TimeSeries& series,
               InitMode mode = InitMode::Zero);

/// Jury array test: true iff every pole lies strictly inside the unit circle.
/// Pure coefficient arithmetic, no root finding.
bool jury_stable(const DiscreteFilter& filter);

/// H(1) = sum(b) / sum(a). Throws PoleAtDC when sum(a) == 0.
double dc_gain(const DiscreteFilter& filter);

}  // namespace wearmon
