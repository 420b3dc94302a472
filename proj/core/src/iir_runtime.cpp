#include "wearmon/iir_runtime.hpp"

#include <cmath>
#include <cstdlib>

namespace wearmon {

namespace {

// Checked before the history buffers size themselves off the coefficients.
DiscreteFilter validated(DiscreteFilter filter) {
  if (filter.b.empty() || filter.a.empty() || filter.a[0] != 1.0) {
    throw Error(ErrorCode::InvalidSpec, "filter must be normalized with a[0] == 1");
  }
  for (double c : filter.b) {
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidSpec, "non-finite b coefficient");
  }
  for (double c : filter.a) {
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidSpec, "non-finite a coefficient");
  }
  return filter;
}

}  // namespace

FilterState::FilterState(DiscreteFilter filter, InitMode mode)
    : filter_(validated(std::move(filter))),
      x_hist_(filter_.b.size() - 1, 0.0),
      y_hist_(filter_.a.size() - 1, 0.0),
      needs_priming_(mode == InitMode::DcPrime) {}

void FilterState::prime(double x0) {
  const double steady = dc_gain(filter_) * x0;
  for (double& v : x_hist_) v = x0;
  for (double& v : y_hist_) v = steady;
  needs_priming_ = false;
}

double FilterState::step(double x) {
  if (!std::isfinite(x)) {
    throw Error(ErrorCode::InvalidSample, "non-finite input sample");
  }
  if (needs_priming_) prime(x);

  const std::size_t m = x_hist_.size();
  const std::size_t k = y_hist_.size();

  double acc = filter_.b[0] * x;
  for (std::size_t i = 1; i <= m; ++i) {
    std::size_t idx = x_head_ + m - i;
    if (idx >= m) idx -= m;
    acc += filter_.b[i] * x_hist_[idx];
  }
  for (std::size_t i = 1; i <= k; ++i) {
    std::size_t idx = y_head_ + k - i;
    if (idx >= k) idx -= k;
    acc -= filter_.a[i] * y_hist_[idx];
  }

  if (!std::isfinite(acc)) {
    throw Error(ErrorCode::NumericalOverflow, "filter recursion diverged");
  }

  if (m > 0) {
    x_hist_[x_head_] = x;
    if (++x_head_ == m) x_head_ = 0;
  }
  if (k > 0) {
    y_hist_[y_head_] = acc;
    if (++y_head_ == k) y_head_ = 0;
  }
  ++samples_seen_;
  return acc;
}

TimeSeries run(const DiscreteFilter& filter, const TimeSeries& series, InitMode mode) {
  validate(series);
  if (std::abs(series.sample_period - filter.sample_period) > 1e-9) {
    throw Error(ErrorCode::SampleRateMismatch,
                "series sample period does not match the filter");
  }
  FilterState state(filter, mode);
  TimeSeries out;
  out.sample_period = series.sample_period;
  out.samples.reserve(series.samples.size());
  for (double x : series.samples) {
    out.samples.push_back(state.step(x));
  }
  return out;
}

bool jury_stable(const DiscreteFilter& filter) {
  // Poles are the roots of P(z) = sum a_i z^(K-i); the coefficient vector is
  // the denominator read in descending powers of z.
  std::vector<double> p = filter.a;
  std::size_t n = p.size() - 1;
  if (n == 0) return true;
  if (p[0] < 0.0) {
    for (double& c : p) c = -c;
  }

  // Roots at +1 or -1 fail these necessary conditions immediately.
  double at_one = 0.0;
  double at_minus_one = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    at_one += p[i];
    at_minus_one += ((n - i) % 2 == 0) ? p[i] : -p[i];
  }
  if (!(at_one > 0.0)) return false;
  if (!((n % 2 == 0 ? at_minus_one : -at_minus_one) > 0.0)) return false;

  // Schur-Cohn reduction: each stage requires |constant| < leading.
  while (true) {
    if (!(std::abs(p[n]) < p[0])) return false;
    if (n == 1) return true;
    std::vector<double> q(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      q[i] = p[0] * p[i] - p[n] * p[n - i];
    }
    p = std::move(q);
    --n;
  }
}

double dc_gain(const DiscreteFilter& filter) {
  double sum_b = 0.0;
  double sum_a = 0.0;
  for (double c : filter.b) sum_b += c;
  for (double c : filter.a) sum_a += c;
  if (sum_a == 0.0) {
    throw Error(ErrorCode::PoleAtDC, "denominator vanishes at z = 1");
  }
  return sum_b / sum_a;
}

}  // namespace wearmon
