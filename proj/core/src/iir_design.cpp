#include "wearmon/iir_design.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace wearmon {

namespace {

// Polynomial product, coefficients ascending.
std::vector<double> poly_mul(const std::vector<double>& p, const std::vector<double>& q) {
  std::vector<double> r(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      r[i + j] += p[i] * q[j];
    }
  }
  return r;
}

std::size_t effective_degree(const std::vector<double>& coeffs) {
  std::size_t deg = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] != 0.0) deg = i;
  }
  return deg;
}

// Coefficients of (1 - u)^k (1 + u)^(d - k), ascending in u.
std::vector<double> mixed_binomial(std::size_t k, std::size_t d) {
  std::vector<double> r{1.0};
  const std::vector<double> minus{1.0, -1.0};
  const std::vector<double> plus{1.0, 1.0};
  for (std::size_t i = 0; i < k; ++i) r = poly_mul(r, minus);
  for (std::size_t i = k; i < d; ++i) r = poly_mul(r, plus);
  return r;
}

std::vector<double> bilinear_poly(const std::vector<double>& coeffs, double two_over_tau,
                                  std::size_t degree) {
  std::vector<double> out(degree + 1, 0.0);
  double k_pow = 1.0;
  for (std::size_t k = 0; k <= degree; ++k) {
    const double c = k < coeffs.size() ? coeffs[k] : 0.0;
    if (c != 0.0) {
      const std::vector<double> term = mixed_binomial(k, degree);
      for (std::size_t i = 0; i <= degree; ++i) out[i] += c * k_pow * term[i];
    }
    k_pow *= two_over_tau;
  }
  return out;
}

std::complex<double> eval_poly(const std::vector<double>& coeffs, std::complex<double> u) {
  std::complex<double> acc(0.0, 0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * u + *it;
  }
  return acc;
}

}  // namespace

FilterSpec::FilterSpec(double fs, double fp, double fa, double ap, double aa)
    : sample_rate(fs), passband_edge(fp), stopband_edge(fa), passband_atten(ap),
      stopband_atten(aa) {
  if (!(fs > 0.0) || !std::isfinite(fs)) {
    throw Error(ErrorCode::InvalidSpec, "sample rate must be positive");
  }
  if (!(fp > 0.0) || !(fa > fp) || !(fa < fs / 2.0)) {
    throw Error(ErrorCode::InvalidSpec, "need 0 < f_p < f_a < f_s/2");
  }
  if (!(ap > 0.0) || !(aa > ap)) {
    throw Error(ErrorCode::InvalidSpec, "need 0 < A_p < A_a");
  }
}

double prewarp(double f_hz, double sample_rate_hz) {
  if (!(sample_rate_hz > 0.0)) {
    throw Error(ErrorCode::InvalidSpec, "sample rate must be positive");
  }
  if (!(f_hz > 0.0)) {
    throw Error(ErrorCode::InvalidSpec, "frequency must be positive");
  }
  if (f_hz >= sample_rate_hz / 2.0) {
    throw Error(ErrorCode::NyquistEdge, "tangent singularity at or above f_s/2");
  }
  const double tau = 1.0 / sample_rate_hz;
  return (2.0 / tau) * std::tan(std::numbers::pi * f_hz / sample_rate_hz);
}

int butterworth_min_order(double omega_p, double omega_a, double ap_db, double aa_db) {
  if (!(omega_p > 0.0) || !(omega_a > omega_p)) {
    throw Error(ErrorCode::InvalidSpec, "need 0 < Omega_p < Omega_a");
  }
  if (!(ap_db > 0.0) || !(aa_db > ap_db)) {
    throw Error(ErrorCode::InvalidSpec, "need 0 < A_p < A_a");
  }
  const double eps_p = std::sqrt(std::pow(10.0, 0.1 * ap_db) - 1.0);
  const double eps_a = std::sqrt(std::pow(10.0, 0.1 * aa_db) - 1.0);
  const double n_real = std::log(eps_a / eps_p) / std::log(omega_a / omega_p);
  const int n = static_cast<int>(std::ceil(n_real - 1e-9));
  return std::max(n, 1);
}

double butterworth_cutoff(double omega_p, double ap_db, int order) {
  if (order < 1) {
    throw Error(ErrorCode::InvalidSpec, "order must be >= 1");
  }
  if (!(ap_db > 0.0) || !(omega_p > 0.0)) {
    throw Error(ErrorCode::InvalidSpec, "need positive Omega_p and A_p");
  }
  const double eps_sq = std::pow(10.0, 0.1 * ap_db) - 1.0;
  return omega_p * std::pow(eps_sq, -1.0 / (2.0 * order));
}

AnalogTF butterworth_prototype(int order) {
  if (order < 1 || order > kMaxFilterOrder) {
    throw Error(ErrorCode::OrderOutOfRange, "supported prototype orders are 1..12");
  }
  // Poles s_k = exp(j*pi*(2k + N - 1)/(2N)) pair up as conjugates; each pair
  // contributes s^2 - 2*Re(s_k)*s + 1, an odd order adds the real pole at -1.
  std::vector<double> den{1.0};
  for (int k = 1; k <= order / 2; ++k) {
    const double theta = std::numbers::pi * (2.0 * k + order - 1.0) / (2.0 * order);
    den = poly_mul(den, {1.0, -2.0 * std::cos(theta), 1.0});
  }
  if (order % 2 == 1) {
    den = poly_mul(den, {1.0, 1.0});
  }
  AnalogTF tf;
  tf.numerator = {1.0};
  tf.denominator = std::move(den);
  return tf;
}

AnalogTF frequency_scale(const AnalogTF& tf, double omega_c) {
  if (!(omega_c > 0.0)) {
    throw Error(ErrorCode::InvalidSpec, "cutoff must be positive");
  }
  AnalogTF out = tf;
  auto scale = [omega_c](std::vector<double>& coeffs) {
    double div = 1.0;
    for (double& c : coeffs) {
      c /= div;
      div *= omega_c;
    }
  };
  scale(out.numerator);
  scale(out.denominator);
  return out;
}

DiscreteFilter bilinear_transform(const AnalogTF& tf, double sample_rate_hz) {
  if (!(sample_rate_hz > 0.0)) {
    throw Error(ErrorCode::InvalidSpec, "sample rate must be positive");
  }
  const std::size_t degree =
      std::max(effective_degree(tf.numerator), effective_degree(tf.denominator));
  const double two_over_tau = 2.0 * sample_rate_hz;

  std::vector<double> b = bilinear_poly(tf.numerator, two_over_tau, degree);
  std::vector<double> a = bilinear_poly(tf.denominator, two_over_tau, degree);

  if (a[0] == 0.0) {
    throw Error(ErrorCode::DegenerateMapping, "leading denominator coefficient vanished");
  }
  const double norm = a[0];
  for (double& c : b) c /= norm;
  for (double& c : a) c /= norm;
  a[0] = 1.0;

  DiscreteFilter filter;
  filter.b = std::move(b);
  filter.a = std::move(a);
  filter.sample_period = 1.0 / sample_rate_hz;
  return filter;
}

LowpassDesign design_lowpass(const FilterSpec& spec) {
  // Re-validate: specs may arrive from deserialized JSON.
  FilterSpec checked(spec.sample_rate, spec.passband_edge, spec.stopband_edge,
                     spec.passband_atten, spec.stopband_atten);

  DesignRecord record;
  record.omega_p_warped = prewarp(checked.passband_edge, checked.sample_rate);
  record.omega_a_warped = prewarp(checked.stopband_edge, checked.sample_rate);
  record.order = butterworth_min_order(record.omega_p_warped, record.omega_a_warped,
                                       checked.passband_atten, checked.stopband_atten);
  record.omega_c_warped =
      butterworth_cutoff(record.omega_p_warped, checked.passband_atten, record.order);

  const AnalogTF prototype = butterworth_prototype(record.order);
  const AnalogTF scaled = frequency_scale(prototype, record.omega_c_warped);
  DiscreteFilter filter = bilinear_transform(scaled, checked.sample_rate);

  return LowpassDesign{std::move(filter), record};
}

double digital_magnitude_db(const DiscreteFilter& filter, double f_hz) {
  const double nyquist = 0.5 / filter.sample_period;
  if (!(f_hz >= 0.0) || f_hz > nyquist * (1.0 + 1e-12)) {
    throw Error(ErrorCode::FrequencyOutOfRange, "frequency outside [0, Nyquist]");
  }
  const double omega = 2.0 * std::numbers::pi * f_hz * filter.sample_period;
  const std::complex<double> u(std::cos(omega), -std::sin(omega));  // z^-1
  const std::complex<double> num = eval_poly(filter.b, u);
  const std::complex<double> den = eval_poly(filter.a, u);
  return 20.0 * std::log10(std::abs(num) / std::abs(den));
}

}  // namespace wearmon
