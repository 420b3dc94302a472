#pragma once

#include <vector>

#include "wearmon/error.hpp"

namespace wearmon {

/// Low-pass design target: edge frequencies in Hz, attenuations in dB.
/// Construction enforces 0 < f_p < f_a < f_s/2 and 0 < A_p < A_a.
struct FilterSpec {
  double sample_rate = 0.0;     ///< f_s, Hz
  double passband_edge = 0.0;   ///< f_p, Hz
  double stopband_edge = 0.0;   ///< f_a, Hz
  double passband_atten = 0.0;  ///< A_p, dB
  double stopband_atten = 0.0;  ///< A_a, dB

  FilterSpec() = default;
  FilterSpec(double fs, double fp, double fa, double ap, double aa);
};

/// Intermediate quantities of a completed low-pass design.
struct DesignRecord {
  double omega_p_warped = 0.0;  ///< pre-warped passband edge, rad/s
  double omega_a_warped = 0.0;  ///< pre-warped stopband edge, rad/s
  int order = 0;                ///< minimum Butterworth order N
  double omega_c_warped = 0.0;  ///< pre-warped cutoff, rad/s
};

/// Continuous-time rational transfer function. Coefficients are stored in
/// ascending powers of s; denominator()[0] is the constant term.
struct AnalogTF {
  std::vector<double> numerator{1.0};
  std::vector<double> denominator{1.0};
};

/// Discrete transfer function H(z) = sum(b_i z^-i) / sum(a_i z^-i) with
/// a[0] == 1 after normalization.
struct DiscreteFilter {
  std::vector<double> b{1.0};
  std::vector<double> a{1.0};
  double sample_period = 0.0;  ///< seconds

  std::size_t feedforward_order() const { return b.size() - 1; }
  std::size_t feedback_order() const { return a.size() - 1; }
};

/// Maps a design frequency through the bilinear warp:
/// Omega = (2/tau) * tan(pi * f / f_s). Throws NyquistEdge at or above f_s/2.
double prewarp(double f_hz, double sample_rate_hz);

/// Minimum Butterworth order meeting passband/stopband attenuation at the
/// pre-warped edges.
int butterworth_min_order(double omega_p, double omega_a, double ap_db, double aa_db);

/// Cutoff placed on the passband constraint:
/// Omega_c = Omega_p * (10^(A_p/10) - 1)^(-1/(2N)).
double butterworth_cutoff(double omega_p, double ap_db, int order);

/// Normalized all-pole Butterworth prototype (cutoff 1 rad/s), built from the
/// exact left-half-plane pole positions. Supported orders: 1..12.
AnalogTF butterworth_prototype(int order);

/// Substitutes s -> s / omega_c: coefficient of s^k is divided by omega_c^k.
AnalogTF frequency_scale(const AnalogTF& tf, double omega_c);

/// Bilinear substitution s = (2/tau)(1 - z^-1)/(1 + z^-1), expanded and
/// collected in powers of z^-1, then normalized so a[0] == 1.
DiscreteFilter bilinear_transform(const AnalogTF& tf, double sample_rate_hz);

struct LowpassDesign {
  DiscreteFilter filter;
  DesignRecord record;
};

/// Full synthesis chain: prewarp edges, minimum order, cutoff, prototype,
/// frequency scaling, bilinear transform.
LowpassDesign design_lowpass(const FilterSpec& spec);

/// Magnitude response in dB at frequency f (0 <= f <= Nyquist).
double digital_magnitude_db(const DiscreteFilter& filter, double f_hz);

/// Largest prototype order the double-precision bilinear expansion supports.
inline constexpr int kMaxFilterOrder = 12;

}  // namespace wearmon
