#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace kidsim {

/// Kaiser-windowed sinc low-pass. Tap count is derived from the transition
/// width and attenuation target and forced odd (symmetric, linear phase).
/// `gain` scales the passband (interpolators compensate the 1/L zero-stuffing
/// loss here).
struct FirSpec {
    double sample_rate;
    double passband_hz;
    double stopband_hz;
    double atten_db;
    double gain = 1.0;
};

std::vector<double> design_lowpass(const FirSpec& spec);

/// Frequency response of a real tap set at one frequency.
std::complex<double> fir_response(const std::vector<double>& taps, double sample_rate, double f);
double fir_response_db(const std::vector<double>& taps, double sample_rate, double f);

/// Taps on the 18-bit coefficient grid (fixed backend).
std::vector<std::int32_t> quantize_taps(const std::vector<double>& taps);

}  // namespace kidsim
