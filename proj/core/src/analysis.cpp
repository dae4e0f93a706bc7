#include "kidsim/analysis.hpp"

#include <cmath>
#include <numbers>

namespace kidsim {

// Stand-in for the undisclosed firmware channelizer filter: 50 MHz cutoff,
// transition to 75 MHz, stopband designed past the -80 dB the firmware is
// credited with.
std::vector<double> default_channelizer_taps() {
    return design_lowpass({kDacRate, 50e6, 75e6, 85.0, 1.0});
}

double averaging_filter_response(std::uint64_t window_len, double f, double sample_rate) {
    const double L = static_cast<double>(window_len);
    // |sin(pi x)| via fold to the nearest integer: exact zeros stay exact.
    const auto abs_sin_pi = [](double x) {
        const double u = x - std::round(x);
        return std::abs(std::sin(std::numbers::pi * u));
    };
    const double num = abs_sin_pi(f * L / sample_rate);
    const double den = abs_sin_pi(f / sample_rate);
    if (den == 0.0) return num == 0.0 ? 1.0 : 0.0;  // alias of DC (num==0 there too)
    return num / (L * den);
}

}  // namespace kidsim
