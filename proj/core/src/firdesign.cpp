#include "kidsim/firdesign.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kidsim/fixed.hpp"

namespace kidsim {

namespace {

double bessel_i0(double x) {
    // Power series; converges fast for the beta range used here.
    double sum = 1.0, term = 1.0;
    const double hx = x / 2.0;
    for (int k = 1; k < 64; ++k) {
        term *= (hx / k) * (hx / k);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

}  // namespace

std::vector<double> design_lowpass(const FirSpec& spec) {
    if (spec.stopband_hz <= spec.passband_hz || spec.stopband_hz >= spec.sample_rate / 2)
        throw std::invalid_argument("design_lowpass: bad band edges");
    const double a = spec.atten_db;
    const double beta = a > 50.0  ? 0.1102 * (a - 8.7)
                        : a > 21.0 ? 0.5842 * std::pow(a - 21.0, 0.4) + 0.07886 * (a - 21.0)
                                   : 0.0;
    const double d_omega =
        2.0 * std::numbers::pi * (spec.stopband_hz - spec.passband_hz) / spec.sample_rate;
    int n = static_cast<int>(std::ceil((a - 7.95) / (2.285 * d_omega))) + 1;
    if (n % 2 == 0) ++n;

    const double fc = 0.5 * (spec.passband_hz + spec.stopband_hz) / spec.sample_rate;
    const int mid = n / 2;
    const double i0_beta = bessel_i0(beta);
    std::vector<double> h(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const int m = k - mid;
        const double x = 2.0 * std::numbers::pi * fc * m;
        const double sinc = m == 0 ? 2.0 * fc : std::sin(x) / (std::numbers::pi * m);
        const double r = static_cast<double>(m) / mid;
        const double w = bessel_i0(beta * std::sqrt(1.0 - r * r)) / i0_beta;
        h[static_cast<std::size_t>(k)] = spec.gain * sinc * w;
    }
    return h;
}

std::complex<double> fir_response(const std::vector<double>& taps, double sample_rate, double f) {
    const double w = 2.0 * std::numbers::pi * f / sample_rate;
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < taps.size(); ++k)
        acc += taps[k] * std::exp(std::complex<double>(0.0, -w * static_cast<double>(k)));
    return acc;
}

double fir_response_db(const std::vector<double>& taps, double sample_rate, double f) {
    const double mag = std::abs(fir_response(taps, sample_rate, f));
    return 20.0 * std::log10(std::max(mag, 1e-300));
}

std::vector<std::int32_t> quantize_taps(const std::vector<double>& taps) {
    std::vector<std::int32_t> out(taps.size());
    for (std::size_t k = 0; k < taps.size(); ++k) out[k] = quantize_coeff(taps[k]);
    return out;
}

}  // namespace kidsim
