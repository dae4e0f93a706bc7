#include "kidsim/fixed.hpp"

#include <cmath>

namespace kidsim {

FixedSample FixedSample::from_double(double x, int w, int f, SaturationCounter& sat) {
    const double scaled = x * static_cast<double>(std::int64_t{1} << f);
    // Round half away from zero, matching the integer rule.
    const double r = scaled >= 0 ? std::floor(scaled + 0.5) : std::ceil(scaled - 0.5);
    FixedSample s;
    s.width = w;
    s.frac_bits = f;
    s.value = saturate(static_cast<std::int64_t>(r), w, sat);
    return s;
}

FixedSample fx_mul(const FixedSample& a, const FixedSample& b, int out_width, int out_frac,
                   SaturationCounter& sat) {
    // Exact product: operands are <= 32 bits each, so the product fits in 64.
    const std::int64_t prod = a.value * b.value;
    const int shift = a.frac_bits + b.frac_bits - out_frac;
    FixedSample out;
    out.width = out_width;
    out.frac_bits = out_frac;
    out.value = round_shift_saturate(prod, shift, out_width, sat);
    return out;
}

ComplexFixed complex_mul(const ComplexFixed& a, const ComplexFixed& b, int out_width,
                         int out_frac, SaturationCounter& sat) {
    const std::int64_t re = a.i.value * b.i.value - a.q.value * b.q.value;
    const std::int64_t im = a.i.value * b.q.value + a.q.value * b.i.value;
    const int shift = a.i.frac_bits + b.i.frac_bits - out_frac;
    ComplexFixed out;
    out.i.width = out_width;
    out.i.frac_bits = out_frac;
    out.i.value = round_shift_saturate(re, shift, out_width, sat);
    out.q.width = out_width;
    out.q.frac_bits = out_frac;
    out.q.value = round_shift_saturate(im, shift, out_width, sat);
    return out;
}

std::int32_t quantize_coeff(double c) {
    SaturationCounter sink;
    const double scaled = c * static_cast<double>(1 << kCoeffFrac);
    const double r = scaled >= 0 ? std::floor(scaled + 0.5) : std::ceil(scaled - 0.5);
    return static_cast<std::int32_t>(saturate(static_cast<std::int64_t>(r), kCoeffWidth, sink));
}

std::int32_t quantize_sample(double x, SaturationCounter& sat) {
    const double scaled = x * static_cast<double>(1 << kSampleFrac);
    const double r = scaled >= 0 ? std::floor(scaled + 0.5) : std::ceil(scaled - 0.5);
    return static_cast<std::int32_t>(saturate(static_cast<std::int64_t>(r), kSampleWidth, sat));
}

}  // namespace kidsim
