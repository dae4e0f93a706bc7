#include "kidsim/cordic.hpp"

#include <cmath>
#include <numbers>

namespace kidsim {

namespace {

constexpr int kXYFrac = 30;   // working x/y scale
constexpr int kZFrac = 32;    // angle scale, radians * 2^32

struct Tables {
    std::array<std::int64_t, 32> atan_z{};
    Tables() {
        for (int i = 0; i < 32; ++i)
            atan_z[i] = std::llround(std::atan(std::ldexp(1.0, -i)) * 4294967296.0);
    }
};
const Tables kTab;

std::int64_t gain_reciprocal(int iterations) {
    double k = 1.0;
    for (int i = 0; i < iterations; ++i) k *= std::sqrt(1.0 + std::ldexp(1.0, -2 * i));
    return std::llround((1.0 / k) * std::ldexp(1.0, kXYFrac));
}

}  // namespace

CpxI32 cordic_sincos(int phase10, int iterations, SaturationCounter& sat) {
    const int quadrant = (phase10 >> (kCordicPhaseBits - 2)) & 3;
    const int rem = phase10 & ((1 << (kCordicPhaseBits - 2)) - 1);

    // Angle within the first quadrant, in z units.
    const double step = 2.0 * std::numbers::pi / kCordicPhaseCodes * std::ldexp(1.0, kZFrac);
    std::int64_t z = std::llround(rem * step);

    std::int64_t x = gain_reciprocal(iterations);
    std::int64_t y = 0;
    for (int i = 0; i < iterations; ++i) {
        const std::int64_t xs = x >> i;
        const std::int64_t ys = y >> i;
        if (z >= 0) {
            x -= ys;
            y += xs;
            z -= kTab.atan_z[i];
        } else {
            x += ys;
            y -= xs;
            z += kTab.atan_z[i];
        }
    }

    std::int64_t c = round_shift(x, kXYFrac - kSampleFrac);
    std::int64_t s = round_shift(y, kXYFrac - kSampleFrac);
    // Quadrant unfold: (c,s) holds cos/sin of the folded angle in [0, pi/2).
    std::int64_t re = 0, im = 0;
    switch (quadrant) {
        case 0: re = c;  im = s;  break;
        case 1: re = -s; im = c;  break;
        case 2: re = -c; im = -s; break;
        case 3: re = s;  im = -c; break;
    }
    CpxI32 out;
    out.i = static_cast<std::int32_t>(saturate(re, kSampleWidth, sat));
    out.q = static_cast<std::int32_t>(saturate(im, kSampleWidth, sat));
    return out;
}

CpxF64 cordic_sincos_f(int phase10) {
    const double th = 2.0 * std::numbers::pi * phase10 / kCordicPhaseCodes;
    return {std::cos(th), std::sin(th)};
}

std::array<CpxI32, kCordicPhaseCodes> cordic_table(int iterations, SaturationCounter& sat) {
    std::array<CpxI32, kCordicPhaseCodes> t;
    for (int p = 0; p < kCordicPhaseCodes; ++p) t[p] = cordic_sincos(p, iterations, sat);
    return t;
}

std::array<CpxF64, kCordicPhaseCodes> cordic_table_f() {
    std::array<CpxF64, kCordicPhaseCodes> t;
    for (int p = 0; p < kCordicPhaseCodes; ++p) t[p] = cordic_sincos_f(p);
    return t;
}

}  // namespace kidsim
