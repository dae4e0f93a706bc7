#pragma once

#include <cstdint>
#include <stdexcept>

namespace kidsim {

/// Running count of saturation events for one processing run.
/// Saturation is silent at the sample level; stages accumulate into one of
/// these and the pipeline reports the totals.
struct SaturationCounter {
    std::uint64_t count = 0;

    void note(bool saturated) { count += saturated ? 1u : 0u; }
    SaturationCounter& operator+=(const SaturationCounter& o) {
        count += o.count;
        return *this;
    }
};

/// Round an integer value carrying `shift` extra fractional bits to the
/// nearest integer, ties away from zero. shift == 0 is the identity.
inline std::int64_t round_shift(std::int64_t v, int shift) {
    if (shift <= 0) return v << (-shift);
    const std::int64_t half = std::int64_t{1} << (shift - 1);
    if (v >= 0) return (v + half) >> shift;
    // Arithmetic shift floors; bias so that ties go away from zero.
    return -((-v + half) >> shift);
}

/// Clamp to the two's-complement range of `width` bits, counting the event.
inline std::int64_t saturate(std::int64_t v, int width, SaturationCounter& sat) {
    const std::int64_t hi = (std::int64_t{1} << (width - 1)) - 1;
    const std::int64_t lo = -(std::int64_t{1} << (width - 1));
    if (v > hi) {
        sat.note(true);
        return hi;
    }
    if (v < lo) {
        sat.note(true);
        return lo;
    }
    return v;
}

/// Round `acc` (carrying `shift` fractional bits beyond the target layout)
/// then saturate to `width` bits. The single quantization rule used on every
/// fixed datapath.
inline std::int64_t round_shift_saturate(std::int64_t acc, int shift, int width,
                                         SaturationCounter& sat) {
    return saturate(round_shift(acc, shift), width, sat);
}

/// A signed fixed-point sample: `value` is the raw integer, interpreted as
/// value / 2^frac_bits, stored in `width` bits.
struct FixedSample {
    std::int64_t value = 0;
    int width = 16;
    int frac_bits = 15;

    FixedSample() = default;
    FixedSample(std::int64_t v, int w, int f) : value(v), width(w), frac_bits(f) {
        if (w < 2 || w > 32) throw std::invalid_argument("FixedSample: width out of [2,32]");
        const std::int64_t hi = (std::int64_t{1} << (w - 1)) - 1;
        const std::int64_t lo = -(std::int64_t{1} << (w - 1));
        if (v < lo || v > hi) throw std::invalid_argument("FixedSample: value out of range");
    }

    static FixedSample from_double(double x, int w, int f, SaturationCounter& sat);
    double to_double() const { return static_cast<double>(value) / static_cast<double>(std::int64_t{1} << frac_bits); }

    bool operator==(const FixedSample&) const = default;
};

/// Full-precision product of a and b, shifted to out_frac with
/// round-to-nearest (ties away from zero), saturated to out_width.
FixedSample fx_mul(const FixedSample& a, const FixedSample& b, int out_width, int out_frac,
                   SaturationCounter& sat);

/// Complex fixed-point sample; i and q share one bit layout.
struct ComplexFixed {
    FixedSample i;
    FixedSample q;
    bool operator==(const ComplexFixed&) const = default;
};

/// (a.i*b.i - a.q*b.q, a.i*b.q + a.q*b.i) with fx_mul rounding applied once,
/// on the summed cross products, so each output component rounds exactly once.
ComplexFixed complex_mul(const ComplexFixed& a, const ComplexFixed& b, int out_width,
                         int out_frac, SaturationCounter& sat);

// ---------------------------------------------------------------------------
// Pipeline fast path: the chain runs on the Q1.15 sample layout with 18-bit
// quantized coefficients. These helpers apply the same rounding/saturation
// rule as fx_mul without per-sample layout bookkeeping.
// ---------------------------------------------------------------------------

inline constexpr int kSampleWidth = 16;     // I/Q samples: Q1.15
inline constexpr int kSampleFrac = 15;
inline constexpr int kCoeffFrac = 17;       // FIR taps and phasors: 18-bit, Q1.17
inline constexpr int kCoeffWidth = 18;

/// Quantize a real coefficient in (-1, 1) to the 18-bit coefficient grid.
std::int32_t quantize_coeff(double c);

/// Quantize to plain Q1.15 (sample grid).
std::int32_t quantize_sample(double x, SaturationCounter& sat);

}  // namespace kidsim
