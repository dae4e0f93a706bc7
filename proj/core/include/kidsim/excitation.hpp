#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "kidsim/firdesign.hpp"
#include "kidsim/fixed.hpp"
#include "kidsim/stream.hpp"
#include "kidsim/tonegen.hpp"

namespace kidsim {

// Saturating 16-bit negate: -(-32768) clamps to 32767.
inline std::int32_t neg16(std::int32_t v, SaturationCounter& sat) {
    return static_cast<std::int32_t>(saturate(-static_cast<std::int64_t>(v), kSampleWidth, sat));
}

inline CpxI32 cmul_q15(const CpxI32& a, const CpxI32& b, SaturationCounter& sat) {
    const std::int64_t re =
        static_cast<std::int64_t>(a.i) * b.i - static_cast<std::int64_t>(a.q) * b.q;
    const std::int64_t im =
        static_cast<std::int64_t>(a.i) * b.q + static_cast<std::int64_t>(a.q) * b.i;
    CpxI32 out;
    out.i = static_cast<std::int32_t>(round_shift_saturate(re, kSampleFrac, kSampleWidth, sat));
    out.q = static_cast<std::int32_t>(round_shift_saturate(im, kSampleFrac, kSampleWidth, sat));
    return out;
}
inline CpxF64 cmul_q15(const CpxF64& a, const CpxF64& b, SaturationCounter&) { return a * b; }

// ---------------------------------------------------------------------------
// -Fs/4 down-shifter: x[n] * e^{-j pi n / 2}, realized as the exact 4-phase
// sequence {(I,Q), (Q,-I), (-I,-Q), (-Q,I)} -- multiplier-free. The phase is
// taken from the stream's global origin so block splits do not matter.
// ---------------------------------------------------------------------------

template <typename Sample>
IqStream<Sample> downshift_quarter_rate(const IqStream<Sample>& in, SaturationCounter& sat) {
    IqStream<Sample> out;
    out.sample_rate = in.sample_rate;
    out.origin_index = in.origin_index;
    out.samples.resize(in.samples.size());
    for (std::size_t k = 0; k < in.samples.size(); ++k) {
        const auto& s = in.samples[k];
        const unsigned phase = static_cast<unsigned>((in.origin_index + k) & 3u);
        if constexpr (std::is_same_v<Sample, CpxI32>) {
            switch (phase) {
                case 0: out.samples[k] = s; break;
                case 1: out.samples[k] = {s.q, neg16(s.i, sat)}; break;
                case 2: out.samples[k] = {neg16(s.i, sat), neg16(s.q, sat)}; break;
                case 3: out.samples[k] = {neg16(s.q, sat), s.i}; break;
            }
        } else {
            switch (phase) {
                case 0: out.samples[k] = s; break;
                case 1: out.samples[k] = {s.imag(), -s.real()}; break;
                case 2: out.samples[k] = {-s.real(), -s.imag()}; break;
                case 3: out.samples[k] = {-s.imag(), s.real()}; break;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// x8 polyphase interpolator. Streaming: carries the input history across
// blocks, so output is independent of how the input is chunked.
// ---------------------------------------------------------------------------

std::vector<double> default_interp_taps();

template <typename Sample>
class Interpolator {
  public:
    Interpolator(const std::vector<double>& taps, SaturationCounter& sat)
        : sat_(&sat) {
        const std::size_t per_branch = (taps.size() + kInterpFactor - 1) / kInterpFactor;
        branches_.assign(kInterpFactor, {});
        for (auto& b : branches_) b.assign(per_branch, CoeffT{});
        for (std::size_t k = 0; k < taps.size(); ++k) {
            if constexpr (std::is_same_v<Sample, CpxI32>)
                branches_[k % kInterpFactor][k / kInterpFactor] = quantize_coeff(taps[k]);
            else
                branches_[k % kInterpFactor][k / kInterpFactor] = taps[k];
        }
        hist_.assign(per_branch, Sample{});
    }

    IqStream<Sample> push(const IqStream<Sample>& in) {
        IqStream<Sample> out;
        out.sample_rate = in.sample_rate * kInterpFactor;
        out.origin_index = produced_;
        out.samples.resize(in.samples.size() * kInterpFactor);
        const std::size_t nb = hist_.size();
        std::size_t w = 0;
        for (const auto& x : in.samples) {
            pos_ = (pos_ + 1) % nb;
            hist_[pos_] = x;
            for (int r = 0; r < kInterpFactor; ++r) {
                const auto& h = branches_[static_cast<std::size_t>(r)];
                if constexpr (std::is_same_v<Sample, CpxI32>) {
                    std::int64_t ai = 0, aq = 0;
                    for (std::size_t k = 0; k < nb; ++k) {
                        const auto& v = hist_[(pos_ + nb - k) % nb];
                        ai += static_cast<std::int64_t>(h[k]) * v.i;
                        aq += static_cast<std::int64_t>(h[k]) * v.q;
                    }
                    out.samples[w].i = static_cast<std::int32_t>(
                        round_shift_saturate(ai, kCoeffFrac, kSampleWidth, *sat_));
                    out.samples[w].q = static_cast<std::int32_t>(
                        round_shift_saturate(aq, kCoeffFrac, kSampleWidth, *sat_));
                } else {
                    CpxF64 acc = 0.0;
                    for (std::size_t k = 0; k < nb; ++k) acc += h[k] * hist_[(pos_ + nb - k) % nb];
                    out.samples[w] = acc;
                }
                ++w;
            }
        }
        produced_ += out.samples.size();
        return out;
    }

  private:
    using CoeffT = std::conditional_t<std::is_same_v<Sample, CpxI32>, std::int32_t, double>;
    std::vector<std::vector<CoeffT>> branches_;
    std::vector<Sample> hist_;
    std::size_t pos_ = 0;
    std::uint64_t produced_ = 0;
    SaturationCounter* sat_;
};

// ---------------------------------------------------------------------------
// Band up-shifter: 40-entry phasor table for e^{j alpha n},
// alpha = (2*band+1)/40 * 2*pi, indexed by the global sample index.
// ---------------------------------------------------------------------------

inline double band_alpha(int band) {
    return (2.0 * band + 1.0) / kPhasorTablePeriod * 2.0 * std::numbers::pi;
}
inline double band_shift_hz(int band) {
    return (2.0 * band + 1.0) / kPhasorTablePeriod * kDacRate;
}

template <typename Sample>
struct BandPhasorTable {
    std::vector<Sample> entries;   // size 40

    /// conjugate=false: excitation up-shift e^{+j alpha n};
    /// conjugate=true: channelizer demodulator e^{-j alpha n}.
    static BandPhasorTable make(int band, bool conjugate, SaturationCounter& sat) {
        if (band < 0 || band >= kNumBands)
            throw std::invalid_argument("BandPhasorTable: band out of [0,9]");
        const double alpha = band_alpha(band) * (conjugate ? -1.0 : 1.0);
        BandPhasorTable t;
        t.entries.resize(kPhasorTablePeriod);
        for (int n = 0; n < kPhasorTablePeriod; ++n) {
            const double c = std::cos(alpha * n);
            const double s = std::sin(alpha * n);
            if constexpr (std::is_same_v<Sample, CpxI32>)
                t.entries[static_cast<std::size_t>(n)] = {quantize_sample(c, sat),
                                                          quantize_sample(s, sat)};
            else
                t.entries[static_cast<std::size_t>(n)] = {c, s};
        }
        return t;
    }
};

template <typename Sample>
IqStream<Sample> band_upshift(const IqStream<Sample>& in, const BandPhasorTable<Sample>& table,
                              SaturationCounter& sat) {
    IqStream<Sample> out;
    out.sample_rate = in.sample_rate;
    out.origin_index = in.origin_index;
    out.samples.resize(in.samples.size());
    for (std::size_t k = 0; k < in.samples.size(); ++k) {
        const auto& p =
            table.entries[static_cast<std::size_t>((in.origin_index + k) % kPhasorTablePeriod)];
        out.samples[k] = cmul_q15(in.samples[k], p, sat);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Subband / tone combination: sample-wise sum in a wide accumulator, scaled
// back by scale_shift bits. One input stream passes through untouched.
// ---------------------------------------------------------------------------

template <typename Sample>
IqStream<Sample> combine(const std::vector<IqStream<Sample>>& streams, int scale_shift,
                         SaturationCounter& sat) {
    if (streams.empty()) throw std::invalid_argument("combine: no streams");
    for (const auto& s : streams) {
        if (s.samples.size() != streams.front().samples.size() ||
            s.sample_rate != streams.front().sample_rate)
            throw std::invalid_argument("combine: stream length/rate mismatch");
    }
    if (streams.size() == 1 && scale_shift == 0) return streams.front();
    IqStream<Sample> out;
    out.sample_rate = streams.front().sample_rate;
    out.origin_index = streams.front().origin_index;
    out.samples.resize(streams.front().samples.size());
    for (std::size_t k = 0; k < out.samples.size(); ++k) {
        if constexpr (std::is_same_v<Sample, CpxI32>) {
            std::int64_t ai = 0, aq = 0;
            for (const auto& s : streams) {
                ai += s.samples[k].i;
                aq += s.samples[k].q;
            }
            out.samples[k].i = static_cast<std::int32_t>(
                round_shift_saturate(ai, scale_shift, kSampleWidth, sat));
            out.samples[k].q = static_cast<std::int32_t>(
                round_shift_saturate(aq, scale_shift, kSampleWidth, sat));
        } else {
            CpxF64 acc = 0.0;
            for (const auto& s : streams) acc += s.samples[k];
            out.samples[k] = acc / std::ldexp(1.0, scale_shift);
        }
    }
    return out;
}

enum class Component { I, Q };

/// Loop-back realization: keep one component, zero the other. The analysis
/// chain consumes a real-valued signal.
template <typename Sample>
IqStream<Sample> realize(const IqStream<Sample>& in, Component select) {
    IqStream<Sample> out;
    out.sample_rate = in.sample_rate;
    out.origin_index = in.origin_index;
    out.samples.resize(in.samples.size());
    for (std::size_t k = 0; k < in.samples.size(); ++k) {
        if constexpr (std::is_same_v<Sample, CpxI32>)
            out.samples[k] = {select == Component::I ? in.samples[k].i : in.samples[k].q, 0};
        else
            out.samples[k] = {select == Component::I ? in.samples[k].real() : in.samples[k].imag(),
                              0.0};
    }
    return out;
}

}  // namespace kidsim
