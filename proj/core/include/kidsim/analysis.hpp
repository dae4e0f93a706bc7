#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kidsim/excitation.hpp"
#include "kidsim/firdesign.hpp"
#include "kidsim/fixed.hpp"
#include "kidsim/stream.hpp"
#include "kidsim/tonegen.hpp"

namespace kidsim {

std::vector<double> default_channelizer_taps();

/// Magnitude response of the L-sample boxcar average (Dirichlet kernel),
/// |sin(pi f L / Fs) / (L sin(pi f / Fs))|. The argument is folded to the
/// nearest integer so exact nulls evaluate to exactly zero.
double averaging_filter_response(std::uint64_t window_len, double f, double sample_rate);

// ---------------------------------------------------------------------------
// Per-band channelizer, modeled as the literal five-operation cascade:
//   (1) demodulate by e^{-j alpha n}  (2) low-pass to +-50 MHz
//   (3) decimate 2000 -> 250 MHz      (4) up-convert by +62.5 MHz (e^{+j pi n/2})
//   (5) realize (keep I).
// The filter+decimator only evaluates outputs at the retained positions.
// ---------------------------------------------------------------------------

template <typename Sample>
class Channelizer {
  public:
    Channelizer(int band, const std::vector<double>& lpf_taps, SaturationCounter& sat)
        : demod_(BandPhasorTable<Sample>::make(band, /*conjugate=*/true, sat)), sat_(&sat) {
        if constexpr (std::is_same_v<Sample, CpxI32>) {
            for (double t : lpf_taps) taps_fx_.push_back(quantize_coeff(t));
        } else {
            taps_f_ = lpf_taps;
        }
        hist_.assign(lpf_taps.size(), Sample{});
    }

    struct Blocks {
        IqStream<Sample> demod;   // only filled when keep_demod was requested
        IqStream<Sample> out;     // real-valued, 250 MHz
    };

    /// Push one real-valued block at the DAC rate. Output block covers the
    /// decimated positions that became available; state carries across calls.
    Blocks push(const IqStream<Sample>& in, bool keep_demod = false) {
        check_real(in);
        Blocks r;
        r.out.sample_rate = in.sample_rate / kInterpFactor;
        r.out.origin_index = produced_out_;
        if (keep_demod) {
            r.demod.sample_rate = in.sample_rate;
            r.demod.origin_index = consumed_;
        }
        const std::size_t nt = hist_.size();
        r.out.samples.reserve(in.samples.size() / kInterpFactor + 1);
        for (std::size_t k = 0; k < in.samples.size(); ++k) {
            const std::uint64_t n = consumed_ + k;
            const auto& p =
                demod_.entries[static_cast<std::size_t>(n % kPhasorTablePeriod)];
            Sample d = demod_one(in.samples[k], p);
            if (keep_demod) r.demod.samples.push_back(d);
            pos_ = (pos_ + 1) % nt;
            hist_[pos_] = d;
            // Retain output at n = 8m (phase-locked to the global index).
            if (n % kInterpFactor == 0) {
                Sample y = filter_at();
                const std::uint64_t m = n / kInterpFactor;
                r.out.samples.push_back(upconvert(y, m));
            }
        }
        consumed_ += in.samples.size();
        produced_out_ += r.out.samples.size();
        return r;
    }

  private:
    static void check_real(const IqStream<Sample>& in) {
        for (const auto& s : in.samples) {
            if constexpr (std::is_same_v<Sample, CpxI32>) {
                if (s.q != 0) throw std::invalid_argument("Channelizer: input must be real");
            } else {
                if (s.imag() != 0.0) throw std::invalid_argument("Channelizer: input must be real");
            }
        }
    }

    Sample demod_one(const Sample& s, const Sample& p) {
        if constexpr (std::is_same_v<Sample, CpxI32>) {
            // Real input times complex phasor: two products, one rounding each.
            const std::int64_t vi = static_cast<std::int64_t>(s.i) * p.i;
            const std::int64_t vq = static_cast<std::int64_t>(s.i) * p.q;
            Sample d;
            d.i = static_cast<std::int32_t>(
                round_shift_saturate(vi, kSampleFrac, kSampleWidth, *sat_));
            d.q = static_cast<std::int32_t>(
                round_shift_saturate(vq, kSampleFrac, kSampleWidth, *sat_));
            return d;
        } else {
            return s.real() * p;
        }
    }

    Sample filter_at() {
        const std::size_t nt = hist_.size();
        if constexpr (std::is_same_v<Sample, CpxI32>) {
            std::int64_t ai = 0, aq = 0;
            for (std::size_t k = 0; k < nt; ++k) {
                const auto& v = hist_[(pos_ + nt - k) % nt];
                ai += static_cast<std::int64_t>(taps_fx_[k]) * v.i;
                aq += static_cast<std::int64_t>(taps_fx_[k]) * v.q;
            }
            Sample y;
            y.i = static_cast<std::int32_t>(
                round_shift_saturate(ai, kCoeffFrac, kSampleWidth, *sat_));
            y.q = static_cast<std::int32_t>(
                round_shift_saturate(aq, kCoeffFrac, kSampleWidth, *sat_));
            return y;
        } else {
            CpxF64 acc = 0.0;
            for (std::size_t k = 0; k < nt; ++k) acc += taps_f_[k] * hist_[(pos_ + nt - k) % nt];
            return acc;
        }
    }

    /// +62.5 MHz at 250 MHz: multiply by e^{+j pi m / 2} then keep I.
    Sample upconvert(const Sample& y, std::uint64_t m) {
        const unsigned phase = static_cast<unsigned>(m & 3u);
        if constexpr (std::is_same_v<Sample, CpxI32>) {
            std::int32_t re = 0;
            switch (phase) {
                case 0: re = y.i; break;
                case 1: re = neg16(y.q, *sat_); break;
                case 2: re = neg16(y.i, *sat_); break;
                case 3: re = y.q; break;
            }
            return {re, 0};
        } else {
            double re = 0.0;
            switch (phase) {
                case 0: re = y.real(); break;
                case 1: re = -y.imag(); break;
                case 2: re = -y.real(); break;
                case 3: re = y.imag(); break;
            }
            return {re, 0.0};
        }
    }

    BandPhasorTable<Sample> demod_;
    std::vector<std::int32_t> taps_fx_;
    std::vector<double> taps_f_;
    std::vector<Sample> hist_;
    std::size_t pos_ = 0;
    std::uint64_t consumed_ = 0;
    std::uint64_t produced_out_ = 0;
    SaturationCounter* sat_;
};

// ---------------------------------------------------------------------------
// Per-tone DDC: multiply the real channelized signal by the conjugate of the
// original excitation tone (the exact CORDIC samples, reused by reference),
// boxcar-average over window_len, decimate by window_len. Windows are
// non-overlapping and locked to the global index n = 0.
//
// The averaged output keeps the full accumulator precision (the firmware DDC
// accumulates wide); output samples are exact rationals held in doubles, so
// fixed-mode runs remain bit-reproducible.
// ---------------------------------------------------------------------------

struct DdcConfig {
    std::uint64_t window_len = 65536;
    double input_rate = kChainRate;

    double output_rate() const { return input_rate / static_cast<double>(window_len); }
};

template <typename Sample>
class Ddc {
  public:
    explicit Ddc(const DdcConfig& cfg) : cfg_(cfg) {
        if (cfg.window_len < 1) throw std::invalid_argument("Ddc: window_len < 1");
    }

    /// `chan` is the real channelizer output; `tone` the matching excitation
    /// tone block (same global indexes, same length).
    FloatStream push(const IqStream<Sample>& chan, const IqStream<Sample>& tone) {
        if (chan.samples.size() != tone.samples.size())
            throw std::invalid_argument("Ddc: channel/tone block length mismatch");
        FloatStream out;
        out.sample_rate = cfg_.output_rate();
        out.origin_index = produced_;
        for (std::size_t k = 0; k < chan.samples.size(); ++k) {
            accumulate(chan.samples[k], tone.samples[k]);
            if (++fill_ == cfg_.window_len) {
                out.samples.push_back(emit());
                fill_ = 0;
            }
        }
        produced_ += out.samples.size();
        return out;
    }

  private:
    void accumulate(const Sample& s, const Sample& t) {
        if constexpr (std::is_same_v<Sample, CpxI32>) {
            // s real, conj(tone) = (t.i, -t.q); exact integer products.
            acc_i_ += static_cast<std::int64_t>(s.i) * t.i;
            acc_q_ -= static_cast<std::int64_t>(s.i) * t.q;
        } else {
            acc_f_ += s.real() * std::conj(t);
        }
    }

    CpxF64 emit() {
        const double L = static_cast<double>(cfg_.window_len);
        CpxF64 y;
        if constexpr (std::is_same_v<Sample, CpxI32>) {
            const double scale = std::ldexp(1.0, -2 * kSampleFrac) / L;
            y = {static_cast<double>(acc_i_) * scale, static_cast<double>(acc_q_) * scale};
            acc_i_ = acc_q_ = 0;
        } else {
            y = acc_f_ / L;
            acc_f_ = 0.0;
        }
        return y;
    }

    DdcConfig cfg_;
    std::int64_t acc_i_ = 0;
    std::int64_t acc_q_ = 0;
    CpxF64 acc_f_ = 0.0;
    std::uint64_t fill_ = 0;
    std::uint64_t produced_ = 0;
};

}  // namespace kidsim
