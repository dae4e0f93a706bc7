#pragma once

#include <cstdint>
#include <stdexcept>

#include "kidsim/cordic.hpp"
#include "kidsim/fixed.hpp"
#include "kidsim/stream.hpp"

namespace kidsim {

inline constexpr double kChainRate = 250e6;   // per-band processing rate
inline constexpr int kInterpFactor = 8;
inline constexpr double kDacRate = kChainRate * kInterpFactor;
inline constexpr int kNumBands = 10;
inline constexpr int kPhasorTablePeriod = 40;

/// One excitation tone: phase-accumulator increment (FCW), accumulator
/// modulus M (65536 legacy, 65520 mitigated), and destination band.
struct ToneConfig {
    std::uint32_t fcw = 0;
    std::uint32_t modulus_m = 65536;
    int band = 0;
    double sample_rate = kChainRate;

    double frequency() const {
        return sample_rate * static_cast<double>(fcw) / static_cast<double>(modulus_m);
    }
    void validate() const {
        if (modulus_m == 0 || modulus_m > 65536)
            throw std::invalid_argument("ToneConfig: modulus_m out of (0, 65536]");
        if (fcw >= modulus_m) throw std::invalid_argument("ToneConfig: fcw >= modulus_m");
        if (band < 0 || band >= kNumBands) throw std::invalid_argument("ToneConfig: band out of [0,9]");
    }
};

struct PhaseState {
    std::uint32_t phase = 0;
};

inline PhaseState phase_step(PhaseState state, const ToneConfig& cfg) {
    return {(state.phase + cfg.fcw) % cfg.modulus_m};
}

/// The accumulator word is read as 16 bits; the CORDIC sees the 10 MSBs
/// (a 6-bit right shift). For M = 65520 the dropped low bits make the
/// missing codes 65520..65535 indistinguishable from their 16-bit MSBs.
inline int phase_to_cordic_input(std::uint32_t phase, std::uint32_t modulus_m) {
    (void)modulus_m;
    return static_cast<int>(phase >> 6);
}

/// Streaming single-tone synthesizer. Successive blocks() continue the phase
/// sequence; output is exactly modulus_m-periodic in fixed mode.
template <typename Cpx>
class ToneGenerator;

template <>
class ToneGenerator<CpxI32> {
  public:
    ToneGenerator(const ToneConfig& cfg, int cordic_iterations, SaturationCounter& sat)
        : cfg_(cfg), table_(cordic_table(cordic_iterations, sat)) {
        cfg.validate();
    }

    FxStream block(std::size_t n) {
        FxStream out;
        out.sample_rate = cfg_.sample_rate;
        out.origin_index = produced_;
        out.samples.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            out.samples[k] = table_[phase_to_cordic_input(state_.phase, cfg_.modulus_m)];
            state_ = phase_step(state_, cfg_);
        }
        produced_ += n;
        return out;
    }

  private:
    ToneConfig cfg_;
    std::array<CpxI32, kCordicPhaseCodes> table_;
    PhaseState state_{};
    std::uint64_t produced_ = 0;
};

template <>
class ToneGenerator<CpxF64> {
  public:
    ToneGenerator(const ToneConfig& cfg, int cordic_iterations, SaturationCounter&)
        : cfg_(cfg), table_(cordic_table_f()) {
        (void)cordic_iterations;
        cfg.validate();
    }

    FloatStream block(std::size_t n) {
        FloatStream out;
        out.sample_rate = cfg_.sample_rate;
        out.origin_index = produced_;
        out.samples.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            out.samples[k] = table_[phase_to_cordic_input(state_.phase, cfg_.modulus_m)];
            state_ = phase_step(state_, cfg_);
        }
        produced_ += n;
        return out;
    }

  private:
    ToneConfig cfg_;
    std::array<CpxF64, kCordicPhaseCodes> table_;
    PhaseState state_{};
    std::uint64_t produced_ = 0;
};

FxStream generate_tone(const ToneConfig& cfg, std::size_t n_samples, SaturationCounter& sat,
                       int cordic_iterations = kCordicDefaultIterations);
FloatStream generate_tone_f(const ToneConfig& cfg, std::size_t n_samples,
                            int cordic_iterations = kCordicDefaultIterations);

}  // namespace kidsim
