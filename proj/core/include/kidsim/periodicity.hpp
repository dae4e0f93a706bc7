#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "kidsim/stream.hpp"

namespace kidsim {

// Chain stages as they affect time-domain periodicity, exact integers only.
namespace stage {
struct Accumulator { std::uint64_t modulus; };
struct QuarterRateShift {};
struct Interpolate { std::uint64_t factor; };
struct PhasorModulate { std::uint64_t period; };
struct Decimate { std::uint64_t factor; };
struct BoxcarDecimate { std::uint64_t window; };
}  // namespace stage

using StageDescriptor =
    std::variant<stage::Accumulator, stage::QuarterRateShift, stage::Interpolate,
                 stage::PhasorModulate, stage::Decimate, stage::BoxcarDecimate>;

struct PeriodicityReport {
    // Predicted period after each stage, in samples at that stage's own rate.
    std::vector<std::uint64_t> per_stage;
    std::uint64_t final_period = 0;
};

/// Folds the per-stage periodicity rules left to right:
///   Accumulator(M) -> M              QuarterRateShift -> lcm(p, 4)
///   Interpolate(L) -> L * p          PhasorModulate(P) -> lcm(p, P)
///   Decimate(D)    -> p / gcd(p, D)  BoxcarDecimate(L) -> p / gcd(p, L)
PeriodicityReport predict_period(const std::vector<StageDescriptor>& chain);

struct PeriodCheck {
    bool verified = false;
    std::optional<std::size_t> first_mismatch;
};

/// Bit-exact sample-wise comparison of n_periods consecutive period-length
/// segments against the first one.
PeriodCheck verify_period(const FxStream& stream, std::uint64_t period, std::size_t n_periods);

/// Float-mode variant; tolerance is relative to the stream RMS.
PeriodCheck verify_period(const FloatStream& stream, std::uint64_t period, std::size_t n_periods,
                          double rel_tol = 1e-9);

/// Predicted DDC-output spur lines for a tone with accumulator modulus M.
/// r is the ratio of the up-shifted stream's true period to interp*M; when
/// r > 1 the averaging nulls miss and lines appear at k*(rate/window_len)/r.
std::vector<double> spur_frequency_prediction(std::uint64_t modulus_m, std::uint64_t window_len,
                                              std::uint64_t phasor_period, std::uint64_t interp,
                                              double rate);

}  // namespace kidsim
