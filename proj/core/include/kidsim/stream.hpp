#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace kidsim {

enum class Backend { FixedPoint, FloatingPoint };

/// Complex Q1.15 pipeline sample. Raw integers; the layout is implied by the
/// stage contract (kSampleWidth/kSampleFrac).
struct CpxI32 {
    std::int32_t i = 0;
    std::int32_t q = 0;
    bool operator==(const CpxI32&) const = default;
};

using CpxF64 = std::complex<double>;

/// Rate-annotated sample sequence, the inter-stage currency.
/// origin_index is the global timeline index n of samples[0], at this
/// stream's own rate; modulating stages index their phasors by it so results
/// do not depend on block boundaries.
template <typename Sample>
struct IqStream {
    std::vector<Sample> samples;
    double sample_rate = 0.0;
    std::uint64_t origin_index = 0;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

using FxStream = IqStream<CpxI32>;
using FloatStream = IqStream<CpxF64>;

inline double to_double_i(const CpxI32& s) { return s.i / 32768.0; }
inline double to_double_q(const CpxI32& s) { return s.q / 32768.0; }

/// Widen a fixed stream to doubles (for spectral analysis and export).
inline FloatStream widen(const FxStream& s) {
    FloatStream out;
    out.sample_rate = s.sample_rate;
    out.origin_index = s.origin_index;
    out.samples.reserve(s.samples.size());
    for (const auto& x : s.samples) out.samples.emplace_back(to_double_i(x), to_double_q(x));
    return out;
}

}  // namespace kidsim
