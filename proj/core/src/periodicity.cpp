#include "kidsim/periodicity.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kidsim {

PeriodicityReport predict_period(const std::vector<StageDescriptor>& chain) {
    if (chain.empty()) throw std::invalid_argument("predict_period: empty chain");
    PeriodicityReport rep;
    std::uint64_t p = 1;
    for (const auto& st : chain) {
        p = std::visit(
            [p](const auto& s) -> std::uint64_t {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, stage::Accumulator>) return s.modulus;
                else if constexpr (std::is_same_v<T, stage::QuarterRateShift>)
                    return std::lcm(p, std::uint64_t{4});
                else if constexpr (std::is_same_v<T, stage::Interpolate>) return s.factor * p;
                else if constexpr (std::is_same_v<T, stage::PhasorModulate>)
                    return std::lcm(p, s.period);
                else if constexpr (std::is_same_v<T, stage::Decimate>)
                    return p / std::gcd(p, s.factor);
                else
                    return p / std::gcd(p, s.window);
            },
            st);
        rep.per_stage.push_back(p);
    }
    rep.final_period = p;
    return rep;
}

namespace {

template <typename Sample, typename Eq>
PeriodCheck verify_impl(const std::vector<Sample>& x, std::uint64_t period,
                        std::size_t n_periods, Eq eq) {
    if (period == 0 || x.size() < (n_periods + 1) * period)
        throw std::invalid_argument("verify_period: insufficient samples");
    const std::size_t n = n_periods * period;
    for (std::size_t k = 0; k < n; ++k) {
        if (!eq(x[k], x[k + period])) return {false, k};
    }
    return {true, std::nullopt};
}

}  // namespace

PeriodCheck verify_period(const FxStream& stream, std::uint64_t period, std::size_t n_periods) {
    return verify_impl(stream.samples, period, n_periods,
                       [](const CpxI32& a, const CpxI32& b) { return a == b; });
}

PeriodCheck verify_period(const FloatStream& stream, std::uint64_t period, std::size_t n_periods,
                          double rel_tol) {
    double sum2 = 0.0;
    for (const auto& s : stream.samples) sum2 += std::norm(s);
    const double rms =
        stream.samples.empty() ? 0.0 : std::sqrt(sum2 / static_cast<double>(stream.samples.size()));
    const double tol = rel_tol * rms;
    return verify_impl(stream.samples, period, n_periods,
                       [tol](const CpxF64& a, const CpxF64& b) { return std::abs(a - b) <= tol; });
}

std::vector<double> spur_frequency_prediction(std::uint64_t modulus_m, std::uint64_t window_len,
                                              std::uint64_t phasor_period, std::uint64_t interp,
                                              double rate) {
    if (modulus_m == 0 || window_len == 0 || phasor_period == 0 || interp == 0)
        throw std::invalid_argument("spur_frequency_prediction: zero parameter");
    const auto rep = predict_period({stage::Accumulator{modulus_m}, stage::QuarterRateShift{},
                                     stage::Interpolate{interp},
                                     stage::PhasorModulate{phasor_period}});
    const std::uint64_t r = rep.final_period / (interp * modulus_m);
    std::vector<double> lines;
    if (r > 1) {
        const double base = rate / static_cast<double>(window_len) / static_cast<double>(r);
        for (int k = 1; k <= 2; ++k) lines.push_back(k * base);
    }
    return lines;
}

}  // namespace kidsim
