#include "kidsim/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace kidsim {

namespace {

std::mutex g_fftw_plan_mutex;   // FFTW planning is not thread-safe

}  // namespace

std::vector<CpxF64> dft(const std::vector<CpxF64>& x) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    std::vector<CpxF64> out(n);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
        plan = fftw_plan_dft_1d(
            static_cast<int>(n),
            reinterpret_cast<fftw_complex*>(const_cast<CpxF64*>(x.data())),
            reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
            FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
        fftw_destroy_plan(plan);
    }
    return out;
}

NoiseStreams amp_phase_noise(const FloatStream& iq) {
    if (iq.empty()) throw std::invalid_argument("amp_phase_noise: empty stream");
    const std::size_t n = iq.samples.size();
    NoiseStreams out;
    out.rate = iq.sample_rate;
    out.amp_noise.resize(n);
    out.phase_noise.resize(n);

    double amp_sum = 0.0;
    double prev_phi = 0.0, wrap = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double i = iq.samples[k].real();
        const double q = iq.samples[k].imag();
        const double a = std::hypot(i, q);
        if (a == 0.0)
            throw std::domain_error("amp_phase_noise: zero-magnitude sample at index " +
                                    std::to_string(k));
        out.amp_noise[k] = a;
        amp_sum += a;
        double phi = std::atan2(q, i);
        if (k > 0) {
            double d = phi - prev_phi;
            if (d > std::numbers::pi) wrap -= 2.0 * std::numbers::pi;
            else if (d < -std::numbers::pi) wrap += 2.0 * std::numbers::pi;
        }
        prev_phi = phi;
        out.phase_noise[k] = phi + wrap;
    }
    const double amp_mean = amp_sum / static_cast<double>(n);
    double phi_mean = 0.0;
    for (double p : out.phase_noise) phi_mean += p;
    phi_mean /= static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.amp_noise[k] = (out.amp_noise[k] - amp_mean) / amp_mean;
        out.phase_noise[k] -= phi_mean;
    }
    return out;
}

SpectrumReport estimate_psd(const std::vector<double>& x, double rate, std::size_t seg_len,
                            double overlap) {
    if (seg_len < 4 || seg_len > x.size())
        throw std::invalid_argument("estimate_psd: degenerate seg_len");
    if (overlap < 0.0 || overlap >= 1.0)
        throw std::invalid_argument("estimate_psd: overlap out of [0,1)");

    std::vector<double> win(seg_len);
    double w2 = 0.0;
    for (std::size_t k = 0; k < seg_len; ++k) {
        win[k] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                      static_cast<double>(seg_len));
        w2 += win[k] * win[k];
    }

    const std::size_t hop =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(
                                     static_cast<double>(seg_len) * (1.0 - overlap))));
    const std::size_t n_bins = seg_len / 2 + 1;
    std::vector<double> acc(n_bins, 0.0);
    std::size_t n_segments = 0;

    std::vector<CpxF64> seg(seg_len);
    for (std::size_t start = 0; start + seg_len <= x.size(); start += hop) {
        for (std::size_t k = 0; k < seg_len; ++k) seg[k] = {x[start + k] * win[k], 0.0};
        const auto spec = dft(seg);
        for (std::size_t k = 0; k < n_bins; ++k) acc[k] += std::norm(spec[k]);
        ++n_segments;
    }

    SpectrumReport rep;
    rep.sample_rate = rate;
    rep.n_points = seg_len;
    rep.freqs.resize(n_bins);
    rep.psd_db.resize(n_bins);
    const double norm = 1.0 / (static_cast<double>(n_segments) * rate * w2);
    for (std::size_t k = 0; k < n_bins; ++k) {
        rep.freqs[k] = static_cast<double>(k) * rate / static_cast<double>(seg_len);
        double p = acc[k] * norm;
        if (k != 0 && !(seg_len % 2 == 0 && k == n_bins - 1)) p *= 2.0;  // one-sided
        rep.psd_db[k] = p > 0.0 ? std::max(10.0 * std::log10(p), kPsdFloorDb) : kPsdFloorDb;
    }
    return rep;
}

BinAlignment bin_alignment_metric(const std::vector<CpxF64>& x, std::size_t n_fft) {
    if (x.size() < n_fft || n_fft == 0)
        throw std::invalid_argument("bin_alignment_metric: sequence shorter than n_fft");
    std::vector<CpxF64> head(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n_fft));
    const auto spec = dft(head);

    BinAlignment r;
    double peak = -1.0;
    for (std::size_t k = 0; k < n_fft; ++k) {
        const double p = std::norm(spec[k]);
        if (p > peak) {
            peak = p;
            r.peak_bin = k;
        }
    }
    double window_power = 0.0;
    for (int d = -10; d <= 10; ++d) {
        const std::size_t k =
            static_cast<std::size_t>((static_cast<std::int64_t>(r.peak_bin) + d +
                                      static_cast<std::int64_t>(n_fft)) %
                                     static_cast<std::int64_t>(n_fft));
        window_power += std::norm(spec[k]);
    }
    r.concentration = window_power > 0.0 ? peak / window_power : 0.0;
    return r;
}

std::vector<Spur> detect_spurs(const SpectrumReport& report, double min_prominence_db) {
    const auto& psd = report.psd_db;
    const std::size_t n = psd.size();
    std::vector<Spur> spurs;
    if (n < 8) return spurs;

    constexpr std::size_t kSkipDc = 2;      // DC and its Hann skirt
    constexpr int kHalfWindow = 12;
    constexpr int kGuard = 2;

    for (std::size_t k = kSkipDc; k + 1 < n; ++k) {
        if (psd[k] < psd[k - 1] || psd[k] < psd[k + 1]) continue;
        // Median of the surrounding floor, peak neighborhood excluded.
        std::vector<double> floor_bins;
        for (int d = -kHalfWindow; d <= kHalfWindow; ++d) {
            if (std::abs(d) <= kGuard) continue;
            const std::int64_t j = static_cast<std::int64_t>(k) + d;
            if (j < static_cast<std::int64_t>(kSkipDc) || j >= static_cast<std::int64_t>(n))
                continue;
            floor_bins.push_back(psd[static_cast<std::size_t>(j)]);
        }
        if (floor_bins.empty()) continue;
        std::nth_element(floor_bins.begin(), floor_bins.begin() + floor_bins.size() / 2,
                         floor_bins.end());
        const double median = floor_bins[floor_bins.size() / 2];
        const double prom = psd[k] - median;
        if (prom >= min_prominence_db) spurs.push_back({report.freqs[k], prom});
    }
    std::sort(spurs.begin(), spurs.end(),
              [](const Spur& a, const Spur& b) { return a.prominence_db > b.prominence_db; });
    return spurs;
}

}  // namespace kidsim
