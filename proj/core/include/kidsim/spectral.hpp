#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "kidsim/stream.hpp"

namespace kidsim {

inline constexpr double kPsdFloorDb = -400.0;

struct Spur {
    double freq_hz = 0.0;
    double prominence_db = 0.0;
};

struct SpectrumReport {
    std::vector<double> freqs;
    std::vector<double> psd_db;     // dBc/Hz for noise streams
    double sample_rate = 0.0;
    std::size_t n_points = 0;       // Welch segment length
    std::vector<Spur> detected_spurs;

    double bin_width() const { return freqs.size() > 1 ? freqs[1] - freqs[0] : 0.0; }
};

struct NoiseStreams {
    std::vector<double> amp_noise;    // mean-removed, mean-normalized
    std::vector<double> phase_noise;  // radians, unwrapped, mean-removed
    double rate = 0.0;
};

/// Forward DFT (complex in, complex out). Arbitrary lengths.
std::vector<CpxF64> dft(const std::vector<CpxF64>& x);

/// Amplitude/phase noise extraction: a = sqrt(I^2+Q^2), phi = unwrapped
/// atan2(Q, I); amp_noise = (a - mean)/mean, phase_noise = phi - mean.
/// Throws (naming the index) on a zero-magnitude sample.
NoiseStreams amp_phase_noise(const FloatStream& iq);

/// Welch averaged periodogram: Hann window, one-sided, density-normalized
/// (unit-variance white noise reads 2/rate per Hz above DC). Deterministic.
SpectrumReport estimate_psd(const std::vector<double>& x, double rate, std::size_t seg_len,
                            double overlap);

struct BinAlignment {
    std::size_t peak_bin = 0;
    double concentration = 0.0;   // peak-bin power / power in peak +- 10 bins
};

/// Takes the first n_fft samples of x. Near 1.0 when x is exactly
/// n_fft-periodic; drops when the dominant line straddles bins.
BinAlignment bin_alignment_metric(const std::vector<CpxF64>& x, std::size_t n_fft);

/// Local maxima standing at least min_prominence_db above the sliding median
/// floor (window excludes the peak neighborhood). Sorted by prominence,
/// descending. DC and the first couple of bins are skipped.
std::vector<Spur> detect_spurs(const SpectrumReport& report, double min_prominence_db);

}  // namespace kidsim
