#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kidsim/spectral.hpp"

using namespace kidsim;

TEST_CASE("dft matches the naive transform") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const std::size_t n = 129;   // deliberately not a power of two
    std::vector<CpxF64> x(n);
    for (auto& v : x) v = {dist(rng), dist(rng)};

    const auto y = dft(x);
    REQUIRE(y.size() == n);
    for (std::size_t k = 0; k < n; ++k) {
        CpxF64 want = 0.0;
        for (std::size_t m = 0; m < n; ++m)
            want += x[m] * std::polar(1.0, -2.0 * std::numbers::pi *
                                               static_cast<double>(k * m) /
                                               static_cast<double>(n));
        CAPTURE(k);
        REQUIRE(std::abs(y[k] - want) < 1e-9);
    }
}

TEST_CASE("dft preserves energy (Parseval)") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<CpxF64> x(1000);
    for (auto& v : x) v = {dist(rng), dist(rng)};
    const auto y = dft(x);
    double ex = 0.0, ey = 0.0;
    for (const auto& v : x) ex += std::norm(v);
    for (const auto& v : y) ey += std::norm(v);
    CHECK(ey / static_cast<double>(x.size()) == doctest::Approx(ex).epsilon(1e-12));
}

TEST_CASE("real input gives a conjugate-symmetric spectrum") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<CpxF64> x(256);
    for (auto& v : x) v = {dist(rng), 0.0};
    const auto y = dft(x);
    for (std::size_t k = 1; k < x.size(); ++k)
        CHECK(std::abs(y[k] - std::conj(y[x.size() - k])) < 1e-9);
}

TEST_CASE("amp/phase noise separates the two modulations") {
    const double rate = 1000.0;
    const double fm = 50.0;
    FloatStream iq;
    iq.sample_rate = rate;
    for (int n = 0; n < 4096; ++n) {
        const double a = 1.0 + 0.01 * std::cos(2.0 * std::numbers::pi * fm * n / rate);
        const double ph = 0.5 + 0.002 * std::sin(2.0 * std::numbers::pi * fm * n / rate);
        iq.samples.push_back(std::polar(a, ph));
    }
    const auto noise = amp_phase_noise(iq);
    REQUIRE(noise.amp_noise.size() == iq.samples.size());
    CHECK(noise.rate == rate);

    double amp_pk = 0.0, ph_pk = 0.0, amp_mean = 0.0, ph_mean = 0.0;
    for (std::size_t n = 0; n < noise.amp_noise.size(); ++n) {
        amp_pk = std::max(amp_pk, std::abs(noise.amp_noise[n]));
        ph_pk = std::max(ph_pk, std::abs(noise.phase_noise[n]));
        amp_mean += noise.amp_noise[n];
        ph_mean += noise.phase_noise[n];
    }
    CHECK(amp_pk == doctest::Approx(0.01).epsilon(1e-3));
    CHECK(ph_pk == doctest::Approx(0.002).epsilon(1e-3));
    CHECK(std::abs(amp_mean / 4096.0) < 1e-9);
    CHECK(std::abs(ph_mean / 4096.0) < 1e-9);
}

TEST_CASE("amp/phase noise names the offending zero-magnitude index") {
    FloatStream iq;
    iq.sample_rate = 1.0;
    iq.samples = {{1.0, 0.0}, {0.0, 0.0}};
    bool threw = false;
    try {
        amp_phase_noise(iq);
    } catch (const std::domain_error& e) {
        threw = true;
        CHECK(std::string(e.what()).find("index 1") != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("Welch PSD of unit white noise sits at the density level 2/rate") {
    std::mt19937 rng(12345);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double rate = 100.0;
    std::vector<double> x(1 << 16);
    for (auto& v : x) v = gauss(rng);

    const auto rep = estimate_psd(x, rate, 256, 0.5);
    REQUIRE(rep.freqs.size() == 129);
    CHECK(rep.bin_width() == doctest::Approx(rate / 256.0));

    // Average the one-sided density over interior bins; expect 2/rate
    // (= -16.99 dB) within a fraction of a dB for this many segments.
    double sum = 0.0;
    int count = 0;
    for (std::size_t k = 2; k + 2 < rep.freqs.size(); ++k) {
        sum += std::pow(10.0, rep.psd_db[k] / 10.0);
        ++count;
    }
    const double level = sum / count;
    CHECK(10.0 * std::log10(level) ==
          doctest::Approx(10.0 * std::log10(2.0 / rate)).epsilon(0.02));
}

TEST_CASE("Welch PSD integrates a sinusoid to its power") {
    const double rate = 1000.0;
    const double f0 = 125.0;   // on-bin for a 256-point segment
    const double amp = 0.3;
    std::vector<double> x(1 << 15);
    for (std::size_t n = 0; n < x.size(); ++n)
        x[n] = amp * std::sin(2.0 * std::numbers::pi * f0 * static_cast<double>(n) / rate);
    const auto rep = estimate_psd(x, rate, 256, 0.5);
    double power = 0.0;
    for (std::size_t k = 0; k < rep.freqs.size(); ++k)
        power += std::pow(10.0, rep.psd_db[k] / 10.0) * rep.bin_width();
    CHECK(power == doctest::Approx(amp * amp / 2.0).epsilon(1e-3));
}

TEST_CASE("bin alignment: exact periodicity concentrates into one bin") {
    const std::size_t n = 1000;
    std::vector<CpxF64> aligned(n), misaligned(n);
    for (std::size_t k = 0; k < n; ++k) {
        aligned[k] = std::polar(1.0, 2.0 * std::numbers::pi * 37.0 * static_cast<double>(k) /
                                         static_cast<double>(n));
        misaligned[k] = std::polar(1.0, 2.0 * std::numbers::pi * 37.5 * static_cast<double>(k) /
                                            static_cast<double>(n));
    }
    const auto a = bin_alignment_metric(aligned, n);
    CHECK(a.peak_bin == 37);
    CHECK(a.concentration > 0.999);
    const auto m = bin_alignment_metric(misaligned, n);
    CHECK(m.concentration < 0.9);
}

TEST_CASE("detect_spurs finds a constructed line and reports its frequency") {
    std::mt19937 rng(777);
    std::normal_distribution<double> gauss(0.0, 0.001);
    const double rate = 1000.0;
    const double f0 = 250.0;
    std::vector<double> x(1 << 15);
    for (std::size_t n = 0; n < x.size(); ++n)
        x[n] = gauss(rng) +
               0.5 * std::sin(2.0 * std::numbers::pi * f0 * static_cast<double>(n) / rate);
    auto rep = estimate_psd(x, rate, 256, 0.5);
    const auto spurs = detect_spurs(rep, 10.0);
    REQUIRE(!spurs.empty());
    CHECK(std::abs(spurs[0].freq_hz - f0) <= rep.bin_width());
    CHECK(spurs[0].prominence_db > 30.0);

    // Pure noise: nothing 10 dB proud of the local median.
    std::vector<double> noise(1 << 15);
    for (auto& v : noise) v = gauss(rng);
    const auto rep2 = estimate_psd(noise, rate, 256, 0.5);
    CHECK(detect_spurs(rep2, 10.0).empty());
}
