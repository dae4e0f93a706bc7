#include <doctest.h>

#include "kidsim/tonegen.hpp"

using namespace kidsim;

TEST_CASE("phase accumulator wraps modulo M") {
    ToneConfig legacy{16, 65536, 0, kChainRate};
    CHECK(phase_step({65520}, legacy).phase == 0);
    CHECK(phase_step({65530}, legacy).phase == 10);

    ToneConfig mitigated{16, 65520, 0, kChainRate};
    CHECK(phase_step({65512}, mitigated).phase == 8);   // non-power-of-two wrap
    CHECK(phase_step({0}, mitigated).phase == 16);
}

TEST_CASE("CORDIC input is the 10 MSBs of the 16-bit phase word") {
    // Phases 65520..65535 (legal only under M = 2^16) collapse onto the same
    // codes as their 16-bit MSBs; the dropped low bits hide the difference
    // between the two moduli at the waveform level.
    for (std::uint32_t p = 65520; p <= 65535; ++p)
        CHECK(phase_to_cordic_input(p, 65536) == static_cast<int>((p & 0xFFFFu) >> 6));
    CHECK(phase_to_cordic_input(0, 65536) == 0);
    CHECK(phase_to_cordic_input(63, 65536) == 0);
    CHECK(phase_to_cordic_input(64, 65536) == 1);
}

TEST_CASE("tone frequency law f = Fs * FCW / M") {
    ToneConfig legacy{4000, 65536, 6, kChainRate};
    CHECK(legacy.frequency() == doctest::Approx(15258789.0625).epsilon(1e-12));
    ToneConfig mitigated{4000, 65520, 6, kChainRate};
    CHECK(mitigated.frequency() == doctest::Approx(15262515.2625).epsilon(1e-9));
}

TEST_CASE("validate rejects bad tone parameters") {
    SaturationCounter sat;
    CHECK_THROWS(generate_tone({65536, 65536, 0, kChainRate}, 4, sat));   // fcw >= M
    CHECK_THROWS(generate_tone({0, 0, 0, kChainRate}, 4, sat));           // M = 0
    CHECK_THROWS(generate_tone({0, 70000, 0, kChainRate}, 4, sat));       // M > 2^16
    CHECK_THROWS(generate_tone({0, 65536, 10, kChainRate}, 4, sat));      // band out of range
    CHECK_THROWS(generate_tone({0, 65536, 0, kChainRate}, 0, sat));       // empty request
}

TEST_CASE("fcw = 0 produces DC at the zero-phase CORDIC output") {
    SaturationCounter sat;
    const auto s = generate_tone({0, 65536, 0, kChainRate}, 100, sat);
    for (const auto& v : s.samples) CHECK(v == s.samples[0]);
}

TEST_CASE("fixed tone is exactly M-periodic") {
    SaturationCounter sat;
    const ToneConfig cfg{4001, 65536, 6, kChainRate};   // odd fcw: full-length cycle
    const auto s = generate_tone(cfg, 2 * 65536 + 64, sat);
    for (std::size_t n = 0; n + 65536 < s.samples.size(); ++n)
        REQUIRE(s.samples[n] == s.samples[n + 65536]);
}

TEST_CASE("streaming blocks are independent of chunking") {
    SaturationCounter sat;
    const ToneConfig cfg{4000, 65520, 6, kChainRate};

    ToneGenerator<CpxI32> chunked(cfg, kCordicDefaultIterations, sat);
    ToneGenerator<CpxI32> whole(cfg, kCordicDefaultIterations, sat);
    auto a = chunked.block(7);
    const auto b = chunked.block(13);
    const auto all = whole.block(20);
    a.samples.insert(a.samples.end(), b.samples.begin(), b.samples.end());
    CHECK(a.samples == all.samples);
    CHECK(b.origin_index == 7);

    ToneGenerator<CpxF64> fchunked(cfg, kCordicDefaultIterations, sat);
    ToneGenerator<CpxF64> fwhole(cfg, kCordicDefaultIterations, sat);
    auto fa = fchunked.block(7);
    const auto fb = fchunked.block(13);
    const auto fall = fwhole.block(20);
    fa.samples.insert(fa.samples.end(), fb.samples.begin(), fb.samples.end());
    CHECK(fa.samples == fall.samples);
}

TEST_CASE("both backends sample the same quantized phase sequence") {
    SaturationCounter sat;
    const ToneConfig cfg{4000, 65536, 6, kChainRate};
    const auto fx = generate_tone(cfg, 4096, sat);
    const auto fl = generate_tone_f(cfg, 4096);
    for (std::size_t n = 0; n < fx.samples.size(); ++n) {
        // Same 10-bit phase feeds both; they agree to CORDIC precision.
        REQUIRE(std::abs(fx.samples[n].i / 32768.0 - fl.samples[n].real()) < 2e-4);
        REQUIRE(std::abs(fx.samples[n].q / 32768.0 - fl.samples[n].imag()) < 2e-4);
    }
}
