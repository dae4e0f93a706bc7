#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kidsim/cordic.hpp"

using namespace kidsim;

TEST_CASE("fixed CORDIC tracks sin/cos over all 1024 phase codes") {
    SaturationCounter sat;
    // Frozen bound: 14 iterations land every code within 4 LSB of the ideal
    // 32768-scaled sinusoid (measured worst case 3.91).
    for (int p = 0; p < kCordicPhaseCodes; ++p) {
        const double th = 2.0 * std::numbers::pi * p / kCordicPhaseCodes;
        const CpxI32 c = cordic_sincos(p, kCordicDefaultIterations, sat);
        CAPTURE(p);
        REQUIRE(std::abs(c.i - 32768.0 * std::cos(th)) <= 4.0);
        REQUIRE(std::abs(c.q - 32768.0 * std::sin(th)) <= 4.0);
        const double mag = std::hypot(static_cast<double>(c.i), static_cast<double>(c.q));
        REQUIRE(mag >= 32766.0);
        REQUIRE(mag <= 32769.0);
    }
}

TEST_CASE("cardinal phase codes are exact") {
    SaturationCounter sat;
    const CpxI32 e = cordic_sincos(0, kCordicDefaultIterations, sat);
    CHECK(e.i >= 32766);
    CHECK(std::abs(e.q) <= 2);
    const CpxI32 q1 = cordic_sincos(256, kCordicDefaultIterations, sat);   // pi/2
    CHECK(std::abs(q1.i) <= 2);
    CHECK(q1.q >= 32766);
    const CpxI32 q2 = cordic_sincos(512, kCordicDefaultIterations, sat);   // pi
    CHECK(q2.i <= -32766);
    CHECK(std::abs(q2.q) <= 2);
}

TEST_CASE("more iterations never reduce accuracy at the reference codes") {
    SaturationCounter sat;
    // Not monotone per code, but the worst case over the sweep must shrink.
    double worst8 = 0.0, worst14 = 0.0;
    for (int p = 0; p < kCordicPhaseCodes; ++p) {
        const double th = 2.0 * std::numbers::pi * p / kCordicPhaseCodes;
        const CpxI32 a = cordic_sincos(p, 8, sat);
        const CpxI32 b = cordic_sincos(p, 14, sat);
        worst8 = std::max(worst8, std::abs(a.i - 32768.0 * std::cos(th)));
        worst14 = std::max(worst14, std::abs(b.i - 32768.0 * std::cos(th)));
    }
    CHECK(worst14 < worst8);
}

TEST_CASE("table lookup is value-identical to per-sample conversion") {
    SaturationCounter sat;
    const auto table = cordic_table(kCordicDefaultIterations, sat);
    SaturationCounter sat2;
    for (int p = 0; p < kCordicPhaseCodes; ++p)
        REQUIRE(table[static_cast<std::size_t>(p)] ==
                cordic_sincos(p, kCordicDefaultIterations, sat2));
}

TEST_CASE("float backend applies the identical 10-bit phase quantization") {
    const auto table = cordic_table_f();
    for (int p = 0; p < kCordicPhaseCodes; ++p) {
        const double th = 2.0 * std::numbers::pi * p / kCordicPhaseCodes;
        REQUIRE(table[static_cast<std::size_t>(p)].real() == std::cos(th));
        REQUIRE(table[static_cast<std::size_t>(p)].imag() == std::sin(th));
        REQUIRE(cordic_sincos_f(p) == table[static_cast<std::size_t>(p)]);
    }
}
