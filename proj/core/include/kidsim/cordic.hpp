#pragma once

#include <array>
#include <cstdint>

#include "kidsim/fixed.hpp"
#include "kidsim/stream.hpp"

namespace kidsim {

inline constexpr int kCordicPhaseBits = 10;
inline constexpr int kCordicPhaseCodes = 1 << kCordicPhaseBits;
inline constexpr int kCordicDefaultIterations = 14;

/// Rotation-mode CORDIC: (cos th, sin th) for th = 2*pi*phase10/1024, as
/// Q1.15. Gain is pre-compensated in the start vector; the phase code is
/// folded into the first quadrant with a sign fix-up afterwards.
CpxI32 cordic_sincos(int phase10, int iterations, SaturationCounter& sat);

/// Float backend: library sin/cos of the identically quantized angle, so the
/// two backends share the same 10-bit phase truncation.
CpxF64 cordic_sincos_f(int phase10);

/// All 1024 codes precomputed; generate_tone indexes this, which is
/// value-identical to calling the converter per sample.
std::array<CpxI32, kCordicPhaseCodes> cordic_table(int iterations, SaturationCounter& sat);
std::array<CpxF64, kCordicPhaseCodes> cordic_table_f();

}  // namespace kidsim
