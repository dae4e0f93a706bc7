#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kidsim/analysis.hpp"
#include "kidsim/config.hpp"
#include "kidsim/periodicity.hpp"
#include "kidsim/spectral.hpp"
#include "kidsim/stream.hpp"
#include "kidsim/tonegen.hpp"

namespace kidsim {

enum class Tap {
    ToneGen,
    Downshift,
    Interp,
    Upshift,
    ChannelizerDemod,
    ChannelizerOut,
    Ddc,
};

Tap tap_from_name(const std::string& name);
std::string tap_name(Tap tap);
double tap_rate(Tap tap, std::uint64_t ddc_window);

/// Predicted periodicity (in samples at the tap's own rate) of every chain
/// tap for a given accumulator modulus.
std::vector<std::pair<std::string, std::uint64_t>> predict_tap_periods(std::uint32_t modulus_m);

struct ToneResult {
    ToneConfig tone;
    FloatStream ddc_iq;         // analysis portion (settle samples dropped)
    NoiseStreams noise;
    SpectrumReport amp_psd;
    SpectrumReport phase_psd;
};

struct RunResult {
    std::vector<ToneResult> tones;
    std::vector<std::pair<std::string, std::uint64_t>> tap_periods;
    std::uint64_t saturation_count = 0;
    RunConfig config;
    double wall_seconds = 0.0;
};

/// Full closed loop: tonegen -> downshift -> interpolate -> band upshift ->
/// combine -> realize -> channelize -> ddc -> noise/PSD analysis, processed
/// in blocks so memory stays bounded.
RunResult run_closed_loop(const RunConfig& cfg);

/// Capture `count` samples of one internal tap (first configured band/tone),
/// after dropping `skip` samples of filter settling. Runs only the stages the
/// tap depends on. Fixed capture is bit-exact; Ddc is not capturable here
/// (its output lives in RunResult).
FxStream capture_tap_fx(const RunConfig& cfg, Tap tap, std::size_t count, std::size_t skip);
FloatStream capture_tap_f(const RunConfig& cfg, Tap tap, std::size_t count, std::size_t skip);
/// Backend dispatch; fixed samples widened to doubles.
FloatStream capture_tap(const RunConfig& cfg, Tap tap, std::size_t count, std::size_t skip);

struct ProbePeak {
    double freq_hz = 0.0;    // signed (negative = upper half of the DFT)
    double power_db = 0.0;   // relative to total capture power
};

struct ProbeResult {
    Tap tap = Tap::ToneGen;
    double sample_rate = 0.0;
    std::size_t n_fft = 0;
    BinAlignment alignment;
    std::vector<ProbePeak> peaks;   // strongest first
};

inline constexpr std::size_t kDefaultProbeSkip = 8192;

/// Stage spectrum probe: n_fft-point DFT of the captured tap, the
/// bin-alignment metric, and the dominant spectral peaks.
ProbeResult run_stage_probe(const RunConfig& cfg, Tap tap, std::size_t n_fft,
                            std::size_t skip = kDefaultProbeSkip);

}  // namespace kidsim
