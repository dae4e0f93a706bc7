#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kidsim/excitation.hpp"
#include "kidsim/stream.hpp"

namespace kidsim {

/// Configuration problems carry the offending field name; the CLI maps this
/// to exit code 2.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct BandConfig {
    int band = 0;
    std::vector<std::uint32_t> fcws;
};

struct PsdParams {
    std::size_t segment_length = 64;
    double overlap = 0.5;
};

struct RunConfig {
    Backend backend = Backend::FixedPoint;
    std::uint32_t accumulator_modulus = 65536;
    std::uint64_t ddc_window = 0;        // 0 = follow accumulator_modulus
    std::vector<BandConfig> bands;
    std::uint64_t duration = 256;        // DDC output samples per tone, after settling
    std::uint64_t settle_skip = 2;       // leading DDC samples excluded from analysis
    Component loopback_component = Component::I;
    PsdParams psd;
    std::uint64_t seed = 1;
    int workers = 1;
    int cordic_iterations = 14;
    std::uint64_t block_len = 16384;     // streaming block size at 250 MHz

    void validate() const;
    std::size_t total_tones() const;

    /// Effective DDC accumulation length. The mitigated chain moves the
    /// window together with the modulus (M = window_len), so by default the
    /// window tracks accumulator_modulus.
    std::uint64_t window() const {
        return ddc_window != 0 ? ddc_window : accumulator_modulus;
    }
};

/// Parse the JSON run configuration. Unknown keys are rejected.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);
std::string run_config_to_json(const RunConfig& cfg);

}  // namespace kidsim
