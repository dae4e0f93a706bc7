// kidsim: command-line front end for the readout-chain simulator.
//
// Subcommands:
//   simulate  closed-loop run (tonegen .. ddc), per-tone spur report, export
//   probe     spectrum of one internal tap (bin alignment + dominant peaks)
//   predict   periodicity algebra and spur-line prediction, no simulation
//   filters   the built-in FIR designs and their responses
//
// Exit codes: 0 success, 2 configuration/usage error, 3 numeric failure.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>
#include <exception>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "kidsim/config.hpp"
#include "kidsim/export.hpp"
#include "kidsim/firdesign.hpp"
#include "kidsim/periodicity.hpp"
#include "kidsim/pipeline.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string backend;
    std::uint32_t modulus = 0;   // 0 = keep config value
    std::string out_dir;
    int workers = 0;             // 0 = keep config value
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "JSON run configuration");
    cmd->add_option("--backend", o.backend, "fixed | float (overrides config)")
        ->check(CLI::IsMember({"fixed", "float"}));
    cmd->add_option("--modulus", o.modulus, "phase accumulator modulus (overrides config)");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--workers", o.workers, "worker threads for per-band stages");
}

kidsim::RunConfig resolve_config(const CommonOpts& o) {
    kidsim::RunConfig cfg;
    if (!o.config_path.empty()) {
        cfg = kidsim::load_run_config(o.config_path);
    } else {
        // Single legacy probe tone in band 6 (the configuration the chain
        // was designed around).
        cfg.bands = {{6, {4000}}};
    }
    if (o.backend == "fixed") cfg.backend = kidsim::Backend::FixedPoint;
    if (o.backend == "float") cfg.backend = kidsim::Backend::FloatingPoint;
    if (o.modulus != 0) cfg.accumulator_modulus = o.modulus;
    if (o.workers != 0) cfg.workers = o.workers;
    cfg.validate();
    return cfg;
}

int cmd_simulate(const CommonOpts& o) {
    const auto cfg = resolve_config(o);
    const auto result = kidsim::run_closed_loop(cfg);
    std::printf("backend=%s modulus=%u tones=%zu ddc_window=%" PRIu64 " duration=%" PRIu64 "\n",
                cfg.backend == kidsim::Backend::FixedPoint ? "fixed" : "float",
                cfg.accumulator_modulus, result.tones.size(), cfg.window(), cfg.duration);
    for (const auto& tr : result.tones) {
        std::printf("tone band=%d fcw=%u f=%.6f MHz\n", tr.tone.band, tr.tone.fcw,
                    tr.tone.frequency() / 1e6);
        if (tr.amp_psd.detected_spurs.empty()) {
            std::printf("  amp spurs: none above 10 dB\n");
        } else {
            for (const auto& s : tr.amp_psd.detected_spurs)
                std::printf("  amp spur: %.3f Hz (+%.1f dB)\n", s.freq_hz, s.prominence_db);
        }
    }
    std::printf("saturation_events=%" PRIu64 " wall=%.2fs\n", result.saturation_count,
                result.wall_seconds);
    if (!o.out_dir.empty()) {
        const auto manifest = kidsim::export_run(result, o.out_dir);
        std::printf("manifest: %s\n", manifest.c_str());
    }
    return 0;
}

int cmd_probe(const CommonOpts& o, const std::string& tap_name, std::size_t n_fft) {
    const auto cfg = resolve_config(o);
    const auto tap = kidsim::tap_from_name(tap_name);
    const auto r = kidsim::run_stage_probe(cfg, tap, n_fft);
    std::printf("tap=%s rate=%.0f n_fft=%zu\n", kidsim::tap_name(r.tap).c_str(), r.sample_rate,
                r.n_fft);
    std::printf("alignment: peak_bin=%zu concentration=%.6f\n", r.alignment.peak_bin,
                r.alignment.concentration);
    for (const auto& p : r.peaks)
        std::printf("peak: %.6f MHz  %.2f dB\n", p.freq_hz / 1e6, p.power_db);
    return 0;
}

int cmd_predict(const CommonOpts& o) {
    const auto cfg = resolve_config(o);
    const auto periods = kidsim::predict_tap_periods(cfg.accumulator_modulus);
    for (const auto& [name, p] : periods)
        std::printf("period %-18s %" PRIu64 "\n", name.c_str(), p);
    const auto lines = kidsim::spur_frequency_prediction(
        cfg.accumulator_modulus, cfg.window(), kidsim::kPhasorTablePeriod,
        kidsim::kInterpFactor, kidsim::kChainRate);
    if (lines.empty())
        std::printf("ddc spur lines: none (averaging windows land on nulls)\n");
    for (double f : lines) std::printf("ddc spur line: %.3f Hz\n", f);
    return 0;
}

int cmd_filters(const CommonOpts& o) {
    struct Entry {
        const char* name;
        std::vector<double> taps;
        kidsim::FirSpec spec;
    };
    const kidsim::FirSpec interp_spec{kidsim::kDacRate, 50e6, 200e6, 85.0, 8.0};
    const kidsim::FirSpec chan_spec{kidsim::kDacRate, 50e6, 75e6, 85.0, 1.0};
    const Entry entries[] = {
        {"interp", kidsim::default_interp_taps(), interp_spec},
        {"channelizer", kidsim::default_channelizer_taps(), chan_spec},
    };
    for (const auto& e : entries) {
        std::printf("%s: %zu taps, passband %.0f MHz, stopband %.0f MHz, gain %.0f\n", e.name,
                    e.taps.size(), e.spec.passband_hz / 1e6, e.spec.stopband_hz / 1e6,
                    e.spec.gain);
        std::printf("  H(passband edge) = %.3f dB, H(stopband edge) = %.1f dB\n",
                    kidsim::fir_response_db(e.taps, e.spec.sample_rate, e.spec.passband_hz) -
                        20.0 * std::log10(e.spec.gain),
                    kidsim::fir_response_db(e.taps, e.spec.sample_rate, e.spec.stopband_hz) -
                        20.0 * std::log10(e.spec.gain));
        if (!o.out_dir.empty()) {
            std::filesystem::create_directories(o.out_dir);
            const std::string path = o.out_dir + "/" + e.name + "_taps.csv";
            std::ofstream f(path);
            f << "index,tap\n";
            for (std::size_t k = 0; k < e.taps.size(); ++k)
                f << k << ',' << e.taps[k] << '\n';
            std::printf("  wrote %s\n", path.c_str());
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MKID readout chain digital twin"};
    app.require_subcommand(1);

    CommonOpts sim_o, probe_o, pred_o, filt_o;
    std::string tap = "ddc";
    std::size_t n_fft = 4096;

    auto* sim = app.add_subcommand("simulate", "closed-loop run with per-tone spur report");
    add_common(sim, sim_o);
    auto* probe = app.add_subcommand("probe", "spectrum of one internal tap");
    add_common(probe, probe_o);
    probe->add_option("--tap", tap,
                      "tonegen|downshift|interp|upshift|channelizer_demod|channelizer_out|ddc");
    probe->add_option("--nfft", n_fft, "DFT length");
    auto* pred = app.add_subcommand("predict", "periodicity algebra, no simulation");
    add_common(pred, pred_o);
    auto* filt = app.add_subcommand("filters", "built-in FIR designs");
    add_common(filt, filt_o);

    try {
        app.parse(argc, argv);
        if (sim->parsed()) return cmd_simulate(sim_o);
        if (probe->parsed()) return cmd_probe(probe_o, tap, n_fft);
        if (pred->parsed()) return cmd_predict(pred_o);
        if (filt->parsed()) return cmd_filters(filt_o);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const kidsim::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
