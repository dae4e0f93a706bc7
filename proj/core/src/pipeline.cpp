#include "kidsim/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <thread>

#include "kidsim/excitation.hpp"

namespace kidsim {

namespace {

enum class Depth : int {
    ToneGen = 0,
    Downshift,
    Interp,
    Upshift,
    Realize,
    Channelizer,
    Ddc,
};

Depth tap_depth(Tap tap) {
    switch (tap) {
        case Tap::ToneGen: return Depth::ToneGen;
        case Tap::Downshift: return Depth::Downshift;
        case Tap::Interp: return Depth::Interp;
        case Tap::Upshift: return Depth::Upshift;
        case Tap::ChannelizerDemod:
        case Tap::ChannelizerOut: return Depth::Channelizer;
        case Tap::Ddc: return Depth::Ddc;
    }
    throw std::logic_error("tap_depth: bad tap");
}

bool at_least(Depth d, Depth min) { return static_cast<int>(d) >= static_cast<int>(min); }

int ceil_log2(std::size_t n) {
    int s = 0;
    while ((std::size_t{1} << s) < n) ++s;
    return s;
}

template <typename F>
void parallel_for(std::size_t n, int workers, F&& fn) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    std::vector<std::thread> threads;
    threads.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        threads.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : threads) th.join();
}

template <typename Sample>
struct Collector {
    bool active = false;
    std::size_t skip = 0;
    std::size_t count = 0;
    std::vector<Sample> buf;
    double rate = 0.0;

    bool full() const { return !active || buf.size() >= count; }

    void feed(const IqStream<Sample>& block) {
        if (full()) return;
        rate = block.sample_rate;
        for (const auto& s : block.samples) {
            if (skip > 0) {
                --skip;
                continue;
            }
            if (buf.size() >= count) break;
            buf.push_back(s);
        }
    }
};

template <typename Sample>
struct BandState {
    BandConfig cfg;
    std::vector<ToneGenerator<Sample>> gens;
    std::optional<Interpolator<Sample>> interp;
    BandPhasorTable<Sample> uptable;
    std::optional<Channelizer<Sample>> chan;
    std::vector<Ddc<Sample>> ddcs;
    std::vector<FloatStream> ddc_out;   // accumulated per tone
    SaturationCounter sat;

    // per-block scratch, reused across phases
    std::vector<IqStream<Sample>> tone_blocks;
    IqStream<Sample> shifted;
};

template <typename Sample>
class ChainRunner {
  public:
    ChainRunner(const RunConfig& cfg, Depth depth) : cfg_(cfg), depth_(depth) {
        cfg.validate();
        const auto interp_taps = default_interp_taps();
        const auto chan_taps = default_channelizer_taps();
        for (const auto& bc : cfg.bands) {
            BandState<Sample> b;
            b.cfg = bc;
            for (auto fcw : bc.fcws) {
                ToneConfig tc{fcw, cfg.accumulator_modulus, bc.band, kChainRate};
                b.gens.emplace_back(tc, cfg.cordic_iterations, b.sat);
            }
            if (at_least(depth, Depth::Interp)) b.interp.emplace(interp_taps, b.sat);
            if (at_least(depth, Depth::Upshift))
                b.uptable = BandPhasorTable<Sample>::make(bc.band, false, b.sat);
            if (at_least(depth, Depth::Channelizer))
                b.chan.emplace(bc.band, chan_taps, b.sat);
            if (at_least(depth, Depth::Ddc)) {
                for (std::size_t t = 0; t < bc.fcws.size(); ++t) {
                    b.ddcs.emplace_back(DdcConfig{cfg.window(), kChainRate});
                    FloatStream fs;
                    fs.sample_rate = kChainRate / static_cast<double>(cfg.window());
                    b.ddc_out.push_back(fs);
                }
            }
            bands_.push_back(std::move(b));
        }
        tone_shift_ = 0;
        for (const auto& b : bands_)
            tone_shift_ = std::max(tone_shift_, b.cfg.fcws.size() > 1
                                                    ? ceil_log2(b.cfg.fcws.size())
                                                    : 0);
        band_shift_ = bands_.size() > 1 ? ceil_log2(bands_.size()) : 0;
    }

    Collector<Sample>& collector() { return collector_; }
    Collector<CpxF64>& ddc_collector() { return ddc_collector_; }
    void set_tap(Tap tap) { tap_ = tap; }

    void run_block(std::size_t n) {
        // Phase 1: per-band excitation (independent across bands).
        parallel_for(bands_.size(), cfg_.workers, [&](std::size_t bi) {
            auto& b = bands_[bi];
            b.tone_blocks.clear();
            for (auto& g : b.gens) b.tone_blocks.push_back(g.block(n));
            if (bi == 0 && tap_ == Tap::ToneGen) collector_.feed(b.tone_blocks[0]);
            if (!at_least(depth_, Depth::Downshift)) return;
            auto sum = combine(b.tone_blocks, tone_shift_, b.sat);
            auto centered = downshift_quarter_rate(sum, b.sat);
            if (bi == 0 && tap_ == Tap::Downshift) collector_.feed(centered);
            if (!at_least(depth_, Depth::Interp)) return;
            auto up = b.interp->push(centered);
            if (bi == 0 && tap_ == Tap::Interp) collector_.feed(up);
            if (!at_least(depth_, Depth::Upshift)) return;
            b.shifted = band_upshift(up, b.uptable, b.sat);
            if (bi == 0 && tap_ == Tap::Upshift) collector_.feed(b.shifted);
        });
        if (!at_least(depth_, Depth::Realize)) return;

        // Phase 2: combine all subbands and realize the loop-back component.
        std::vector<IqStream<Sample>> shifted;
        shifted.reserve(bands_.size());
        for (auto& b : bands_) shifted.push_back(std::move(b.shifted));
        SaturationCounter comb_sat;
        auto wideband = combine(shifted, band_shift_, comb_sat);
        comb_sat_total_ += comb_sat.count;
        auto real_block = realize(wideband, cfg_.loopback_component);

        if (!at_least(depth_, Depth::Channelizer)) return;

        // Phase 3: per-band analysis (independent across bands).
        parallel_for(bands_.size(), cfg_.workers, [&](std::size_t bi) {
            auto& b = bands_[bi];
            const bool keep_demod = bi == 0 && tap_ == Tap::ChannelizerDemod;
            auto blocks = b.chan->push(real_block, keep_demod);
            if (keep_demod) collector_.feed(blocks.demod);
            if (bi == 0 && tap_ == Tap::ChannelizerOut) collector_.feed(blocks.out);
            if (!at_least(depth_, Depth::Ddc)) return;
            for (std::size_t t = 0; t < b.ddcs.size(); ++t) {
                auto out = b.ddcs[t].push(blocks.out, b.tone_blocks[t]);
                if (bi == 0 && t == 0) ddc_collector_.feed(out);
                auto& acc = b.ddc_out[t];
                acc.samples.insert(acc.samples.end(), out.samples.begin(), out.samples.end());
            }
        });
    }

    std::uint64_t saturation_total() const {
        std::uint64_t s = comb_sat_total_;
        for (const auto& b : bands_) s += b.sat.count;
        return s;
    }

    std::vector<BandState<Sample>>& bands() { return bands_; }

  private:
    RunConfig cfg_;
    Depth depth_;
    std::vector<BandState<Sample>> bands_;
    Collector<Sample> collector_;
    Collector<CpxF64> ddc_collector_;
    Tap tap_ = Tap::Ddc;
    int tone_shift_ = 0;
    int band_shift_ = 0;
    std::uint64_t comb_sat_total_ = 0;
};

template <typename Sample>
RunResult run_closed_loop_impl(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    ChainRunner<Sample> runner(cfg, Depth::Ddc);
    runner.set_tap(Tap::Ddc);
    runner.ddc_collector().active = false;

    const std::uint64_t total =
        (cfg.duration + cfg.settle_skip) * cfg.window();   // samples at 250 MHz
    std::uint64_t done = 0;
    while (done < total) {
        const std::size_t n =
            static_cast<std::size_t>(std::min<std::uint64_t>(cfg.block_len, total - done));
        runner.run_block(n);
        done += n;
    }

    RunResult result;
    result.config = cfg;
    result.tap_periods = predict_tap_periods(cfg.accumulator_modulus);
    result.saturation_count = runner.saturation_total();

    for (auto& b : runner.bands()) {
        for (std::size_t t = 0; t < b.cfg.fcws.size(); ++t) {
            ToneResult tr;
            tr.tone = ToneConfig{b.cfg.fcws[t], cfg.accumulator_modulus, b.cfg.band, kChainRate};
            const auto& full = b.ddc_out[t];
            tr.ddc_iq.sample_rate = full.sample_rate;
            tr.ddc_iq.origin_index = cfg.settle_skip;
            tr.ddc_iq.samples.assign(
                full.samples.begin() + static_cast<std::ptrdiff_t>(cfg.settle_skip),
                full.samples.end());
            tr.noise = amp_phase_noise(tr.ddc_iq);
            tr.amp_psd = estimate_psd(tr.noise.amp_noise, tr.noise.rate, cfg.psd.segment_length,
                                      cfg.psd.overlap);
            tr.amp_psd.detected_spurs = detect_spurs(tr.amp_psd, 10.0);
            tr.phase_psd = estimate_psd(tr.noise.phase_noise, tr.noise.rate,
                                        cfg.psd.segment_length, cfg.psd.overlap);
            tr.phase_psd.detected_spurs = detect_spurs(tr.phase_psd, 10.0);
            result.tones.push_back(std::move(tr));
        }
    }
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

template <typename Sample>
std::pair<std::vector<Sample>, double> capture_impl(const RunConfig& cfg, Tap tap,
                                                    std::size_t count, std::size_t skip) {
    ChainRunner<Sample> runner(cfg, tap_depth(tap));
    runner.set_tap(tap);
    auto& col = runner.collector();
    col.active = true;
    col.skip = skip;
    col.count = count;
    while (!col.full()) runner.run_block(static_cast<std::size_t>(cfg.block_len));
    return {std::move(col.buf), col.rate};
}

FloatStream capture_ddc(const RunConfig& cfg, std::size_t count, std::size_t skip) {
    const auto run = [&](auto sample_tag) {
        using S = decltype(sample_tag);
        ChainRunner<S> runner(cfg, Depth::Ddc);
        runner.set_tap(Tap::Ddc);
        auto& col = runner.ddc_collector();
        col.active = true;
        col.skip = skip;
        col.count = count;
        while (!col.full()) runner.run_block(static_cast<std::size_t>(cfg.block_len));
        FloatStream out;
        out.samples = std::move(col.buf);
        out.sample_rate = col.rate;
        out.origin_index = skip;
        return out;
    };
    return cfg.backend == Backend::FixedPoint ? run(CpxI32{}) : run(CpxF64{});
}

}  // namespace

Tap tap_from_name(const std::string& name) {
    if (name == "tonegen") return Tap::ToneGen;
    if (name == "downshift") return Tap::Downshift;
    if (name == "interp") return Tap::Interp;
    if (name == "upshift") return Tap::Upshift;
    if (name == "channelizer_demod") return Tap::ChannelizerDemod;
    if (name == "channelizer_out") return Tap::ChannelizerOut;
    if (name == "ddc") return Tap::Ddc;
    throw ConfigError("unknown tap '" + name + "'");
}

std::string tap_name(Tap tap) {
    switch (tap) {
        case Tap::ToneGen: return "tonegen";
        case Tap::Downshift: return "downshift";
        case Tap::Interp: return "interp";
        case Tap::Upshift: return "upshift";
        case Tap::ChannelizerDemod: return "channelizer_demod";
        case Tap::ChannelizerOut: return "channelizer_out";
        case Tap::Ddc: return "ddc";
    }
    throw std::logic_error("tap_name: bad tap");
}

double tap_rate(Tap tap, std::uint64_t ddc_window) {
    switch (tap) {
        case Tap::ToneGen:
        case Tap::Downshift:
        case Tap::ChannelizerOut: return kChainRate;
        case Tap::Interp:
        case Tap::Upshift:
        case Tap::ChannelizerDemod: return kDacRate;
        case Tap::Ddc: return kChainRate / static_cast<double>(ddc_window);
    }
    throw std::logic_error("tap_rate: bad tap");
}

std::vector<std::pair<std::string, std::uint64_t>> predict_tap_periods(std::uint32_t modulus_m) {
    using namespace stage;
    const std::vector<StageDescriptor> full = {
        Accumulator{modulus_m}, QuarterRateShift{}, Interpolate{kInterpFactor},
        PhasorModulate{kPhasorTablePeriod}};
    std::vector<std::pair<std::string, std::uint64_t>> out;
    auto up_to = [&](std::size_t k) {
        return predict_period(std::vector<StageDescriptor>(
                                  full.begin(), full.begin() + static_cast<std::ptrdiff_t>(k)))
            .final_period;
    };
    out.emplace_back("tonegen", up_to(1));
    out.emplace_back("downshift", up_to(2));
    out.emplace_back("interp", up_to(3));
    out.emplace_back("upshift", up_to(4));
    // Channelizer demod reapplies the 40-phasor; the LCM is unchanged.
    out.emplace_back("channelizer_demod", up_to(4));
    auto chan_out = predict_period({Accumulator{modulus_m}, QuarterRateShift{},
                                    Interpolate{kInterpFactor}, PhasorModulate{kPhasorTablePeriod},
                                    PhasorModulate{kPhasorTablePeriod},
                                    Decimate{kInterpFactor}, QuarterRateShift{}});
    out.emplace_back("channelizer_out", chan_out.final_period);
    return out;
}

RunResult run_closed_loop(const RunConfig& cfg) {
    return cfg.backend == Backend::FixedPoint ? run_closed_loop_impl<CpxI32>(cfg)
                                              : run_closed_loop_impl<CpxF64>(cfg);
}

FxStream capture_tap_fx(const RunConfig& cfg, Tap tap, std::size_t count, std::size_t skip) {
    if (cfg.backend != Backend::FixedPoint)
        throw std::invalid_argument("capture_tap_fx: config backend is not fixed");
    if (tap == Tap::Ddc)
        throw std::invalid_argument("capture_tap_fx: DDC output is not a fixed-layout tap");
    auto [buf, rate] = capture_impl<CpxI32>(cfg, tap, count, skip);
    FxStream out;
    out.samples = std::move(buf);
    out.sample_rate = rate;
    out.origin_index = skip;
    return out;
}

FloatStream capture_tap_f(const RunConfig& cfg, Tap tap, std::size_t count, std::size_t skip) {
    if (cfg.backend != Backend::FloatingPoint)
        throw std::invalid_argument("capture_tap_f: config backend is not float");
    if (tap == Tap::Ddc) return capture_ddc(cfg, count, skip);
    auto [buf, rate] = capture_impl<CpxF64>(cfg, tap, count, skip);
    FloatStream out;
    out.samples = std::move(buf);
    out.sample_rate = rate;
    out.origin_index = skip;
    return out;
}

FloatStream capture_tap(const RunConfig& cfg, Tap tap, std::size_t count, std::size_t skip) {
    if (tap == Tap::Ddc) return capture_ddc(cfg, count, skip);
    if (cfg.backend == Backend::FixedPoint) return widen(capture_tap_fx(cfg, tap, count, skip));
    return capture_tap_f(cfg, tap, count, skip);
}

ProbeResult run_stage_probe(const RunConfig& cfg, Tap tap, std::size_t n_fft, std::size_t skip) {
    const auto capture = capture_tap(cfg, tap, n_fft, skip);
    ProbeResult r;
    r.tap = tap;
    r.sample_rate = capture.sample_rate;
    r.n_fft = n_fft;
    r.alignment = bin_alignment_metric(capture.samples, n_fft);

    const auto spec = dft(capture.samples);
    double total = 0.0;
    for (const auto& s : spec) total += std::norm(s);
    std::vector<ProbePeak> peaks;
    for (std::size_t k = 0; k < n_fft; ++k) {
        const double p = std::norm(spec[k]);
        const double prev = std::norm(spec[(k + n_fft - 1) % n_fft]);
        const double next = std::norm(spec[(k + 1) % n_fft]);
        if (p < prev || p < next || p <= 0.0) continue;
        const double fk = k <= n_fft / 2
                              ? static_cast<double>(k)
                              : static_cast<double>(k) - static_cast<double>(n_fft);
        peaks.push_back({fk * capture.sample_rate / static_cast<double>(n_fft),
                         10.0 * std::log10(p / total)});
    }
    std::sort(peaks.begin(), peaks.end(),
              [](const ProbePeak& a, const ProbePeak& b) { return a.power_db > b.power_db; });
    if (peaks.size() > 8) peaks.resize(8);
    r.peaks = std::move(peaks);
    return r;
}

}  // namespace kidsim
