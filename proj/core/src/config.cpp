#include "kidsim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kidsim/tonegen.hpp"

namespace kidsim {

using nlohmann::json;

void RunConfig::validate() const {
    if (accumulator_modulus == 0 || accumulator_modulus > 65536)
        throw ConfigError("accumulator_modulus: must be in (0, 65536]");
    
    if (bands.empty()) throw ConfigError("bands: at least one band with one tone required");
    std::set<int> seen;
    for (const auto& b : bands) {
        if (b.band < 0 || b.band >= kNumBands)
            throw ConfigError("bands.band: out of [0,9]");
        if (!seen.insert(b.band).second) throw ConfigError("bands.band: duplicate band index");
        if (b.fcws.empty()) throw ConfigError("bands.fcw: band has no tones");
        if (b.fcws.size() > static_cast<std::size_t>(kPhasorTablePeriod))
            throw ConfigError("bands.fcw: more than 40 tones in one band");
        for (auto f : b.fcws)
            if (f >= accumulator_modulus)
                throw ConfigError("bands.fcw: fcw must be < accumulator_modulus");
    }
    if (duration == 0) throw ConfigError("duration: must be positive");
    if (psd.segment_length < 4) throw ConfigError("psd.segment_length: too small");
    if (psd.segment_length > duration)
        throw ConfigError("psd.segment_length: exceeds duration");
    if (psd.overlap < 0.0 || psd.overlap >= 1.0) throw ConfigError("psd.overlap: out of [0,1)");
    if (workers < 1) throw ConfigError("workers: must be >= 1");
    if (cordic_iterations < 1 || cordic_iterations > 30)
        throw ConfigError("cordic_iterations: out of [1,30]");
    if (block_len == 0) throw ConfigError("block_len: must be positive");
}

std::size_t RunConfig::total_tones() const {
    std::size_t n = 0;
    for (const auto& b : bands) n += b.fcws.size();
    return n;
}

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& ctx) {
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) throw ConfigError(ctx + ": unknown key '" + key + "'");
    }
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown(j, {"backend", "accumulator_modulus", "ddc_window", "bands", "duration",
                       "settle_skip", "loopback_component", "psd", "seed", "workers",
                       "cordic_iterations", "block_len"},
                   "config");

    RunConfig cfg;
    try {
        if (j.contains("backend")) {
            const std::string b = j["backend"];
            if (b == "fixed") cfg.backend = Backend::FixedPoint;
            else if (b == "float") cfg.backend = Backend::FloatingPoint;
            else throw ConfigError("backend: must be 'fixed' or 'float'");
        }
        if (j.contains("accumulator_modulus"))
            cfg.accumulator_modulus = j["accumulator_modulus"];
        if (j.contains("ddc_window")) cfg.ddc_window = j["ddc_window"];
        if (j.contains("duration")) cfg.duration = j["duration"];
        if (j.contains("settle_skip")) cfg.settle_skip = j["settle_skip"];
        if (j.contains("loopback_component")) {
            const std::string c = j["loopback_component"];
            if (c == "I") cfg.loopback_component = Component::I;
            else if (c == "Q") cfg.loopback_component = Component::Q;
            else throw ConfigError("loopback_component: must be 'I' or 'Q'");
        }
        if (j.contains("psd")) {
            reject_unknown(j["psd"], {"segment_length", "overlap"}, "psd");
            if (j["psd"].contains("segment_length"))
                cfg.psd.segment_length = j["psd"]["segment_length"];
            if (j["psd"].contains("overlap")) cfg.psd.overlap = j["psd"]["overlap"];
        }
        if (j.contains("seed")) cfg.seed = j["seed"];
        if (j.contains("workers")) cfg.workers = j["workers"];
        if (j.contains("cordic_iterations")) cfg.cordic_iterations = j["cordic_iterations"];
        if (j.contains("block_len")) cfg.block_len = j["block_len"];
        if (j.contains("bands")) {
            if (!j["bands"].is_array()) throw ConfigError("bands: must be an array");
            for (const auto& jb : j["bands"]) {
                reject_unknown(jb, {"band", "fcw"}, "bands[]");
                BandConfig b;
                if (!jb.contains("band") || !jb.contains("fcw"))
                    throw ConfigError("bands[]: requires 'band' and 'fcw'");
                b.band = jb["band"];
                for (const auto& f : jb["fcw"]) b.fcws.push_back(f.get<std::uint32_t>());
                cfg.bands.push_back(b);
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: type error: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

std::string run_config_to_json(const RunConfig& cfg) {
    json j;
    j["backend"] = cfg.backend == Backend::FixedPoint ? "fixed" : "float";
    j["accumulator_modulus"] = cfg.accumulator_modulus;
    j["ddc_window"] = cfg.ddc_window;
    j["duration"] = cfg.duration;
    j["settle_skip"] = cfg.settle_skip;
    j["loopback_component"] = cfg.loopback_component == Component::I ? "I" : "Q";
    j["psd"] = {{"segment_length", cfg.psd.segment_length}, {"overlap", cfg.psd.overlap}};
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    j["cordic_iterations"] = cfg.cordic_iterations;
    j["block_len"] = cfg.block_len;
    j["bands"] = json::array();
    for (const auto& b : cfg.bands) j["bands"].push_back({{"band", b.band}, {"fcw", b.fcws}});
    return j.dump(2);
}

}  // namespace kidsim
