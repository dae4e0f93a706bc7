#include "kidsim/export.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "kidsim/config.hpp"

namespace kidsim {

namespace {

// shortest round-trippable decimal form
void append_double(std::string& out, double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, r.ptr);
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string ddc_csv(const FloatStream& stream) {
    std::string out = "index,i,q\n";
    for (std::size_t k = 0; k < stream.samples.size(); ++k) {
        out += std::to_string(stream.origin_index + k);
        out += ',';
        append_double(out, stream.samples[k].real());
        out += ',';
        append_double(out, stream.samples[k].imag());
        out += '\n';
    }
    return out;
}

std::string psd_csv(const SpectrumReport& amp, const SpectrumReport& phase) {
    if (amp.freqs.size() != phase.freqs.size())
        throw std::invalid_argument("psd_csv: amp/phase report size mismatch");
    std::string out = "freq_hz,amp_psd_db,phase_psd_db\n";
    for (std::size_t k = 0; k < amp.freqs.size(); ++k) {
        append_double(out, amp.freqs[k]);
        out += ',';
        append_double(out, amp.psd_db[k]);
        out += ',';
        append_double(out, phase.psd_db[k]);
        out += '\n';
    }
    return out;
}

std::string export_run(const RunResult& result, const std::string& out_dir) {
    namespace fs = std::filesystem;
    const fs::path dir(out_dir);
    fs::create_directories(dir);

    std::vector<ExportedFile> files;
    auto emit = [&](const std::string& rel, const std::string& bytes) {
        write_file(dir / rel, bytes);
        files.push_back({rel, fnv1a64(bytes)});
    };

    nlohmann::json tones = nlohmann::json::array();
    for (const auto& tr : result.tones) {
        const std::string stem =
            "band" + std::to_string(tr.tone.band) + "_fcw" + std::to_string(tr.tone.fcw);
        emit(stem + "_ddc.csv", ddc_csv(tr.ddc_iq));
        emit(stem + "_psd.csv", psd_csv(tr.amp_psd, tr.phase_psd));

        nlohmann::json spurs = nlohmann::json::array();
        for (const auto& s : tr.amp_psd.detected_spurs)
            spurs.push_back({{"freq_hz", s.freq_hz}, {"prominence_db", s.prominence_db}});
        tones.push_back({{"band", tr.tone.band},
                         {"fcw", tr.tone.fcw},
                         {"frequency_hz", tr.tone.frequency()},
                         {"ddc_csv", stem + "_ddc.csv"},
                         {"psd_csv", stem + "_psd.csv"},
                         {"amp_spurs", spurs}});
    }

    nlohmann::json manifest;
    manifest["format"] = "kidsim-run/1";
    manifest["config"] = nlohmann::json::parse(run_config_to_json(result.config));
    manifest["saturation_count"] = result.saturation_count;
    manifest["wall_seconds"] = result.wall_seconds;
    nlohmann::json periods = nlohmann::json::object();
    for (const auto& [name, p] : result.tap_periods) periods[name] = p;
    manifest["tap_periods"] = periods;
    manifest["tones"] = tones;
    nlohmann::json flist = nlohmann::json::array();
    for (const auto& f : files)
        flist.push_back({{"path", f.relative_path}, {"fnv1a64", f.content_hash}});
    manifest["files"] = flist;

    const std::string manifest_bytes = manifest.dump(2) + "\n";
    const fs::path manifest_path = dir / "manifest.json";
    write_file(manifest_path, manifest_bytes);
    return manifest_path.string();
}

}  // namespace kidsim
