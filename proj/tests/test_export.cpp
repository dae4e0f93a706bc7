#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kidsim/export.hpp"

using namespace kidsim;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("fnv1a64 matches the published test vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("ddc csv is deterministic, LF-only, and indexed from the origin") {
    FloatStream s;
    s.sample_rate = 100.0;
    s.origin_index = 2;
    s.samples = {{0.5, -0.25}, {1.0 / 3.0, 0.0}};
    const auto csv = ddc_csv(s);
    CHECK(csv == "index,i,q\n2,0.5,-0.25\n3,0.3333333333333333,0\n");
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(ddc_csv(s) == csv);
}

TEST_CASE("psd csv pairs amplitude and phase by frequency") {
    SpectrumReport amp, phase;
    amp.freqs = {0.0, 1.0};
    amp.psd_db = {-100.0, -110.5};
    phase.freqs = amp.freqs;
    phase.psd_db = {-90.0, -95.0};
    CHECK(psd_csv(amp, phase) ==
          "freq_hz,amp_psd_db,phase_psd_db\n0,-100,-90\n1,-110.5,-95\n");
    phase.freqs.pop_back();
    phase.psd_db.pop_back();
    CHECK_THROWS(psd_csv(amp, phase));
}

TEST_CASE("export_run writes per-tone artifacts and a verifiable manifest") {
    RunConfig cfg;
    cfg.accumulator_modulus = 256;
    cfg.duration = 8;
    cfg.settle_skip = 2;
    cfg.psd.segment_length = 4;
    cfg.bands = {{6, {40}}};
    cfg.block_len = 1024;
    const auto result = run_closed_loop(cfg);

    const auto dir = std::filesystem::temp_directory_path() / "kidsim_export_test";
    std::filesystem::remove_all(dir);
    const auto manifest_path = export_run(result, dir.string());

    const auto manifest = nlohmann::json::parse(slurp(manifest_path));
    CHECK(manifest["format"] == "kidsim-run/1");
    CHECK(manifest["config"]["accumulator_modulus"] == 256);
    REQUIRE(manifest["tones"].size() == 1);
    CHECK(manifest["tones"][0]["band"] == 6);
    CHECK(manifest["tap_periods"]["tonegen"] == 256);

    // Every listed artifact exists and hashes to the recorded value.
    REQUIRE(manifest["files"].size() == 2);
    for (const auto& f : manifest["files"]) {
        const auto bytes = slurp(dir / f["path"].get<std::string>());
        CHECK(!bytes.empty());
        CHECK(fnv1a64(bytes) == f["fnv1a64"].get<std::uint64_t>());
    }

    // Re-export is byte-identical (hash equality is enough).
    const auto again = nlohmann::json::parse(slurp(export_run(result, dir.string())));
    CHECK(again["files"] == manifest["files"]);

    std::filesystem::remove_all(dir);
}
