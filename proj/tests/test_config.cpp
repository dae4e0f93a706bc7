#include <doctest.h>

#include <string>

#include "kidsim/config.hpp"

using namespace kidsim;

namespace {

std::string msg_of(const std::string& json) {
    try {
        parse_run_config(json);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

constexpr const char* kMinimal = R"({"bands":[{"band":6,"fcw":[4000]}]})";

}  // namespace

TEST_CASE("minimal config parses with documented defaults") {
    const auto cfg = parse_run_config(kMinimal);
    CHECK(cfg.backend == Backend::FixedPoint);
    CHECK(cfg.accumulator_modulus == 65536);
    CHECK(cfg.window() == 65536);
    CHECK(cfg.duration == 256);
    CHECK(cfg.workers == 1);
    CHECK(cfg.total_tones() == 1);
}

TEST_CASE("the DDC window follows the modulus unless pinned") {
    auto cfg = parse_run_config(kMinimal);
    cfg.accumulator_modulus = 65520;
    CHECK(cfg.window() == 65520);
    cfg.ddc_window = 65536;
    CHECK(cfg.window() == 65536);
}

TEST_CASE("unknown keys are rejected with the offending name") {
    CHECK(msg_of(R"({"bands":[{"band":0,"fcw":[1]}],"wat":1})").find("wat") !=
          std::string::npos);
    CHECK(msg_of(R"({"bands":[{"band":0,"fcw":[1],"extra":2}]})").find("extra") !=
          std::string::npos);
    CHECK(msg_of(R"({"bands":[{"band":0,"fcw":[1]}],"psd":{"nope":1}})").find("nope") !=
          std::string::npos);
}

TEST_CASE("validation errors carry the field name") {
    CHECK(msg_of(R"({"bands":[]})").find("bands") != std::string::npos);
    CHECK(msg_of(R"({"bands":[{"band":10,"fcw":[1]}]})").find("band") != std::string::npos);
    CHECK(msg_of(R"({"bands":[{"band":0,"fcw":[70000]}]})").find("fcw") != std::string::npos);
    CHECK(msg_of(R"({"accumulator_modulus":70000,"bands":[{"band":0,"fcw":[1]}]})")
              .find("accumulator_modulus") != std::string::npos);
    CHECK(msg_of(R"({"workers":0,"bands":[{"band":0,"fcw":[1]}]})").find("workers") !=
          std::string::npos);
    CHECK(msg_of(R"({"duration":4,"psd":{"segment_length":8},"bands":[{"band":0,"fcw":[1]}]})")
              .find("segment_length") != std::string::npos);
    CHECK(msg_of(R"({"bands":[{"band":0,"fcw":[1]},{"band":0,"fcw":[2]}]})").find("band") !=
          std::string::npos);   // duplicate band
    CHECK(msg_of(R"({"backend":"quantum","bands":[{"band":0,"fcw":[1]}]})").find("backend") !=
          std::string::npos);
    CHECK(msg_of("not json at all").find("JSON") != std::string::npos);
}

TEST_CASE("config survives a JSON round trip") {
    auto cfg = parse_run_config(kMinimal);
    cfg.backend = Backend::FloatingPoint;
    cfg.accumulator_modulus = 65520;
    cfg.duration = 64;
    cfg.workers = 3;
    cfg.bands.push_back({2, {7, 9, 11}});
    cfg.psd.segment_length = 32;
    const auto back = parse_run_config(run_config_to_json(cfg));
    CHECK(back.backend == cfg.backend);
    CHECK(back.accumulator_modulus == cfg.accumulator_modulus);
    CHECK(back.duration == cfg.duration);
    CHECK(back.workers == cfg.workers);
    CHECK(back.psd.segment_length == cfg.psd.segment_length);
    REQUIRE(back.bands.size() == 2);
    CHECK(back.bands[1].fcws == cfg.bands[1].fcws);
}
