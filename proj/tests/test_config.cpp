#include <doctest.h>

#include "config.hpp"

using namespace locgate;

TEST_CASE("default config carries the standard values and validates") {
    Config cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.thresholds.theta_p == 0.7);
    CHECK(cfg.thresholds.theta_s == 0.3);
    CHECK(cfg.profiles.all_five.weight(SignalId::s1_movement) == 0.30);
    CHECK(cfg.oracle.pass_prob_legitimate == 1.0);
    CHECK(cfg.oracle.pass_prob_spoofed == 0.0);
    CHECK(cfg.corpus.traces_per_scenario == 1000);
    CHECK(cfg.corpus.fixes_per_trace == 60);
}

TEST_CASE("config round trips through its JSON form") {
    Config cfg;
    cfg.thresholds.theta_p = 0.85;
    cfg.signals.history_window = 7;
    cfg.corpus.master_seed = 42;
    cfg.corpus.params.drift_rate_max_mps = 1.9;
    cfg.detection_unit = DetectionUnit::fix;
    const Config back = parse_config(config_json(cfg));
    CHECK(back.thresholds.theta_p == 0.85);
    CHECK(back.signals.history_window == 7);
    CHECK(back.corpus.master_seed == 42);
    CHECK(back.corpus.params.drift_rate_max_mps == 1.9);
    CHECK(back.detection_unit == DetectionUnit::fix);
}

TEST_CASE("config parsing errors") {
    CHECK_THROWS_AS(parse_config("not json"), Error);
    CHECK_THROWS_AS(parse_config("{}"), Error);  // missing schema_version
    CHECK_THROWS_AS(parse_config(R"({"schema_version": 2})"), Error);
    CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "theta_p": "high"})"), Error);
    // inverted thresholds fail validation
    CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "theta_p": 0.2, "theta_s": 0.5})"),
                    Error);
}

TEST_CASE("unknown keys: strict errors, lax warns") {
    const std::string strict_doc =
        R"({"schema_version": 1, "strict_parse": true, "mystery": 3})";
    CHECK_THROWS_AS(parse_config(strict_doc), Error);

    const std::string lax_doc = R"({"schema_version": 1, "mystery": 3})";
    std::vector<std::string> warnings;
    CHECK_NOTHROW(parse_config(lax_doc, &warnings));
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("mystery") != std::string::npos);
}

TEST_CASE("profile overrides are validated") {
    // weights not summing to 1
    const std::string bad =
        R"({"schema_version": 1, "profile_v1": [0.5, 0.2, 0.2, null, null]})";
    CHECK_THROWS_AS(parse_config(bad), Error);

    const std::string good =
        R"({"schema_version": 1, "profile_v1": [0.6, 0.2, 0.2, null, null]})";
    const Config cfg = parse_config(good);
    CHECK(cfg.profiles.v1.weight(SignalId::s1_movement) == 0.6);
    // mask must stay the availability pattern
    const std::string wrong_mask =
        R"({"schema_version": 1, "profile_v1": [0.6, 0.2, null, 0.2, null]})";
    CHECK_THROWS_AS(parse_config(wrong_mask), Error);
}

TEST_CASE("signal knee overrides flow through") {
    const Config cfg = parse_config(
        R"({"schema_version": 1, "s1_full_trust_speed_mps": 40.0, "s4_ratio_high": 2.5})");
    CHECK(cfg.signals.s1_full_trust_speed_mps == 40.0);
    CHECK(cfg.signals.s4_ratio_high == 2.5);
}
