#include "config.hpp"

#include <json.hpp>

#include "trace_io.hpp"

namespace locgate {

using ordered_json = nlohmann::ordered_json;

namespace {

struct ScenarioField {
    const char* key;
    double ScenarioParams::*member;
};

// Flat config keys for the scenario dials, prefixed to keep the document one
// level deep.
const ScenarioField kScenarioFields[] = {
    {"scenario_walking_speed_mean_mps", &ScenarioParams::walking_speed_mean_mps},
    {"scenario_walking_speed_sd_mps", &ScenarioParams::walking_speed_sd_mps},
    {"scenario_walking_heading_sd_deg", &ScenarioParams::walking_heading_sd_deg},
    {"scenario_driving_speed_min_mps", &ScenarioParams::driving_speed_min_mps},
    {"scenario_driving_speed_max_mps", &ScenarioParams::driving_speed_max_mps},
    {"scenario_driving_accel_sd_mps2", &ScenarioParams::driving_accel_sd_mps2},
    {"scenario_driving_heading_sd_deg", &ScenarioParams::driving_heading_sd_deg},
    {"scenario_stationary_jitter_sd_m", &ScenarioParams::stationary_jitter_sd_m},
    {"scenario_stationary_jitter_max_m", &ScenarioParams::stationary_jitter_max_m},
    {"scenario_train_speed_min_mps", &ScenarioParams::train_speed_min_mps},
    {"scenario_train_speed_max_mps", &ScenarioParams::train_speed_max_mps},
    {"scenario_train_heading_sd_deg", &ScenarioParams::train_heading_sd_deg},
    {"scenario_gps_accuracy_min_m", &ScenarioParams::gps_accuracy_min_m},
    {"scenario_gps_accuracy_max_m", &ScenarioParams::gps_accuracy_max_m},
    {"scenario_hint_accuracy_slow_min_m", &ScenarioParams::hint_accuracy_slow_min_m},
    {"scenario_hint_accuracy_slow_max_m", &ScenarioParams::hint_accuracy_slow_max_m},
    {"scenario_hint_offset_slow_factor", &ScenarioParams::hint_offset_slow_factor},
    {"scenario_hint_accuracy_fast_min_m", &ScenarioParams::hint_accuracy_fast_min_m},
    {"scenario_hint_accuracy_fast_max_m", &ScenarioParams::hint_accuracy_fast_max_m},
    {"scenario_hint_offset_fast_factor", &ScenarioParams::hint_offset_fast_factor},
    {"scenario_hint_tail_prob", &ScenarioParams::hint_tail_prob},
    {"scenario_hint_tail_ratio_min", &ScenarioParams::hint_tail_ratio_min},
    {"scenario_hint_tail_ratio_max", &ScenarioParams::hint_tail_ratio_max},
    {"scenario_teleport_prefix_min_frac", &ScenarioParams::teleport_prefix_min_frac},
    {"scenario_teleport_prefix_max_frac", &ScenarioParams::teleport_prefix_max_frac},
    {"scenario_teleport_jump_min_km", &ScenarioParams::teleport_jump_min_km},
    {"scenario_teleport_jump_max_km", &ScenarioParams::teleport_jump_max_km},
    {"scenario_mock_accuracy_m", &ScenarioParams::mock_accuracy_m},
    {"scenario_drift_rate_min_mps", &ScenarioParams::drift_rate_min_mps},
    {"scenario_drift_rate_max_mps", &ScenarioParams::drift_rate_max_mps},
    {"scenario_drift_hint_accuracy_min_m", &ScenarioParams::drift_hint_accuracy_min_m},
    {"scenario_drift_hint_accuracy_max_m", &ScenarioParams::drift_hint_accuracy_max_m},
    {"scenario_drift_hint_offset_factor", &ScenarioParams::drift_hint_offset_factor},
    {"scenario_attack_accuracy_min_m", &ScenarioParams::attack_accuracy_min_m},
    {"scenario_attack_accuracy_max_m", &ScenarioParams::attack_accuracy_max_m},
    {"scenario_replay_offset_min_km", &ScenarioParams::replay_offset_min_km},
    {"scenario_replay_offset_max_km", &ScenarioParams::replay_offset_max_km},
    {"scenario_net_mismatch_ratio_min", &ScenarioParams::net_mismatch_ratio_min},
    {"scenario_net_mismatch_ratio_max", &ScenarioParams::net_mismatch_ratio_max},
};

ordered_json profile_to_json(const WeightProfile& p) {
    ordered_json arr = ordered_json::array();
    for (int i = 0; i < kSignalCount; ++i) {
        if (p.mask & (1u << i)) arr.push_back(p.weights[i]);
        else arr.push_back(nullptr);
    }
    return arr;
}

WeightProfile profile_from_json(const ordered_json& arr, const std::string& name) {
    if (!arr.is_array() || arr.size() != kSignalCount)
        throw_parse("profile '" + name + "' must be an array of 5 weights (null = absent)");
    WeightProfile p;
    p.name = name;
    for (int i = 0; i < kSignalCount; ++i) {
        if (arr[i].is_null()) continue;
        if (!arr[i].is_number()) throw_parse("profile '" + name + "' entries must be numbers or null");
        p.weights[i] = arr[i].get<double>();
        p.mask |= static_cast<uint8_t>(1u << i);
    }
    p.validate();
    return p;
}

}  // namespace

void Config::validate() const {
    thresholds.validate();
    signals.validate();
    profiles.validate();
    oracle.validate();
    corpus.validate();
}

Config parse_config(const std::string& json_text, std::vector<std::string>* warnings) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const std::exception& e) {
        throw_parse(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw_parse("config must be a JSON object");
    auto sv = j.find("schema_version");
    if (sv == j.end() || !sv->is_number_integer() || sv->get<int>() != 1)
        throw_parse("config requires schema_version = 1");

    Config cfg;
    // strict flag first: it governs unknown-key handling below
    if (auto it = j.find("strict_parse"); it != j.end()) cfg.strict_parse = it->get<bool>();

    auto get_double = [&](const char* key, double& out) {
        if (auto it = j.find(key); it != j.end()) {
            if (!it->is_number()) throw_parse(std::string("config field '") + key + "' must be a number");
            out = it->get<double>();
        }
    };
    auto get_int = [&](const char* key, int& out) {
        if (auto it = j.find(key); it != j.end()) {
            if (!it->is_number_integer()) throw_parse(std::string("config field '") + key + "' must be an integer");
            out = it->get<int>();
        }
    };

    get_double("theta_p", cfg.thresholds.theta_p);
    get_double("theta_s", cfg.thresholds.theta_s);
    get_double("s1_full_trust_speed_mps", cfg.signals.s1_full_trust_speed_mps);
    get_double("s1_zero_trust_speed_mps", cfg.signals.s1_zero_trust_speed_mps);
    get_double("s2_min_plausible_accuracy_m", cfg.signals.s2_min_plausible_accuracy_m);
    get_double("s3_violation_speed_mps", cfg.signals.s3_violation_speed_mps);
    get_double("s4_ratio_low", cfg.signals.s4_ratio_low);
    get_double("s4_ratio_high", cfg.signals.s4_ratio_high);
    get_double("s4_ratio_max", cfg.signals.s4_ratio_max);
    get_double("s5_near_ratio", cfg.signals.s5_near_ratio);
    get_double("s5_far_ratio", cfg.signals.s5_far_ratio);
    get_int("history_window", cfg.signals.history_window);
    if (auto it = j.find("profile_all_five"); it != j.end())
        cfg.profiles.all_five = profile_from_json(*it, "all_five");
    if (auto it = j.find("profile_no_network"); it != j.end())
        cfg.profiles.no_network = profile_from_json(*it, "no_network");
    if (auto it = j.find("profile_no_fixes"); it != j.end())
        cfg.profiles.no_fixes = profile_from_json(*it, "no_fixes");
    if (auto it = j.find("profile_v1"); it != j.end())
        cfg.profiles.v1 = profile_from_json(*it, "v1");
    get_double("oracle_pass_legitimate", cfg.oracle.pass_prob_legitimate);
    get_double("oracle_pass_spoofed", cfg.oracle.pass_prob_spoofed);
    if (auto it = j.find("corpus_master_seed"); it != j.end())
        cfg.corpus.master_seed = it->get<uint64_t>();
    get_int("corpus_traces_per_scenario", cfg.corpus.traces_per_scenario);
    get_int("corpus_fixes_per_trace", cfg.corpus.fixes_per_trace);
    if (auto it = j.find("corpus_fix_interval_ms"); it != j.end())
        cfg.corpus.fix_interval_ms = it->get<int64_t>();
    get_int("corpus_hint_interval_fixes", cfg.corpus.hint_interval_fixes);
    get_int("corpus_raw_samples_per_fix", cfg.corpus.raw_samples_per_fix);
    for (const auto& f : kScenarioFields) get_double(f.key, cfg.corpus.params.*(f.member));
    if (auto it = j.find("detection_unit"); it != j.end()) {
        const std::string s = it->get<std::string>();
        if (s == "trace") cfg.detection_unit = DetectionUnit::trace;
        else if (s == "fix") cfg.detection_unit = DetectionUnit::fix;
        else throw_parse("detection_unit must be 'trace' or 'fix'");
    }

    // unknown-key scan
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        static const char* known[] = {
            "schema_version", "strict_parse", "theta_p", "theta_s",
            "s1_full_trust_speed_mps", "s1_zero_trust_speed_mps", "s2_min_plausible_accuracy_m",
            "s3_violation_speed_mps", "s4_ratio_low", "s4_ratio_high", "s4_ratio_max",
            "s5_near_ratio", "s5_far_ratio", "history_window",
            "profile_all_five", "profile_no_network", "profile_no_fixes", "profile_v1",
            "oracle_pass_legitimate", "oracle_pass_spoofed",
            "corpus_master_seed", "corpus_traces_per_scenario", "corpus_fixes_per_trace",
            "corpus_fix_interval_ms", "corpus_hint_interval_fixes", "corpus_raw_samples_per_fix",
            "detection_unit"};
        bool is_known = false;
        for (const char* k : known)
            if (key == k) { is_known = true; break; }
        if (!is_known)
            for (const auto& f : kScenarioFields)
                if (key == f.key) { is_known = true; break; }
        if (!is_known) {
            const std::string msg = "config: unknown field '" + key + "'";
            if (cfg.strict_parse) throw_parse(msg);
            if (warnings) warnings->push_back(msg);
        }
    }

    cfg.validate();
    return cfg;
}

Config load_config_file(const std::string& path, std::vector<std::string>* warnings) {
    return parse_config(read_file(path), warnings);
}

std::string config_json(const Config& cfg) {
    ordered_json j;
    j["schema_version"] = 1;
    j["strict_parse"] = cfg.strict_parse;
    j["theta_p"] = cfg.thresholds.theta_p;
    j["theta_s"] = cfg.thresholds.theta_s;
    j["s1_full_trust_speed_mps"] = cfg.signals.s1_full_trust_speed_mps;
    j["s1_zero_trust_speed_mps"] = cfg.signals.s1_zero_trust_speed_mps;
    j["s2_min_plausible_accuracy_m"] = cfg.signals.s2_min_plausible_accuracy_m;
    j["s3_violation_speed_mps"] = cfg.signals.s3_violation_speed_mps;
    j["s4_ratio_low"] = cfg.signals.s4_ratio_low;
    j["s4_ratio_high"] = cfg.signals.s4_ratio_high;
    j["s4_ratio_max"] = cfg.signals.s4_ratio_max;
    j["s5_near_ratio"] = cfg.signals.s5_near_ratio;
    j["s5_far_ratio"] = cfg.signals.s5_far_ratio;
    j["history_window"] = cfg.signals.history_window;
    j["profile_all_five"] = profile_to_json(cfg.profiles.all_five);
    j["profile_no_network"] = profile_to_json(cfg.profiles.no_network);
    j["profile_no_fixes"] = profile_to_json(cfg.profiles.no_fixes);
    j["profile_v1"] = profile_to_json(cfg.profiles.v1);
    j["oracle_pass_legitimate"] = cfg.oracle.pass_prob_legitimate;
    j["oracle_pass_spoofed"] = cfg.oracle.pass_prob_spoofed;
    j["corpus_master_seed"] = cfg.corpus.master_seed;
    j["corpus_traces_per_scenario"] = cfg.corpus.traces_per_scenario;
    j["corpus_fixes_per_trace"] = cfg.corpus.fixes_per_trace;
    j["corpus_fix_interval_ms"] = cfg.corpus.fix_interval_ms;
    j["corpus_hint_interval_fixes"] = cfg.corpus.hint_interval_fixes;
    j["corpus_raw_samples_per_fix"] = cfg.corpus.raw_samples_per_fix;
    for (const auto& f : kScenarioFields) j[f.key] = cfg.corpus.params.*(f.member);
    j["detection_unit"] = cfg.detection_unit == DetectionUnit::trace ? "trace" : "fix";
    return j.dump(2) + "\n";
}

}  // namespace locgate
