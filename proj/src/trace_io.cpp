#include "trace_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rng.hpp"

namespace locgate {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json fix_to_json(const Fix& fix, const std::optional<TraceLabel>& label,
                         const std::optional<Scenario>& scenario) {
    ordered_json j;
    j["session_id"] = fix.session_id;
    j["t_ms"] = fix.t_ms;
    j["lat"] = fix.lat;
    j["lon"] = fix.lon;
    j["accuracy_m"] = fix.accuracy_m;
    if (fix.net_hint) {
        ordered_json h;
        h["lat"] = fix.net_hint->lat;
        h["lon"] = fix.net_hint->lon;
        h["accuracy_m"] = fix.net_hint->accuracy_m;
        j["net_hint"] = std::move(h);
    }
    if (!fix.raw_fixes.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& s : fix.raw_fixes) arr.push_back({s.lat, s.lon, s.accuracy_m});
        j["raw_fixes"] = std::move(arr);
    }
    if (label) j["label"] = label_name(*label);
    if (scenario) j["scenario"] = scenario_name(*scenario);
    return j;
}

double require_number(const ordered_json& j, const char* key, size_t line) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number())
        throw_parse("line " + std::to_string(line) + ": missing numeric field '" + key + "'");
    return it->get<double>();
}

}  // namespace

std::string serialize_fix_line(const Fix& fix, const std::optional<TraceLabel>& label,
                               const std::optional<Scenario>& scenario) {
    return fix_to_json(fix, label, scenario).dump();
}

std::string serialize_corpus(const Corpus& corpus) {
    std::string out;
    out.reserve(corpus.traces.size() * 256);
    for (const auto& trace : corpus.traces) {
        for (const auto& fix : trace.fixes) {
            out += serialize_fix_line(fix, trace.label, trace.scenario);
            out += '\n';
        }
    }
    return out;
}

std::vector<Trace> parse_traces(const std::string& text, bool strict, ParseWarnings* warnings) {
    static const std::vector<std::string> known_keys = {
        "session_id", "t_ms", "lat", "lon", "accuracy_m", "net_hint", "raw_fixes",
        "label",      "scenario"};

    std::vector<Trace> traces;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    std::string current_sid;
    std::vector<std::string> seen_sids;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const std::exception& e) {
            throw_parse("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!j.is_object())
            throw_parse("line " + std::to_string(line_no) + ": expected a JSON object");

        for (auto it = j.begin(); it != j.end(); ++it) {
            bool known = false;
            for (const auto& k : known_keys)
                if (it.key() == k) { known = true; break; }
            if (!known) {
                const std::string msg =
                    "line " + std::to_string(line_no) + ": unknown field '" + it.key() + "'";
                if (strict) throw_parse(msg);
                if (warnings) warnings->messages.push_back(msg);
            }
        }

        Fix fix;
        auto sid_it = j.find("session_id");
        if (sid_it == j.end() || !sid_it->is_string())
            throw_parse("line " + std::to_string(line_no) + ": missing string field 'session_id'");
        fix.session_id = sid_it->get<std::string>();
        auto t_it = j.find("t_ms");
        if (t_it == j.end() || !t_it->is_number_integer())
            throw_parse("line " + std::to_string(line_no) + ": missing integer field 't_ms'");
        fix.t_ms = t_it->get<int64_t>();
        fix.lat = require_number(j, "lat", line_no);
        fix.lon = require_number(j, "lon", line_no);
        fix.accuracy_m = require_number(j, "accuracy_m", line_no);
        if (auto it = j.find("net_hint"); it != j.end()) {
            if (!it->is_object())
                throw_parse("line " + std::to_string(line_no) + ": net_hint must be an object");
            NetworkHint h;
            h.lat = require_number(*it, "lat", line_no);
            h.lon = require_number(*it, "lon", line_no);
            h.accuracy_m = require_number(*it, "accuracy_m", line_no);
            fix.net_hint = h;
        }
        if (auto it = j.find("raw_fixes"); it != j.end()) {
            if (!it->is_array())
                throw_parse("line " + std::to_string(line_no) + ": raw_fixes must be an array");
            for (const auto& e : *it) {
                if (!e.is_array() || e.size() != 3 || !e[0].is_number() || !e[1].is_number() ||
                    !e[2].is_number())
                    throw_parse("line " + std::to_string(line_no) +
                                ": raw_fixes entries must be [lat, lon, accuracy_m]");
                fix.raw_fixes.push_back({e[0].get<double>(), e[1].get<double>(), e[2].get<double>()});
            }
        }

        std::optional<TraceLabel> label;
        if (auto it = j.find("label"); it != j.end()) {
            const std::string s = it->get<std::string>();
            if (s == "legitimate") label = TraceLabel::legitimate;
            else if (s == "spoofed") label = TraceLabel::spoofed;
            else throw_parse("line " + std::to_string(line_no) + ": unknown label '" + s + "'");
        }
        std::optional<Scenario> scenario;
        if (auto it = j.find("scenario"); it != j.end()) {
            try {
                scenario = scenario_from_name(it->get<std::string>());
            } catch (const Error& e) {
                throw_parse("line " + std::to_string(line_no) + ": " + e.what());
            }
        }

        if (fix.session_id != current_sid) {
            for (const auto& s : seen_sids)
                if (s == fix.session_id)
                    throw_parse("line " + std::to_string(line_no) + ": session '" +
                                fix.session_id + "' reappears after other sessions");
            seen_sids.push_back(fix.session_id);
            current_sid = fix.session_id;
            traces.emplace_back();
            traces.back().label = label;
            traces.back().scenario = scenario;
        }
        traces.back().fixes.push_back(std::move(fix));
    }

    for (size_t i = 0; i < traces.size(); ++i) {
        try {
            validate_trace(traces[i]);
        } catch (const Error& e) {
            throw Error(ErrorKind::validation,
                        "trace " + std::to_string(i) + " (" +
                            traces[i].fixes.front().session_id + "): " + e.what());
        }
    }
    return traces;
}

std::vector<Trace> load_traces_file(const std::string& path, bool strict,
                                    ParseWarnings* warnings) {
    return parse_traces(read_file(path), strict, warnings);
}

std::string content_hash_of_bytes(const std::string& bytes) {
    Fnv1a64 h;
    h.update(bytes.data(), bytes.size());
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016" PRIx64, h.value());
    return buf;
}

std::string corpus_content_hash(const Corpus& corpus) {
    return content_hash_of_bytes(serialize_corpus(corpus));
}

std::string manifest_json(const Corpus& corpus) {
    return manifest_json(corpus, corpus_content_hash(corpus));
}

std::string manifest_json(const Corpus& corpus, const std::string& content_hash) {
    const CorpusConfig& c = corpus.config;
    const ScenarioParams& p = c.params;
    size_t fix_count = 0;
    for (const auto& t : corpus.traces) fix_count += t.fixes.size();
    ordered_json j;
    j["schema_version"] = 1;
    j["prng"] = kPrngId;
    j["master_seed"] = c.master_seed;
    j["traces_per_scenario"] = c.traces_per_scenario;
    j["fixes_per_trace"] = c.fixes_per_trace;
    j["fix_interval_ms"] = c.fix_interval_ms;
    j["hint_interval_fixes"] = c.hint_interval_fixes;
    j["raw_samples_per_fix"] = c.raw_samples_per_fix;
    ordered_json sp;
    sp["walking_speed_mean_mps"] = p.walking_speed_mean_mps;
    sp["walking_speed_sd_mps"] = p.walking_speed_sd_mps;
    sp["walking_heading_sd_deg"] = p.walking_heading_sd_deg;
    sp["driving_speed_min_mps"] = p.driving_speed_min_mps;
    sp["driving_speed_max_mps"] = p.driving_speed_max_mps;
    sp["driving_accel_sd_mps2"] = p.driving_accel_sd_mps2;
    sp["driving_heading_sd_deg"] = p.driving_heading_sd_deg;
    sp["stationary_jitter_sd_m"] = p.stationary_jitter_sd_m;
    sp["stationary_jitter_max_m"] = p.stationary_jitter_max_m;
    sp["train_speed_min_mps"] = p.train_speed_min_mps;
    sp["train_speed_max_mps"] = p.train_speed_max_mps;
    sp["train_heading_sd_deg"] = p.train_heading_sd_deg;
    sp["gps_accuracy_min_m"] = p.gps_accuracy_min_m;
    sp["gps_accuracy_max_m"] = p.gps_accuracy_max_m;
    sp["hint_accuracy_slow_min_m"] = p.hint_accuracy_slow_min_m;
    sp["hint_accuracy_slow_max_m"] = p.hint_accuracy_slow_max_m;
    sp["hint_offset_slow_factor"] = p.hint_offset_slow_factor;
    sp["hint_accuracy_fast_min_m"] = p.hint_accuracy_fast_min_m;
    sp["hint_accuracy_fast_max_m"] = p.hint_accuracy_fast_max_m;
    sp["hint_offset_fast_factor"] = p.hint_offset_fast_factor;
    sp["hint_tail_prob"] = p.hint_tail_prob;
    sp["hint_tail_ratio_min"] = p.hint_tail_ratio_min;
    sp["hint_tail_ratio_max"] = p.hint_tail_ratio_max;
    sp["teleport_prefix_min_frac"] = p.teleport_prefix_min_frac;
    sp["teleport_prefix_max_frac"] = p.teleport_prefix_max_frac;
    sp["teleport_jump_min_km"] = p.teleport_jump_min_km;
    sp["teleport_jump_max_km"] = p.teleport_jump_max_km;
    sp["mock_accuracy_m"] = p.mock_accuracy_m;
    sp["drift_rate_min_mps"] = p.drift_rate_min_mps;
    sp["drift_rate_max_mps"] = p.drift_rate_max_mps;
    sp["drift_hint_accuracy_min_m"] = p.drift_hint_accuracy_min_m;
    sp["drift_hint_accuracy_max_m"] = p.drift_hint_accuracy_max_m;
    sp["drift_hint_offset_factor"] = p.drift_hint_offset_factor;
    sp["attack_accuracy_min_m"] = p.attack_accuracy_min_m;
    sp["attack_accuracy_max_m"] = p.attack_accuracy_max_m;
    sp["replay_offset_min_km"] = p.replay_offset_min_km;
    sp["replay_offset_max_km"] = p.replay_offset_max_km;
    sp["net_mismatch_ratio_min"] = p.net_mismatch_ratio_min;
    sp["net_mismatch_ratio_max"] = p.net_mismatch_ratio_max;
    j["scenario_params"] = std::move(sp);
    j["trace_count"] = corpus.traces.size();
    j["fix_count"] = fix_count;
    j["content_hash"] = content_hash;
    return j.dump(2) + "\n";
}

std::string save_corpus(const Corpus& corpus, const std::string& path) {
    const std::string bytes = serialize_corpus(corpus);
    const std::string hash = content_hash_of_bytes(bytes);
    write_file(path, bytes);
    write_file(path + ".manifest.json", manifest_json(corpus, hash));
    return hash;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw_io("read failed: " + path);
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw_io("cannot open for writing: " + path);
    out << contents;
    out.flush();
    if (!out) throw_io("write failed: " + path);
}

}  // namespace locgate
