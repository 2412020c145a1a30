#include "tracegen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rng.hpp"

namespace locgate {

void CorpusConfig::validate() const {
    if (traces_per_scenario < 1) throw_validation("traces_per_scenario must be >= 1");
    if (fixes_per_trace < 2) throw_validation("fixes_per_trace must be >= 2");
    if (fix_interval_ms <= 0) throw_validation("fix_interval_ms must be > 0");
    if (hint_interval_fixes < 1) throw_validation("hint_interval_fixes must be >= 1");
    if (raw_samples_per_fix < 0) throw_validation("raw_samples_per_fix must be >= 0");
}

namespace {

constexpr int64_t kEpochMs = 1'700'000'000'000;
constexpr double kTwoPi = 2.0 * kPi;

// Serialization precision; values are quantized at generation time so the
// in-memory corpus and its JSONL form are identical.
double q7(double v) { return std::round(v * 1e7) / 1e7; }
double q4(double v) { return std::round(v * 1e4) / 1e4; }

struct LatLon {
    double lat = 0.0;
    double lon = 0.0;
};

LatLon move(const LatLon& p, double north_m, double east_m) {
    LatLon out;
    offset_meters(p.lat, p.lon, north_m, east_m, &out.lat, &out.lon);
    return out;
}

// Gaussian planar offset with the magnitude capped (keeps implied speeds
// inside the knees that legitimate traffic must not trip).
LatLon jitter(Rng& rng, const LatLon& p, double sd, double cap) {
    double n = rng.normal(0.0, sd);
    double e = rng.normal(0.0, sd);
    const double m = std::hypot(n, e);
    if (m > cap && m > 0.0) {
        n *= cap / m;
        e *= cap / m;
    }
    return move(p, n, e);
}

LatLon polar_offset(Rng& rng, const LatLon& p, double magnitude) {
    const double a = rng.uniform(0.0, kTwoPi);
    return move(p, magnitude * std::cos(a), magnitude * std::sin(a));
}

enum class MotionKind { walking, driving, stationary, train };

// True positions at each fix instant.
std::vector<LatLon> simulate_motion(Rng& rng, MotionKind kind, const ScenarioParams& p, int n,
                                    double dt_s, LatLon start) {
    std::vector<LatLon> path;
    path.reserve(n);
    double heading = rng.uniform(0.0, kTwoPi);
    double speed = 0.0;
    switch (kind) {
        case MotionKind::walking: speed = p.walking_speed_mean_mps; break;
        case MotionKind::driving: speed = rng.uniform(p.driving_speed_min_mps, p.driving_speed_max_mps); break;
        case MotionKind::stationary: speed = 0.0; break;
        case MotionKind::train: speed = rng.uniform(p.train_speed_min_mps, p.train_speed_max_mps); break;
    }
    LatLon pos = start;
    for (int i = 0; i < n; ++i) {
        if (i > 0) {
            switch (kind) {
                case MotionKind::walking:
                    speed = std::clamp(rng.normal(p.walking_speed_mean_mps, p.walking_speed_sd_mps),
                                       0.05, p.walking_speed_mean_mps + 4.0 * p.walking_speed_sd_mps);
                    heading += rng.normal(0.0, p.walking_heading_sd_deg * kDegToRad);
                    break;
                case MotionKind::driving:
                    speed = std::clamp(speed + rng.normal(0.0, p.driving_accel_sd_mps2 * dt_s),
                                       p.driving_speed_min_mps, p.driving_speed_max_mps);
                    heading += rng.normal(0.0, p.driving_heading_sd_deg * kDegToRad);
                    break;
                case MotionKind::stationary:
                    break;
                case MotionKind::train:
                    speed = std::clamp(speed + rng.normal(0.0, 0.3 * dt_s), p.train_speed_min_mps,
                                       p.train_speed_max_mps);
                    heading += rng.normal(0.0, p.train_heading_sd_deg * kDegToRad);
                    break;
            }
            const double d = speed * dt_s;
            pos = move(pos, d * std::cos(heading), d * std::sin(heading));
        }
        if (kind == MotionKind::stationary) {
            LatLon jittered = jitter(rng, start, p.stationary_jitter_sd_m, p.stationary_jitter_max_m);
            path.push_back(jittered);
        } else {
            path.push_back(pos);
        }
    }
    return path;
}

std::string make_session_id(Scenario scenario, uint64_t seed) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s-%016llx", scenario_name(scenario),
                  static_cast<unsigned long long>(seed));
    return buf;
}

struct HintStyle {
    double acc_min = 0.0;
    double acc_max = 0.0;
    double offset_factor = 0.0;
};

// Everything a scenario can vary about the emitted trace. The honest
// defaults produce a clean legitimate trace; attacks override pieces.
struct EmitPlan {
    // reported position source: true path unless overridden
    const std::vector<LatLon>* reported_path = nullptr;  // defaults to true path
    // hints are generated from the true path (the device's physical location)
    HintStyle hints;
    int tail_scan_fix = -1;   // fix index of a mislocated scan, -1 for none
    double tail_ratio = 0.0;  // offset as a multiple of hint accuracy
    double hint_ratio_min = 0.0;  // constant displacement attack; 0 = honest
    double hint_ratio_max = 0.0;
    // accuracy field
    bool attack_accuracy = false;  // draw accuracy from the attack range
    int accuracy_from_fix = 0;     // attack applies at or after this index
    bool mock_exact = false;       // mock fixes: no GPS noise on the report
    int mock_from_fix = 1 << 30;
    double mock_accuracy = 0.0;
    bool zero_scatter_raw = false;  // raw buffer collapses onto the report
    int zero_scatter_from_fix = 0;
};

Trace emit(Rng& rng, Scenario scenario, uint64_t seed, const CorpusConfig& cfg,
           const std::vector<LatLon>& true_path, const EmitPlan& plan) {
    const ScenarioParams& p = cfg.params;
    const int n = cfg.fixes_per_trace;
    const std::vector<LatLon>& reported_src = plan.reported_path ? *plan.reported_path : true_path;

    Trace trace;
    trace.label = scenario_label(scenario);
    trace.scenario = scenario;
    trace.seed = seed;
    trace.fixes.reserve(n);
    const std::string sid = make_session_id(scenario, seed);

    for (int i = 0; i < n; ++i) {
        Fix fix;
        fix.session_id = sid;
        fix.t_ms = kEpochMs + static_cast<int64_t>(i) * cfg.fix_interval_ms;

        const bool mock = plan.mock_exact && i >= plan.mock_from_fix;
        double acc;
        if (mock) {
            acc = plan.mock_accuracy;
        } else if (plan.attack_accuracy && i >= plan.accuracy_from_fix) {
            acc = rng.uniform(p.attack_accuracy_min_m, p.attack_accuracy_max_m);
        } else {
            acc = rng.uniform(p.gps_accuracy_min_m, p.gps_accuracy_max_m);
        }

        LatLon reported = reported_src[i];
        if (!mock) reported = jitter(rng, reported, acc / 6.0, acc / 4.0);
        fix.lat = q7(reported.lat);
        fix.lon = q7(reported.lon);
        fix.accuracy_m = q4(acc);

        const bool collapse = (plan.zero_scatter_raw && i >= plan.zero_scatter_from_fix) || mock;
        for (int s = 0; s < cfg.raw_samples_per_fix; ++s) {
            RawSample sample;
            LatLon sp;
            double sacc;
            if (collapse) {
                sp = {fix.lat, fix.lon};
                sacc = mock ? plan.mock_accuracy : acc;
            } else {
                sp = jitter(rng, reported, acc / 2.0, acc * 1.25);
                sacc = acc * rng.uniform(0.8, 1.2);
            }
            sample.lat = q7(sp.lat);
            sample.lon = q7(sp.lon);
            sample.accuracy_m = q4(sacc);
            fix.raw_fixes.push_back(sample);
        }

        if (i % cfg.hint_interval_fixes == 0) {
            const double hacc = rng.uniform(plan.hints.acc_min, plan.hints.acc_max);
            double offset;
            if (plan.hint_ratio_max > 0.0) {
                offset = rng.uniform(plan.hint_ratio_min, plan.hint_ratio_max) * hacc;
            } else if (i == plan.tail_scan_fix) {
                offset = plan.tail_ratio * hacc;
            } else {
                offset = rng.uniform(0.0, plan.hints.offset_factor) * hacc;
            }
            const LatLon hp = polar_offset(rng, true_path[i], offset);
            NetworkHint hint;
            hint.lat = q7(hp.lat);
            hint.lon = q7(hp.lon);
            hint.accuracy_m = q4(hacc);
            fix.net_hint = hint;
        }
        trace.fixes.push_back(std::move(fix));
    }
    return trace;
}

LatLon random_start(Rng& rng) {
    return {rng.uniform(-55.0, 55.0), rng.uniform(-170.0, 170.0)};
}

HintStyle slow_hints(const ScenarioParams& p) {
    return {p.hint_accuracy_slow_min_m, p.hint_accuracy_slow_max_m, p.hint_offset_slow_factor};
}

HintStyle fast_hints(const ScenarioParams& p) {
    return {p.hint_accuracy_fast_min_m, p.hint_accuracy_fast_max_m, p.hint_offset_fast_factor};
}

// Picks the fix index of a mislocated scan, or -1. Drawn up front so the
// draw sequence is independent of whether a tail occurs.
int draw_tail_scan(Rng& rng, const CorpusConfig& cfg, double* ratio) {
    const ScenarioParams& p = cfg.params;
    const bool tail = rng.bernoulli(p.hint_tail_prob);
    *ratio = rng.uniform(p.hint_tail_ratio_min, p.hint_tail_ratio_max);
    const int scans_after_first = (cfg.fixes_per_trace - 1) / cfg.hint_interval_fixes;
    if (!tail || scans_after_first < 1) return -1;
    const int pick = 1 + static_cast<int>(rng.next_u64() % static_cast<uint64_t>(scans_after_first));
    return pick * cfg.hint_interval_fixes;
}

Trace gen_legit(Scenario scenario, MotionKind kind, uint64_t seed, const CorpusConfig& cfg) {
    Rng rng(seed);
    const double dt = static_cast<double>(cfg.fix_interval_ms) / 1000.0;
    const bool slow = kind == MotionKind::walking || kind == MotionKind::stationary;
    EmitPlan plan;
    plan.hints = slow ? slow_hints(cfg.params) : fast_hints(cfg.params);
    if (slow) plan.tail_scan_fix = draw_tail_scan(rng, cfg, &plan.tail_ratio);
    const auto path = simulate_motion(rng, kind, cfg.params, cfg.fixes_per_trace, dt, random_start(rng));
    return emit(rng, scenario, seed, cfg, path, plan);
}

Trace gen_teleport(Scenario scenario, uint64_t seed, const CorpusConfig& cfg, bool compound) {
    Rng rng(seed);
    const ScenarioParams& p = cfg.params;
    const int n = cfg.fixes_per_trace;
    const double dt = static_cast<double>(cfg.fix_interval_ms) / 1000.0;

    const double frac = rng.uniform(p.teleport_prefix_min_frac, p.teleport_prefix_max_frac);
    const int prefix = std::clamp(static_cast<int>(std::lround(frac * n)), 2, n - 2);
    const double jump_m = rng.uniform(p.teleport_jump_min_km, p.teleport_jump_max_km) * 1000.0;
    const double bearing = rng.uniform(0.0, kTwoPi);

    // The device itself keeps walking at the origin; hints track it.
    const auto true_path = simulate_motion(rng, MotionKind::walking, p, n, dt, random_start(rng));

    // Reported path: honest prefix, then the mock location settling far away.
    std::vector<LatLon> reported = true_path;
    LatLon dest;
    destination_point(true_path[prefix - 1].lat, true_path[prefix - 1].lon, bearing, jump_m,
                      &dest.lat, &dest.lon);
    double heading = rng.uniform(0.0, kTwoPi);
    LatLon pos = dest;
    for (int i = prefix; i < n; ++i) {
        if (i > prefix) {
            const double speed = std::clamp(rng.normal(0.5, 0.2), 0.0, 1.5);
            heading += rng.normal(0.0, 20.0 * kDegToRad);
            pos = move(pos, speed * dt * std::cos(heading), speed * dt * std::sin(heading));
        }
        reported[i] = pos;
    }

    EmitPlan plan;
    plan.reported_path = &reported;
    plan.hints = slow_hints(p);
    if (compound) {
        // jump + accuracy attack in the mock segment + hints displaced throughout
        plan.attack_accuracy = true;
        plan.accuracy_from_fix = prefix;
        plan.zero_scatter_raw = true;
        plan.zero_scatter_from_fix = prefix;
        plan.hint_ratio_min = p.net_mismatch_ratio_min;
        plan.hint_ratio_max = p.net_mismatch_ratio_max;
    } else {
        plan.mock_exact = true;
        plan.mock_from_fix = prefix;
        plan.mock_accuracy = p.mock_accuracy_m;
    }
    return emit(rng, scenario, seed, cfg, true_path, plan);
}

Trace gen_drift(uint64_t seed, const CorpusConfig& cfg) {
    Rng rng(seed);
    const ScenarioParams& p = cfg.params;
    const int n = cfg.fixes_per_trace;
    const double dt = static_cast<double>(cfg.fix_interval_ms) / 1000.0;

    const double rate = rng.uniform(p.drift_rate_min_mps, p.drift_rate_max_mps);
    const double bearing = rng.uniform(0.0, kTwoPi);
    const auto true_path = simulate_motion(rng, MotionKind::walking, p, n, dt, random_start(rng));

    std::vector<LatLon> reported = true_path;
    for (int i = 0; i < n; ++i) {
        const double off = rate * dt * static_cast<double>(i);
        reported[i] = move(true_path[i], off * std::cos(bearing), off * std::sin(bearing));
    }

    EmitPlan plan;
    plan.reported_path = &reported;
    plan.hints = {p.drift_hint_accuracy_min_m, p.drift_hint_accuracy_max_m,
                  p.drift_hint_offset_factor};
    return emit(rng, Scenario::drift, seed, cfg, true_path, plan);
}

Trace gen_accuracy(uint64_t seed, const CorpusConfig& cfg) {
    Rng rng(seed);
    EmitPlan plan;
    plan.hints = slow_hints(cfg.params);
    plan.attack_accuracy = true;
    plan.zero_scatter_raw = true;
    const double dt = static_cast<double>(cfg.fix_interval_ms) / 1000.0;
    const auto path =
        simulate_motion(rng, MotionKind::walking, cfg.params, cfg.fixes_per_trace, dt, random_start(rng));
    return emit(rng, Scenario::accuracy, seed, cfg, path, plan);
}

Trace gen_replay(uint64_t seed, const CorpusConfig& cfg) {
    Rng rng(seed);
    const ScenarioParams& p = cfg.params;
    const int n = cfg.fixes_per_trace;
    const double dt = static_cast<double>(cfg.fix_interval_ms) / 1000.0;

    // The device actually sits still; the replayed segment is an honest-looking
    // walk recorded somewhere else entirely.
    const LatLon base = random_start(rng);
    const auto true_path = simulate_motion(rng, MotionKind::stationary, p, n, dt, base);
    const double off_m = rng.uniform(p.replay_offset_min_km, p.replay_offset_max_km) * 1000.0;
    const double bearing = rng.uniform(0.0, kTwoPi);
    LatLon replay_start;
    destination_point(base.lat, base.lon, bearing, off_m, &replay_start.lat, &replay_start.lon);
    const auto replay_path = simulate_motion(rng, MotionKind::walking, p, n, dt, replay_start);

    EmitPlan plan;
    plan.reported_path = &replay_path;
    plan.hints = slow_hints(p);
    plan.zero_scatter_raw = true;  // re-emitted buffer has no fresh samples
    return emit(rng, Scenario::replay, seed, cfg, true_path, plan);
}

Trace gen_net_mismatch(uint64_t seed, const CorpusConfig& cfg) {
    Rng rng(seed);
    const ScenarioParams& p = cfg.params;
    EmitPlan plan;
    plan.hints = slow_hints(p);
    plan.hint_ratio_min = p.net_mismatch_ratio_min;
    plan.hint_ratio_max = p.net_mismatch_ratio_max;
    const double dt = static_cast<double>(cfg.fix_interval_ms) / 1000.0;
    const auto path =
        simulate_motion(rng, MotionKind::walking, p, cfg.fixes_per_trace, dt, random_start(rng));
    return emit(rng, Scenario::net_mismatch, seed, cfg, path, plan);
}

}  // namespace

Trace generate_trace(Scenario scenario, uint64_t seed, const CorpusConfig& cfg) {
    cfg.validate();
    switch (scenario) {
        case Scenario::walking: return gen_legit(scenario, MotionKind::walking, seed, cfg);
        case Scenario::driving: return gen_legit(scenario, MotionKind::driving, seed, cfg);
        case Scenario::stationary: return gen_legit(scenario, MotionKind::stationary, seed, cfg);
        case Scenario::train: return gen_legit(scenario, MotionKind::train, seed, cfg);
        case Scenario::teleportation: return gen_teleport(scenario, seed, cfg, false);
        case Scenario::compound: return gen_teleport(scenario, seed, cfg, true);
        case Scenario::drift: return gen_drift(seed, cfg);
        case Scenario::accuracy: return gen_accuracy(seed, cfg);
        case Scenario::replay: return gen_replay(seed, cfg);
        case Scenario::net_mismatch: return gen_net_mismatch(seed, cfg);
    }
    throw_argument("unknown scenario");
}

Corpus generate_corpus(const CorpusConfig& cfg) {
    cfg.validate();
    Corpus corpus;
    corpus.config = cfg;
    corpus.traces.reserve(static_cast<size_t>(kScenarioCount) * cfg.traces_per_scenario);
    for (int si = 0; si < kScenarioCount; ++si) {
        for (int ti = 0; ti < cfg.traces_per_scenario; ++ti) {
            const uint64_t seed = derive_seed(cfg.master_seed, static_cast<uint64_t>(si),
                                              static_cast<uint64_t>(ti));
            corpus.traces.push_back(generate_trace(static_cast<Scenario>(si), seed, cfg));
        }
    }
    return corpus;
}

}  // namespace locgate
