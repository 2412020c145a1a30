#pragma once

// Deterministic synthetic trace corpus: four legitimate motion profiles and
// six spoofing attacks, 1,000 traces each by default, all derived from one
// master seed. Regeneration is bit-identical for a given config.

#include <cstdint>

#include "geo.hpp"

namespace locgate {

// Motion, noise and attack dials. The defaults were chosen so the scenario
// score distributions separate the way the gate studies expect (legitimate
// floor well above the deny band, drift/nearby-style attacks evading the
// heuristics, teleportation condemned at the transition).
struct ScenarioParams {
    // legitimate motion
    double walking_speed_mean_mps = 1.4;
    double walking_speed_sd_mps = 0.3;
    double walking_heading_sd_deg = 25.0;
    double driving_speed_min_mps = 5.0;
    double driving_speed_max_mps = 30.0;
    double driving_accel_sd_mps2 = 0.8;
    double driving_heading_sd_deg = 8.0;
    double stationary_jitter_sd_m = 1.2;
    double stationary_jitter_max_m = 3.0;
    double train_speed_min_mps = 20.0;
    double train_speed_max_mps = 40.0;
    double train_heading_sd_deg = 2.0;
    // honest reporting
    double gps_accuracy_min_m = 5.0;
    double gps_accuracy_max_m = 20.0;
    // network scans: pedestrian contexts see coarse cell-grade hints, vehicle
    // contexts see denser infrastructure (smaller radius, tighter offset)
    double hint_accuracy_slow_min_m = 100.0;
    double hint_accuracy_slow_max_m = 300.0;
    double hint_offset_slow_factor = 1.5;
    double hint_accuracy_fast_min_m = 60.0;
    double hint_accuracy_fast_max_m = 100.0;
    double hint_offset_fast_factor = 1.0;
    // rare mislocated scan (bad radio-map entry) on pedestrian traces
    double hint_tail_prob = 0.015;
    double hint_tail_ratio_min = 4.8;
    double hint_tail_ratio_max = 6.8;
    // attacks
    double teleport_prefix_min_frac = 0.22;
    double teleport_prefix_max_frac = 0.38;
    double teleport_jump_min_km = 800.0;
    double teleport_jump_max_km = 8000.0;
    double mock_accuracy_m = 0.01;
    double drift_rate_min_mps = 1.4;
    double drift_rate_max_mps = 2.0;
    double drift_hint_accuracy_min_m = 20.0;
    double drift_hint_accuracy_max_m = 30.0;
    double drift_hint_offset_factor = 0.5;
    double attack_accuracy_min_m = 0.005;
    double attack_accuracy_max_m = 0.5;
    double replay_offset_min_km = 2.0;
    double replay_offset_max_km = 40.0;
    double net_mismatch_ratio_min = 20.0;
    double net_mismatch_ratio_max = 100.0;
};

struct CorpusConfig {
    uint64_t master_seed = 1729;
    int traces_per_scenario = 1000;
    int fixes_per_trace = 60;
    int64_t fix_interval_ms = 1000;
    int hint_interval_fixes = 7;  // network scan cadence, in fixes
    int raw_samples_per_fix = 4;
    ScenarioParams params;

    void validate() const;
};

struct Corpus {
    std::vector<Trace> traces;
    CorpusConfig config;
};

// Deterministic function of (scenario, seed, config).
Trace generate_trace(Scenario scenario, uint64_t seed, const CorpusConfig& cfg);

// All ten scenarios, traces_per_scenario each, per-trace seeds derived from
// the master seed and the (scenario, trace) indices.
Corpus generate_corpus(const CorpusConfig& cfg);

}  // namespace locgate
