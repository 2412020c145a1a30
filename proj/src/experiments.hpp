#pragma once

// Experiment suite: detection quality, signal ablation with exact Shapley
// attribution, binary-vs-graduated threshold sweep, degradation robustness,
// and the scoring microbenchmark. Reports are deterministic for a given
// corpus manifest and configuration (benchmark timings excepted).

#include <string>
#include <vector>

#include "config.hpp"
#include "metrics.hpp"

namespace locgate {

// Per-fix signal vectors for a whole corpus, computed once; every study
// derives its scores from these by masking or reweighting.
struct TraceSignals {
    TraceLabel label = TraceLabel::legitimate;
    std::optional<Scenario> scenario;
    std::vector<ScoredFix> fixes;
};

struct ScoredCorpus {
    std::vector<TraceSignals> traces;
    std::string corpus_hash;
};

ScoredCorpus score_corpus(const Corpus& corpus, const Config& cfg);

// Trust under a channel mask (predefined-profile selection on what remains),
// or under ablation-style proportional reweighting. Returns false when no
// allowed signal is present for the fix.
bool trust_masked(const SignalVector& sv, uint8_t allowed_mask, const ProfileTable& profiles,
                  double* out);
bool trust_proportional(const SignalVector& sv, uint8_t subset_mask, const WeightProfile& base,
                        double* out);

struct Table {
    std::string name;  // file stem for the CSV
    std::vector<std::string> headers;
    std::vector<std::vector<std::string>> rows;
};

struct ExperimentReport {
    std::string id;
    std::string corpus_hash;
    std::string config_hash;
    std::vector<Table> tables;
};

// Per-scenario mean trust, per-class pooled score stats, and AUC-PR / EER
// for the three-signal (V1) and full (V2) scorers.
ExperimentReport run_detection(const ScoredCorpus& sc, const Config& cfg);

struct AblationResult {
    ExperimentReport report;
    std::vector<double> subset_f1;   // indexed by signal mask (1..31)
    std::array<double, kSignalCount> shapley{};
    uint8_t best_pair_mask = 0;
    double best_pair_f1 = 0.0;
    double full_f1 = 0.0;
    double best_sparse_f1 = 0.0;  // best over proper subsets
};

// All 31 non-empty subsets with proportionally redistributed weights,
// classified at theta_p; exact Shapley contribution per signal with the
// empty-set value fixed at 0.
AblationResult run_ablation(const ScoredCorpus& sc, const Config& cfg);

struct SweepRow {
    double theta_p = 0.0;
    GateMode mode = GateMode::binary;
    GateMetrics metrics;
    double step_up_volume = 0.0;  // fraction of traces escalated at least once
};

struct SweepResult {
    ExperimentReport report;
    std::vector<SweepRow> rows;
};

SweepResult run_sweep(const ScoredCorpus& sc, const Config& cfg,
                      const std::vector<double>& theta_ps = {0.80, 0.90, 0.95});

struct RobustnessRow {
    std::string name;
    double mean_legit = 0.0;
    double mean_spoofed = 0.0;
    double f1 = 0.0;
    double fdr = 0.0;
};

struct RobustnessResult {
    ExperimentReport report;
    std::vector<RobustnessRow> rows;
};

// Six scenarios at the configured thresholds: full signals, no network, no
// raw fixes, V1 fallback, degraded GPS (accuracy x4 plus matching positional
// noise), intermittent fixes (every other fix dropped).
RobustnessResult run_robustness(const Corpus& corpus, const ScoredCorpus& sc, const Config& cfg);

Corpus degrade_gps(const Corpus& corpus, const Config& cfg);
Corpus drop_alternate_fixes(const Corpus& corpus);

struct BenchResult {
    ExperimentReport report;
    double median_us = 0.0;
    double p99_us = 0.0;
    long iterations = 0;
};

// Wall-clock per evaluate+compose on a full-context fix; the first tenth of
// the iterations is warm-up and excluded.
BenchResult bench_scoring(const Config& cfg, long iterations,
                          uint8_t allowed_mask = kAllSignalsMask);

// Dispatcher used by the CLI: name in {detection, ablation, sweep,
// robustness, bench}; writes CSV + markdown files into out_dir.
void run_experiment(const std::string& name, const Corpus& corpus, const Config& cfg,
                    const std::string& out_dir);

void write_report_files(const ExperimentReport& report, const std::string& out_dir);

}  // namespace locgate
