#include "experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "trace_io.hpp"

namespace locgate {

namespace {

constexpr uint8_t kV1Mask = 0b00111;

std::string fmt_f(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::string signal_set_name(uint8_t mask) {
    std::string out;
    for (int i = 0; i < kSignalCount; ++i) {
        if (mask & (1u << i)) {
            if (!out.empty()) out += "+";
            out += "S" + std::to_string(i + 1);
        }
    }
    return out;
}

TraceLabel require_label(const TraceSignals& ts) { return ts.label; }

// Minimum trust over scored fixes under a mask; false if nothing scored.
bool min_trust_masked(const TraceSignals& ts, uint8_t mask, const ProfileTable& profiles,
                      double* out) {
    double mn = 1.0;
    bool any = false;
    for (const auto& sf : ts.fixes) {
        if (!sf.scored) continue;
        double t;
        if (!trust_masked(sf.signals, mask, profiles, &t)) continue;
        mn = std::min(mn, t);
        any = true;
    }
    *out = mn;
    return any;
}

bool min_trust_proportional(const TraceSignals& ts, uint8_t subset, const WeightProfile& base,
                            double* out) {
    double mn = 1.0;
    bool any = false;
    for (const auto& sf : ts.fixes) {
        if (!sf.scored) continue;
        double t;
        if (!trust_proportional(sf.signals, subset, base, &t)) continue;
        mn = std::min(mn, t);
        any = true;
    }
    *out = mn;
    return any;
}

std::vector<ScoredFix> masked_scored_fixes(const TraceSignals& ts, uint8_t mask,
                                           const ProfileTable& profiles) {
    std::vector<ScoredFix> out;
    out.reserve(ts.fixes.size());
    for (const auto& sf : ts.fixes) {
        ScoredFix m;
        if (sf.scored) {
            double t;
            if (trust_masked(sf.signals, mask, profiles, &t)) {
                m.scored = true;
                m.trust = t;
                m.signals = sf.signals;
            }
        }
        out.push_back(std::move(m));
    }
    return out;
}

std::string config_hash(const Config& cfg) { return content_hash_of_bytes(config_json(cfg)); }

struct ClassStats {
    double mean = 0.0, min = 1.0, p25 = 0.0, max = 0.0;
    size_t n = 0;
};

ClassStats pooled_stats(const std::vector<double>& values) {
    ClassStats s;
    if (values.empty()) return s;
    double sum = 0.0;
    s.min = values.front();
    s.max = values.front();
    for (double v : values) {
        sum += v;
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    s.mean = sum / static_cast<double>(values.size());
    s.p25 = percentile(values, 0.25);
    s.n = values.size();
    return s;
}

uint64_t oracle_stream_salt(const Config& cfg) {
    return cfg.corpus.master_seed ^ 0x09AC1E5EEDULL;
}

}  // namespace

ScoredCorpus score_corpus(const Corpus& corpus, const Config& cfg) {
    ScoredCorpus sc;
    sc.corpus_hash = corpus_content_hash(corpus);
    sc.traces.reserve(corpus.traces.size());
    for (const auto& trace : corpus.traces) {
        if (!trace.label) throw_argument("experiments require labeled traces");
        TraceSignals ts;
        ts.label = *trace.label;
        ts.scenario = trace.scenario;
        ts.fixes = score_trace(trace, cfg.signals, cfg.profiles);
        sc.traces.push_back(std::move(ts));
    }
    return sc;
}

bool trust_masked(const SignalVector& sv, uint8_t allowed_mask, const ProfileTable& profiles,
                  double* out) {
    const uint8_t avail = sv.mask() & allowed_mask;
    if (avail == 0) return false;
    SignalVector masked;
    for (int i = 0; i < kSignalCount; ++i)
        if (avail & (1u << i)) masked.set(static_cast<SignalId>(i), sv.get(static_cast<SignalId>(i)));
    *out = compose(masked, select_profile(avail, profiles)).value;
    return true;
}

bool trust_proportional(const SignalVector& sv, uint8_t subset_mask, const WeightProfile& base,
                        double* out) {
    const uint8_t avail = sv.mask() & subset_mask;
    if (avail == 0) return false;
    SignalVector masked;
    for (int i = 0; i < kSignalCount; ++i)
        if (avail & (1u << i)) masked.set(static_cast<SignalId>(i), sv.get(static_cast<SignalId>(i)));
    *out = compose(masked, redistribute_proportional(base, avail)).value;
    return true;
}

ExperimentReport run_detection(const ScoredCorpus& sc, const Config& cfg) {
    if (sc.traces.empty()) throw_argument("detection requires a non-empty corpus");

    ExperimentReport rep;
    rep.id = "detection";
    rep.corpus_hash = sc.corpus_hash;
    rep.config_hash = config_hash(cfg);

    // per-scenario pooled mean trust (full scorer)
    std::array<std::vector<double>, kScenarioCount> by_scenario;
    std::vector<double> legit_pool, spoofed_pool;
    for (const auto& ts : sc.traces) {
        for (const auto& sf : ts.fixes) {
            if (!sf.scored) continue;
            double t;
            if (!trust_masked(sf.signals, kAllSignalsMask, cfg.profiles, &t)) continue;
            if (ts.scenario) by_scenario[static_cast<int>(*ts.scenario)].push_back(t);
            (require_label(ts) == TraceLabel::legitimate ? legit_pool : spoofed_pool).push_back(t);
        }
    }

    Table scen;
    scen.name = "detection_scenarios";
    scen.headers = {"scenario", "label", "mean_trust", "fixes"};
    for (int i = 0; i < kScenarioCount; ++i) {
        const auto& pool = by_scenario[i];
        if (pool.empty()) continue;
        const ClassStats st = pooled_stats(pool);
        const auto s = static_cast<Scenario>(i);
        scen.rows.push_back({scenario_name(s), label_name(scenario_label(s)), fmt_f(st.mean),
                             std::to_string(st.n)});
    }
    rep.tables.push_back(std::move(scen));

    Table cls;
    cls.name = "detection_classes";
    cls.headers = {"class", "mean", "min", "p25", "max", "fixes"};
    for (int pass = 0; pass < 2; ++pass) {
        const auto& pool = pass == 0 ? legit_pool : spoofed_pool;
        if (pool.empty()) continue;
        const ClassStats st = pooled_stats(pool);
        cls.rows.push_back({pass == 0 ? "legitimate" : "spoofed", fmt_f(st.mean), fmt_f(st.min),
                            fmt_f(st.p25), fmt_f(st.max), std::to_string(st.n)});
    }
    rep.tables.push_back(std::move(cls));

    // V1 vs V2 ranking quality; suspicion = 1 - min trust (trace unit) or
    // 1 - trust (fix unit).
    Table met;
    met.name = "detection_metrics";
    met.headers = {"scorer", "auc_pr", "eer", "unit"};
    for (int pass = 0; pass < 2; ++pass) {
        const uint8_t mask = pass == 0 ? kV1Mask : kAllSignalsMask;
        std::vector<double> scores;
        std::vector<bool> positive;
        for (const auto& ts : sc.traces) {
            if (cfg.detection_unit == DetectionUnit::trace) {
                double mn;
                if (!min_trust_masked(ts, mask, cfg.profiles, &mn)) continue;
                scores.push_back(1.0 - mn);
                positive.push_back(require_label(ts) == TraceLabel::spoofed);
            } else {
                for (const auto& sf : ts.fixes) {
                    if (!sf.scored) continue;
                    double t;
                    if (!trust_masked(sf.signals, mask, cfg.profiles, &t)) continue;
                    scores.push_back(1.0 - t);
                    positive.push_back(require_label(ts) == TraceLabel::spoofed);
                }
            }
        }
        met.rows.push_back({pass == 0 ? "v1" : "v2", fmt_f(auc_pr(scores, positive)),
                            fmt_f(eer(scores, positive)),
                            cfg.detection_unit == DetectionUnit::trace ? "trace" : "fix"});
    }
    rep.tables.push_back(std::move(met));
    return rep;
}

AblationResult run_ablation(const ScoredCorpus& sc, const Config& cfg) {
    if (sc.traces.empty()) throw_argument("ablation requires a non-empty corpus");
    AblationResult res;
    res.subset_f1.assign(32, 0.0);

    Table subsets;
    subsets.name = "ablation_subsets";
    subsets.headers = {"signals", "size", "f1", "precision", "recall"};

    for (uint8_t mask = 1; mask <= kAllSignalsMask; ++mask) {
        std::vector<ScoredTrace> scored;
        scored.reserve(sc.traces.size());
        for (const auto& ts : sc.traces) {
            double mn;
            if (!min_trust_proportional(ts, mask, cfg.profiles.all_five, &mn)) continue;
            scored.push_back({require_label(ts), mn});
        }
        if (scored.empty()) throw_argument("ablation subset scored no traces");
        const Prf prf = precision_recall_f1(confusion(scored, cfg.thresholds.theta_p));
        res.subset_f1[mask] = prf.f1;
        subsets.rows.push_back({signal_set_name(mask), std::to_string(__builtin_popcount(mask)),
                                fmt_f(prf.f1), fmt_f(prf.precision), fmt_f(prf.recall)});
        if (__builtin_popcount(mask) == 2 && prf.f1 > res.best_pair_f1) {
            res.best_pair_f1 = prf.f1;
            res.best_pair_mask = mask;
        }
        if (mask != kAllSignalsMask && prf.f1 > res.best_sparse_f1) res.best_sparse_f1 = prf.f1;
    }
    res.full_f1 = res.subset_f1[kAllSignalsMask];

    // Exact Shapley over the 5 signals: phi_i = sum over subsets S of the
    // others, weighted |S|!(n-|S|-1)!/n!, of F1(S+i) - F1(S); F1(empty) := 0.
    const double fact[6] = {1, 1, 2, 6, 24, 120};
    for (int i = 0; i < kSignalCount; ++i) {
        const uint8_t bit = static_cast<uint8_t>(1u << i);
        double phi = 0.0;
        for (uint8_t sub = 0; sub <= kAllSignalsMask; ++sub) {
            if (sub & bit) continue;
            const int k = __builtin_popcount(sub);
            const double w = fact[k] * fact[kSignalCount - k - 1] / fact[kSignalCount];
            const double with = res.subset_f1[sub | bit];
            const double without = sub == 0 ? 0.0 : res.subset_f1[sub];
            phi += w * (with - without);
        }
        res.shapley[static_cast<size_t>(i)] = phi;
    }

    Table importance;
    importance.name = "ablation_importance";
    importance.headers = {"signal", "shapley_delta_f1"};
    // descending by contribution
    std::array<int, kSignalCount> order{0, 1, 2, 3, 4};
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return res.shapley[a] > res.shapley[b]; });
    for (int idx : order)
        importance.rows.push_back({"S" + std::to_string(idx + 1), fmt_f(res.shapley[idx])});

    Table summary;
    summary.name = "ablation_summary";
    summary.headers = {"item", "value"};
    summary.rows.push_back({"subsets_evaluated", std::to_string(31)});
    summary.rows.push_back({"full_set_f1", fmt_f(res.full_f1)});
    summary.rows.push_back({"best_pair", signal_set_name(res.best_pair_mask)});
    summary.rows.push_back({"best_pair_f1", fmt_f(res.best_pair_f1)});
    summary.rows.push_back({"best_sparse_f1", fmt_f(res.best_sparse_f1)});
    double shap_sum = 0.0;
    for (double v : res.shapley) shap_sum += v;
    summary.rows.push_back({"shapley_sum", fmt_f(shap_sum, 9)});

    res.report.id = "ablation";
    res.report.corpus_hash = sc.corpus_hash;
    res.report.config_hash = config_hash(cfg);
    res.report.tables.push_back(std::move(subsets));
    res.report.tables.push_back(std::move(importance));
    res.report.tables.push_back(std::move(summary));
    return res;
}

SweepResult run_sweep(const ScoredCorpus& sc, const Config& cfg,
                      const std::vector<double>& theta_ps) {
    if (sc.traces.empty()) throw_argument("sweep requires a non-empty corpus");
    SweepResult res;
    res.report.id = "sweep";
    res.report.corpus_hash = sc.corpus_hash;
    res.report.config_hash = config_hash(cfg);

    Table tab;
    tab.name = "sweep";
    tab.headers = {"theta_p", "mode",   "far",          "fdr",
                   "f1",      "precision", "step_up_volume"};

    for (double theta_p : theta_ps) {
        Thresholds th;
        th.theta_p = theta_p;
        th.theta_s = cfg.thresholds.theta_s;
        th.validate();
        for (int m = 0; m < 2; ++m) {
            const GateMode mode = m == 0 ? GateMode::binary : GateMode::graduated;
            std::vector<LabeledOutcome> outcomes;
            outcomes.reserve(sc.traces.size());
            long escalated = 0;
            for (size_t i = 0; i < sc.traces.size(); ++i) {
                const auto& ts = sc.traces[i];
                Rng oracle_rng(derive_seed(oracle_stream_salt(cfg), 0, i));
                const TraceOutcome out = run_trace_scored(
                    ts.fixes, ts.label, th, mode,
                    mode == GateMode::graduated ? &cfg.oracle : nullptr,
                    mode == GateMode::graduated ? &oracle_rng : nullptr);
                outcomes.push_back({ts.label, out.disposition});
                if (out.step_up_count > 0) ++escalated;
            }
            SweepRow row;
            row.theta_p = theta_p;
            row.mode = mode;
            row.metrics = far_fdr(outcomes);
            row.step_up_volume = static_cast<double>(escalated) / outcomes.size();
            tab.rows.push_back({fmt_f(theta_p, 2), mode == GateMode::binary ? "binary" : "graduated",
                                fmt_f(row.metrics.far), fmt_f(row.metrics.fdr),
                                fmt_f(row.metrics.f1), fmt_f(row.metrics.precision),
                                fmt_f(row.step_up_volume)});
            res.rows.push_back(row);
        }
    }
    res.report.tables.push_back(std::move(tab));
    return res;
}

Corpus degrade_gps(const Corpus& corpus, const Config& cfg) {
    Corpus out;
    out.config = corpus.config;
    out.traces = corpus.traces;
    for (size_t i = 0; i < out.traces.size(); ++i) {
        Rng rng(derive_seed(cfg.corpus.master_seed ^ 0xDE62ADEDULL, 0, i));
        for (auto& fix : out.traces[i].fixes) {
            const double orig_acc = fix.accuracy_m;
            fix.accuracy_m = orig_acc * 4.0;
            for (auto& s : fix.raw_fixes) s.accuracy_m *= 4.0;
            // positional noise matching the degraded accuracy, magnitude capped
            double n = rng.normal(0.0, orig_acc / 4.0);
            double e = rng.normal(0.0, orig_acc / 4.0);
            const double m = std::hypot(n, e);
            const double cap = orig_acc / 2.0;
            if (m > cap && m > 0.0) {
                n *= cap / m;
                e *= cap / m;
            }
            offset_meters(fix.lat, fix.lon, n, e, &fix.lat, &fix.lon);
        }
    }
    return out;
}

Corpus drop_alternate_fixes(const Corpus& corpus) {
    Corpus out;
    out.config = corpus.config;
    out.traces.reserve(corpus.traces.size());
    for (const auto& trace : corpus.traces) {
        Trace t;
        t.label = trace.label;
        t.scenario = trace.scenario;
        t.seed = trace.seed;
        for (size_t i = 0; i < trace.fixes.size(); i += 2) t.fixes.push_back(trace.fixes[i]);
        out.traces.push_back(std::move(t));
    }
    return out;
}

RobustnessResult run_robustness(const Corpus& corpus, const ScoredCorpus& sc, const Config& cfg) {
    RobustnessResult res;
    res.report.id = "robustness";
    res.report.corpus_hash = sc.corpus_hash;
    res.report.config_hash = config_hash(cfg);

    Table tab;
    tab.name = "robustness";
    tab.headers = {"degradation", "mean_trust_legit", "mean_trust_spoofed", "f1", "fdr"};

    struct Row {
        std::string name;
        const ScoredCorpus* scored;
        uint8_t mask;
    };

    // rescored variants for the corpus-transforming rows
    const Corpus degraded = degrade_gps(corpus, cfg);
    const ScoredCorpus degraded_sc = score_corpus(degraded, cfg);
    const Corpus intermittent = drop_alternate_fixes(corpus);
    const ScoredCorpus intermittent_sc = score_corpus(intermittent, cfg);

    const Row rows[] = {
        {"all_signals", &sc, kAllSignalsMask},
        {"no_network", &sc, static_cast<uint8_t>(kAllSignalsMask & ~signal_bit(SignalId::s5_network))},
        {"no_gps_fixes", &sc,
         static_cast<uint8_t>(kAllSignalsMask & ~signal_bit(SignalId::s4_fix_consistency))},
        {"v1_fallback", &sc, kV1Mask},
        {"degraded_gps", &degraded_sc, kAllSignalsMask},
        {"intermittent_fixes", &intermittent_sc, kAllSignalsMask},
    };

    for (const auto& r : rows) {
        double legit_sum = 0.0, spoof_sum = 0.0;
        size_t legit_n = 0, spoof_n = 0;
        std::vector<ScoredTrace> scored;
        std::vector<LabeledOutcome> outcomes;
        for (size_t i = 0; i < r.scored->traces.size(); ++i) {
            const auto& ts = r.scored->traces[i];
            for (const auto& sf : ts.fixes) {
                if (!sf.scored) continue;
                double t;
                if (!trust_masked(sf.signals, r.mask, cfg.profiles, &t)) continue;
                if (ts.label == TraceLabel::legitimate) {
                    legit_sum += t;
                    ++legit_n;
                } else {
                    spoof_sum += t;
                    ++spoof_n;
                }
            }
            double mn;
            if (min_trust_masked(ts, r.mask, cfg.profiles, &mn))
                scored.push_back({ts.label, mn});
            Rng oracle_rng(derive_seed(oracle_stream_salt(cfg), 1, i));
            const TraceOutcome out =
                run_trace_scored(masked_scored_fixes(ts, r.mask, cfg.profiles), ts.label,
                                 cfg.thresholds, GateMode::graduated, &cfg.oracle, &oracle_rng);
            outcomes.push_back({ts.label, out.disposition});
        }
        RobustnessRow row;
        row.name = r.name;
        row.mean_legit = legit_n ? legit_sum / legit_n : 0.0;
        row.mean_spoofed = spoof_n ? spoof_sum / spoof_n : 0.0;
        row.f1 = precision_recall_f1(confusion(scored, cfg.thresholds.theta_p)).f1;
        row.fdr = far_fdr(outcomes).fdr;
        res.rows.push_back(row);
        tab.rows.push_back({row.name, fmt_f(row.mean_legit), fmt_f(row.mean_spoofed),
                            fmt_f(row.f1), fmt_f(row.fdr)});
    }
    res.report.tables.push_back(std::move(tab));
    return res;
}

BenchResult bench_scoring(const Config& cfg, long iterations, uint8_t allowed_mask) {
    if (iterations < 10'000) throw_argument("benchmark requires at least 10,000 iterations");

    // Representative full-context fix: W prior fixes, a hint, a raw buffer.
    CorpusConfig small = cfg.corpus;
    small.traces_per_scenario = 1;
    small.fixes_per_trace = std::max(cfg.signals.history_window + 2, 12);
    const Trace trace = generate_trace(Scenario::walking, 7, small);
    std::vector<Fix> history(trace.fixes.begin(), trace.fixes.end() - 1);
    const size_t w = static_cast<size_t>(cfg.signals.history_window);
    if (history.size() > w) history.erase(history.begin(), history.end() - w);
    const Fix& cur = trace.fixes.back();
    std::optional<NetworkHint> hint;
    for (const auto& f : trace.fixes)
        if (f.net_hint) hint = f.net_hint;

    SignalContext ctx;
    ctx.history = std::span<const Fix>(history);
    ctx.net_hint = hint;
    ctx.raw_fixes = std::span<const RawSample>(cur.raw_fixes);

    std::vector<double> ns;
    ns.reserve(iterations);
    double sink = 0.0;
    for (long i = 0; i < iterations; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        const SignalVector sv = evaluate_all(cur, ctx, cfg.signals, allowed_mask);
        const TrustScore ts = compose(sv, select_profile(sv.mask(), cfg.profiles));
        const auto t1 = std::chrono::steady_clock::now();
        sink += ts.value;
        ns.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
    }
    if (sink < 0) throw_state("unreachable");  // keep the loop body live

    const long warmup = iterations / 10;
    std::vector<double> measured(ns.begin() + warmup, ns.end());

    BenchResult res;
    res.iterations = iterations - warmup;
    res.median_us = percentile(measured, 0.50) / 1000.0;
    res.p99_us = percentile(measured, 0.99) / 1000.0;
    res.report.id = "bench";
    res.report.corpus_hash = "n/a";
    res.report.config_hash = config_hash(cfg);
    Table tab;
    tab.name = "bench";
    tab.headers = {"signals", "iterations", "median_us", "p99_us"};
    tab.rows.push_back({signal_set_name(allowed_mask), std::to_string(res.iterations),
                        fmt_f(res.median_us, 3), fmt_f(res.p99_us, 3)});
    res.report.tables.push_back(std::move(tab));
    return res;
}

void write_report_files(const ExperimentReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw_io("cannot create output directory " + out_dir + ": " + ec.message());

    const std::string prelude = "# experiment=" + report.id + "\n# corpus_hash=" +
                                report.corpus_hash + "\n# config_hash=" + report.config_hash +
                                "\n";

    std::string md = "# " + report.id + "\n\n- corpus_hash: `" + report.corpus_hash +
                     "`\n- config_hash: `" + report.config_hash + "`\n";
    for (const auto& tab : report.tables) {
        std::string csv = prelude;
        for (size_t i = 0; i < tab.headers.size(); ++i) {
            if (i) csv += ",";
            csv += tab.headers[i];
        }
        csv += "\n";
        for (const auto& row : tab.rows) {
            for (size_t i = 0; i < row.size(); ++i) {
                if (i) csv += ",";
                csv += row[i];
            }
            csv += "\n";
        }
        write_file((fs::path(out_dir) / (tab.name + ".csv")).string(), csv);

        md += "\n## " + tab.name + "\n\n|";
        for (const auto& h : tab.headers) md += " " + h + " |";
        md += "\n|";
        for (size_t i = 0; i < tab.headers.size(); ++i) md += " --- |";
        md += "\n";
        for (const auto& row : tab.rows) {
            md += "|";
            for (const auto& cell : row) md += " " + cell + " |";
            md += "\n";
        }
    }
    write_file((fs::path(out_dir) / (report.id + ".md")).string(), md);
}

void run_experiment(const std::string& name, const Corpus& corpus, const Config& cfg,
                    const std::string& out_dir) {
    if (name == "bench") {
        write_report_files(bench_scoring(cfg, 100'000).report, out_dir);
        return;
    }
    const ScoredCorpus sc = score_corpus(corpus, cfg);
    if (name == "detection") {
        write_report_files(run_detection(sc, cfg), out_dir);
    } else if (name == "ablation") {
        write_report_files(run_ablation(sc, cfg).report, out_dir);
    } else if (name == "sweep") {
        write_report_files(run_sweep(sc, cfg).report, out_dir);
    } else if (name == "robustness") {
        write_report_files(run_robustness(corpus, sc, cfg).report, out_dir);
    } else {
        throw_argument("unknown experiment '" + name +
                       "' (expected detection, ablation, sweep, robustness or bench)");
    }
}

}  // namespace locgate
