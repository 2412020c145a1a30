// C API implementation: thin handle/error-code layer over the core.

#include "locgate.h"

#include <cstring>
#include <string>

#include "config.hpp"
#include "experiments.hpp"
#include "trace_io.hpp"

using namespace locgate;

namespace {

thread_local std::string g_last_error = "";

locgate_status kind_to_status(ErrorKind k) {
    switch (k) {
        case ErrorKind::validation: return LOCGATE_E_VALIDATION;
        case ErrorKind::parse: return LOCGATE_E_PARSE;
        case ErrorKind::io: return LOCGATE_E_IO;
        case ErrorKind::argument: return LOCGATE_E_ARG;
        case ErrorKind::state: return LOCGATE_E_STATE;
    }
    return LOCGATE_E_STATE;
}

template <typename Fn>
locgate_status guarded(Fn&& fn) {
    try {
        fn();
        return LOCGATE_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return kind_to_status(e.kind());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return LOCGATE_E_STATE;
    }
}

locgate_action to_c_action(GateAction a) {
    switch (a) {
        case GateAction::proceed: return LOCGATE_ACTION_PROCEED;
        case GateAction::step_up: return LOCGATE_ACTION_STEP_UP;
        case GateAction::deny: return LOCGATE_ACTION_DENY;
        case GateAction::unscored_proceed: return LOCGATE_ACTION_UNSCORED_PROCEED;
    }
    return LOCGATE_ACTION_DENY;
}

locgate_latch to_c_latch(LatchState l) {
    switch (l) {
        case LatchState::none: return LOCGATE_LATCH_NONE;
        case LatchState::step_up: return LOCGATE_LATCH_STEP_UP;
        case LatchState::deny: return LOCGATE_LATCH_DENY;
    }
    return LOCGATE_LATCH_NONE;
}

locgate_disposition to_c_disposition(Disposition d) {
    switch (d) {
        case Disposition::accepted: return LOCGATE_DISP_ACCEPTED;
        case Disposition::denied: return LOCGATE_DISP_DENIED;
        case Disposition::stepped_up_then_accepted: return LOCGATE_DISP_STEPPED_UP_THEN_ACCEPTED;
        case Disposition::stepped_up_then_denied: return LOCGATE_DISP_STEPPED_UP_THEN_DENIED;
        case Disposition::stepped_up_unresolved: return LOCGATE_DISP_STEPPED_UP_UNRESOLVED;
    }
    return LOCGATE_DISP_DENIED;
}

Fix to_cpp_fix(const locgate_fix& in, const std::string& session_id) {
    Fix fix;
    fix.session_id = session_id;
    fix.t_ms = in.t_ms;
    fix.lat = in.lat;
    fix.lon = in.lon;
    fix.accuracy_m = in.accuracy_m;
    if (in.net_hint)
        fix.net_hint = NetworkHint{in.net_hint->lat, in.net_hint->lon, in.net_hint->accuracy_m};
    for (size_t i = 0; i < in.raw_sample_count; ++i) {
        const auto& s = in.raw_samples[i];
        fix.raw_fixes.push_back({s.lat, s.lon, s.accuracy_m});
    }
    return fix;
}

}  // namespace

struct locgate_config {
    Config cfg;
};

struct locgate_corpus {
    Corpus corpus;
};

struct locgate_session {
    Session session;
};

struct locgate_replay {
    struct TraceResult {
        std::string session_id;
        TraceOutcome outcome;
    };
    std::vector<TraceResult> traces;
};

extern "C" {

const char* locgate_version(void) { return "0.1.0"; }

const char* locgate_last_error(void) { return g_last_error.c_str(); }

locgate_config* locgate_config_new(void) { return new locgate_config{}; }

locgate_status locgate_config_load(const char* path, locgate_config** out) {
    return guarded([&] {
        if (!path || !out) throw_argument("null argument");
        auto* handle = new locgate_config{};
        try {
            handle->cfg = load_config_file(path);
        } catch (...) {
            delete handle;
            throw;
        }
        *out = handle;
    });
}

void locgate_config_free(locgate_config* cfg) { delete cfg; }

locgate_status locgate_config_set_thresholds(locgate_config* cfg, double theta_p, double theta_s) {
    return guarded([&] {
        if (!cfg) throw_argument("null config");
        Thresholds th{theta_p, theta_s};
        th.validate();
        cfg->cfg.thresholds = th;
    });
}

locgate_status locgate_config_set_master_seed(locgate_config* cfg, uint64_t seed) {
    return guarded([&] {
        if (!cfg) throw_argument("null config");
        cfg->cfg.corpus.master_seed = seed;
    });
}

locgate_status locgate_config_set_traces_per_scenario(locgate_config* cfg, int n) {
    return guarded([&] {
        if (!cfg) throw_argument("null config");
        if (n < 1) throw_validation("traces_per_scenario must be >= 1");
        cfg->cfg.corpus.traces_per_scenario = n;
    });
}

locgate_status locgate_config_set_strict_parse(locgate_config* cfg, int strict) {
    return guarded([&] {
        if (!cfg) throw_argument("null config");
        cfg->cfg.strict_parse = strict != 0;
    });
}

locgate_status locgate_config_get_thresholds(const locgate_config* cfg, double* theta_p,
                                             double* theta_s) {
    return guarded([&] {
        if (!cfg || !theta_p || !theta_s) throw_argument("null argument");
        *theta_p = cfg->cfg.thresholds.theta_p;
        *theta_s = cfg->cfg.thresholds.theta_s;
    });
}

locgate_status locgate_gate_eval(double trust, double theta_p, double theta_s,
                                 locgate_action* out) {
    return guarded([&] {
        if (!out) throw_argument("null output");
        Thresholds th{theta_p, theta_s};
        *out = to_c_action(gate_eval(trust, th));
    });
}

locgate_status locgate_session_new(const locgate_config* cfg, const char* session_id,
                                   locgate_session** out) {
    return guarded([&] {
        if (!cfg || !session_id || !out) throw_argument("null argument");
        *out = new locgate_session{Session(session_id, cfg->cfg.thresholds, cfg->cfg.signals,
                                           cfg->cfg.profiles)};
    });
}

void locgate_session_free(locgate_session* sess) { delete sess; }

locgate_status locgate_session_step(locgate_session* sess, const locgate_fix* fix,
                                    locgate_step_result* out) {
    return guarded([&] {
        if (!sess || !fix || !out) throw_argument("null argument");
        const StepResult r = sess->session.step(to_cpp_fix(*fix, sess->session.id()));
        out->action = to_c_action(r.action);
        out->scored = r.scored ? 1 : 0;
        out->trust = r.trust;
        out->latch = to_c_latch(r.latch);
    });
}

locgate_status locgate_session_resolve_step_up(locgate_session* sess, int verified) {
    return guarded([&] {
        if (!sess) throw_argument("null session");
        sess->session.resolve_step_up(verified != 0);
    });
}

locgate_latch locgate_session_latch(const locgate_session* sess) {
    return sess ? to_c_latch(sess->session.latch()) : LOCGATE_LATCH_NONE;
}

locgate_status locgate_corpus_generate(const locgate_config* cfg, locgate_corpus** out) {
    return guarded([&] {
        if (!cfg || !out) throw_argument("null argument");
        *out = new locgate_corpus{generate_corpus(cfg->cfg.corpus)};
    });
}

locgate_status locgate_corpus_load(const locgate_config* cfg, const char* path,
                                   locgate_corpus** out) {
    return guarded([&] {
        if (!cfg || !path || !out) throw_argument("null argument");
        Corpus corpus;
        corpus.config = cfg->cfg.corpus;
        corpus.traces = load_traces_file(path, cfg->cfg.strict_parse);
        *out = new locgate_corpus{std::move(corpus)};
    });
}

void locgate_corpus_free(locgate_corpus* corpus) { delete corpus; }

size_t locgate_corpus_trace_count(const locgate_corpus* corpus) {
    return corpus ? corpus->corpus.traces.size() : 0;
}

locgate_status locgate_corpus_save(const locgate_corpus* corpus, const char* path) {
    return guarded([&] {
        if (!corpus || !path) throw_argument("null argument");
        save_corpus(corpus->corpus, path);
    });
}

locgate_status locgate_corpus_content_hash(const locgate_corpus* corpus, char* buf,
                                           size_t buf_len) {
    return guarded([&] {
        if (!corpus || !buf) throw_argument("null argument");
        const std::string hash = corpus_content_hash(corpus->corpus);
        if (buf_len <= hash.size()) throw_argument("hash buffer too small");
        std::memcpy(buf, hash.c_str(), hash.size() + 1);
    });
}

locgate_status locgate_replay_file(const locgate_config* cfg, const char* path,
                                   locgate_mode mode, locgate_replay** out) {
    return guarded([&] {
        if (!cfg || !path || !out) throw_argument("null argument");
        const auto traces = load_traces_file(path, cfg->cfg.strict_parse);
        auto* handle = new locgate_replay{};
        try {
            for (const auto& trace : traces) {
                locgate_replay::TraceResult tr;
                tr.session_id = trace.fixes.front().session_id;
                tr.outcome = run_trace(
                    trace, cfg->cfg.thresholds,
                    mode == LOCGATE_MODE_BINARY ? GateMode::binary : GateMode::graduated,
                    nullptr, nullptr, cfg->cfg.signals, cfg->cfg.profiles);
                handle->traces.push_back(std::move(tr));
            }
        } catch (...) {
            delete handle;
            throw;
        }
        *out = handle;
    });
}

void locgate_replay_free(locgate_replay* replay) { delete replay; }

size_t locgate_replay_trace_count(const locgate_replay* replay) {
    return replay ? replay->traces.size() : 0;
}

locgate_status locgate_replay_summary_at(const locgate_replay* replay, size_t trace_index,
                                         locgate_replay_summary* out) {
    return guarded([&] {
        if (!replay || !out) throw_argument("null argument");
        if (trace_index >= replay->traces.size()) throw_argument("trace index out of range");
        const auto& tr = replay->traces[trace_index];
        out->session_id = tr.session_id.c_str();
        out->fix_count = tr.outcome.fixes.size();
        size_t scored = 0;
        for (const auto& f : tr.outcome.fixes)
            if (f.scored) ++scored;
        out->scored_count = scored;
        out->min_trust = tr.outcome.min_scored_trust;
        out->disposition = to_c_disposition(tr.outcome.disposition);
        out->final_latch =
            tr.outcome.fixes.empty() ? LOCGATE_LATCH_NONE : to_c_latch(tr.outcome.fixes.back().latch);
    });
}

locgate_status locgate_replay_row_at(const locgate_replay* replay, size_t trace_index,
                                     size_t fix_index, locgate_replay_row* out) {
    return guarded([&] {
        if (!replay || !out) throw_argument("null argument");
        if (trace_index >= replay->traces.size()) throw_argument("trace index out of range");
        const auto& fixes = replay->traces[trace_index].outcome.fixes;
        if (fix_index >= fixes.size()) throw_argument("fix index out of range");
        const auto& f = fixes[fix_index];
        out->fix_index = static_cast<int>(fix_index);
        out->scored = f.scored ? 1 : 0;
        out->trust = f.trust;
        out->action = to_c_action(f.action);
        out->latch = to_c_latch(f.latch);
    });
}

locgate_status locgate_experiment_run(const locgate_config* cfg, const locgate_corpus* corpus,
                                      const char* name, const char* out_dir) {
    return guarded([&] {
        if (!cfg || !name || !out_dir) throw_argument("null argument");
        if (corpus) {
            run_experiment(name, corpus->corpus, cfg->cfg, out_dir);
        } else if (std::string(name) == "bench") {
            Corpus empty;
            run_experiment(name, empty, cfg->cfg, out_dir);
        } else {
            const Corpus generated = generate_corpus(cfg->cfg.corpus);
            run_experiment(name, generated, cfg->cfg, out_dir);
        }
    });
}

locgate_status locgate_bench_scoring(const locgate_config* cfg, long iterations,
                                     double* median_us, double* p99_us) {
    return guarded([&] {
        if (!cfg || !median_us || !p99_us) throw_argument("null argument");
        const BenchResult r = bench_scoring(cfg->cfg, iterations);
        *median_us = r.median_us;
        *p99_us = r.p99_us;
    });
}

}  // extern "C"
