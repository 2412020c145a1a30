// locgate command line:
//   generate    write a synthetic corpus (JSONL + manifest)
//   replay      run a JSONL trace file through the gate, log per-fix actions
//   experiment  run one of the studies and emit CSV/markdown reports
//
// Exit codes: 0 ok, 2 usage, 3 validation/parse, 4 I/O, 5 internal.

#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "locgate.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitIo = 4;
constexpr int kExitInternal = 5;

int status_exit(locgate_status st) {
    switch (st) {
        case LOCGATE_OK: return 0;
        case LOCGATE_E_VALIDATION:
        case LOCGATE_E_PARSE: return kExitValidation;
        case LOCGATE_E_IO: return kExitIo;
        case LOCGATE_E_ARG: return kExitUsage;
        case LOCGATE_E_STATE: return kExitInternal;
    }
    return kExitInternal;
}

int fail(locgate_status st) {
    std::fprintf(stderr, "error: %s\n", locgate_last_error());
    return status_exit(st);
}

const char* action_str(locgate_action a) {
    switch (a) {
        case LOCGATE_ACTION_PROCEED: return "proceed";
        case LOCGATE_ACTION_STEP_UP: return "step-up";
        case LOCGATE_ACTION_DENY: return "deny";
        case LOCGATE_ACTION_UNSCORED_PROCEED: return "unscored";
    }
    return "?";
}

const char* latch_str(locgate_latch l) {
    switch (l) {
        case LOCGATE_LATCH_NONE: return "none";
        case LOCGATE_LATCH_STEP_UP: return "step-up";
        case LOCGATE_LATCH_DENY: return "deny";
    }
    return "?";
}

const char* disposition_str(locgate_disposition d) {
    switch (d) {
        case LOCGATE_DISP_ACCEPTED: return "accepted";
        case LOCGATE_DISP_DENIED: return "denied";
        case LOCGATE_DISP_STEPPED_UP_THEN_ACCEPTED: return "stepped_up_then_accepted";
        case LOCGATE_DISP_STEPPED_UP_THEN_DENIED: return "stepped_up_then_denied";
        case LOCGATE_DISP_STEPPED_UP_UNRESOLVED: return "stepped_up_unresolved";
    }
    return "?";
}

// Config handle from --config, $LOCGATE_CONFIG, or built-in defaults.
locgate_config* make_config(const std::string& config_path, locgate_status* st) {
    std::string path = config_path;
    if (path.empty()) {
        if (const char* env = std::getenv("LOCGATE_CONFIG")) path = env;
    }
    if (path.empty()) {
        *st = LOCGATE_OK;
        return locgate_config_new();
    }
    locgate_config* cfg = nullptr;
    *st = locgate_config_load(path.c_str(), &cfg);
    return cfg;
}

struct ConfigGuard {
    locgate_config* cfg = nullptr;
    ~ConfigGuard() { locgate_config_free(cfg); }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graduated trust gating for location verification"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "config file (or $LOCGATE_CONFIG)");

    // generate
    auto* gen = app.add_subcommand("generate", "generate a synthetic trace corpus");
    std::string gen_out = "corpus.jsonl";
    uint64_t gen_seed = 0;
    bool gen_seed_set = false;
    int gen_tps = 0;
    gen->add_option("--out", gen_out, "output JSONL path")->capture_default_str();
    gen->add_option("--seed", gen_seed, "master seed")->each([&](const std::string&) {
        gen_seed_set = true;
    });
    gen->add_option("--traces-per-scenario", gen_tps, "traces per scenario");

    // replay
    auto* rep = app.add_subcommand("replay", "replay a JSONL trace file through the gate");
    std::string rep_in;
    double rep_theta_p = -1.0, rep_theta_s = -1.0;
    std::string rep_mode = "graduated";
    rep->add_option("--in", rep_in, "input JSONL path")->required();
    rep->add_option("--theta-p", rep_theta_p, "proceed threshold");
    rep->add_option("--theta-s", rep_theta_s, "deny threshold");
    rep->add_option("--mode", rep_mode, "binary|graduated")->capture_default_str();

    // experiment
    auto* exp = app.add_subcommand("experiment", "run an experiment and write reports");
    std::string exp_name;
    std::string exp_corpus;
    std::string exp_out = "reports";
    exp->add_option("name", exp_name, "detection|ablation|sweep|robustness|bench")->required();
    exp->add_option("--corpus", exp_corpus, "corpus JSONL (generated from config when omitted)");
    exp->add_option("--out", exp_out, "report output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    locgate_status st = LOCGATE_OK;
    ConfigGuard guard;
    guard.cfg = make_config(config_path, &st);
    if (st != LOCGATE_OK || !guard.cfg) return fail(st);
    locgate_config* cfg = guard.cfg;

    if (gen->parsed()) {
        if (gen_seed_set && (st = locgate_config_set_master_seed(cfg, gen_seed)) != LOCGATE_OK)
            return fail(st);
        if (gen_tps > 0 &&
            (st = locgate_config_set_traces_per_scenario(cfg, gen_tps)) != LOCGATE_OK)
            return fail(st);
        locgate_corpus* corpus = nullptr;
        if ((st = locgate_corpus_generate(cfg, &corpus)) != LOCGATE_OK) return fail(st);
        st = locgate_corpus_save(corpus, gen_out.c_str());
        if (st != LOCGATE_OK) {
            locgate_corpus_free(corpus);
            return fail(st);
        }
        char hash[64];
        st = locgate_corpus_content_hash(corpus, hash, sizeof(hash));
        const size_t n = locgate_corpus_trace_count(corpus);
        locgate_corpus_free(corpus);
        if (st != LOCGATE_OK) return fail(st);
        std::printf("wrote %zu traces to %s (%s)\n", n, gen_out.c_str(), hash);
        std::printf("manifest: %s.manifest.json\n", gen_out.c_str());
        return 0;
    }

    if (rep->parsed()) {
        if (rep_mode != "binary" && rep_mode != "graduated") {
            std::fprintf(stderr, "error: --mode must be binary or graduated\n");
            return kExitUsage;
        }
        if (rep_theta_p > 0.0 || rep_theta_s >= 0.0) {
            double tp, ts;
            if ((st = locgate_config_get_thresholds(cfg, &tp, &ts)) != LOCGATE_OK) return fail(st);
            if (rep_theta_p > 0.0) tp = rep_theta_p;
            if (rep_theta_s >= 0.0) ts = rep_theta_s;
            if ((st = locgate_config_set_thresholds(cfg, tp, ts)) != LOCGATE_OK) return fail(st);
        }
        locgate_replay* replay = nullptr;
        const locgate_mode mode =
            rep_mode == "binary" ? LOCGATE_MODE_BINARY : LOCGATE_MODE_GRADUATED;
        if ((st = locgate_replay_file(cfg, rep_in.c_str(), mode, &replay)) != LOCGATE_OK)
            return fail(st);
        const size_t traces = locgate_replay_trace_count(replay);
        for (size_t t = 0; t < traces; ++t) {
            locgate_replay_summary sum{};
            if ((st = locgate_replay_summary_at(replay, t, &sum)) != LOCGATE_OK) {
                locgate_replay_free(replay);
                return fail(st);
            }
            std::printf("trace %s\n", sum.session_id);
            for (size_t i = 0; i < sum.fix_count; ++i) {
                locgate_replay_row row{};
                if ((st = locgate_replay_row_at(replay, t, i, &row)) != LOCGATE_OK) {
                    locgate_replay_free(replay);
                    return fail(st);
                }
                if (row.scored)
                    std::printf("#%d t=%.6f action=%s latch=%s\n", row.fix_index, row.trust,
                                action_str(row.action), latch_str(row.latch));
                else
                    std::printf("#%d t=unscored action=%s latch=%s\n", row.fix_index,
                                action_str(row.action), latch_str(row.latch));
            }
            std::printf(
                "summary session=%s fixes=%zu scored=%zu min_t=%.6f disposition=%s final_latch=%s\n",
                sum.session_id, sum.fix_count, sum.scored_count, sum.min_trust,
                disposition_str(sum.disposition), latch_str(sum.final_latch));
        }
        locgate_replay_free(replay);
        return 0;
    }

    if (exp->parsed()) {
        locgate_corpus* corpus = nullptr;
        if (!exp_corpus.empty() &&
            (st = locgate_corpus_load(cfg, exp_corpus.c_str(), &corpus)) != LOCGATE_OK)
            return fail(st);
        st = locgate_experiment_run(cfg, corpus, exp_name.c_str(), exp_out.c_str());
        locgate_corpus_free(corpus);
        if (st != LOCGATE_OK) return fail(st);
        std::printf("experiment %s: reports written to %s\n", exp_name.c_str(), exp_out.c_str());
        return 0;
    }

    return kExitUsage;
}
