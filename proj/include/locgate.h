/*
 * locgate - graduated trust gating for location verification.
 *
 * C API over the scoring core: multi-signal trust scores, a three-level
 * gate with session-latch semantics, synthetic trace corpora, JSONL trace
 * replay and the experiment suite.
 *
 * Conventions:
 *   - every fallible call returns a locgate_status; LOCGATE_OK is 0
 *   - on failure, locgate_last_error() describes the problem (thread-local)
 *   - objects are opaque handles created and released by this library
 */

#ifndef LOCGATE_H
#define LOCGATE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum locgate_status {
    LOCGATE_OK = 0,
    LOCGATE_E_VALIDATION = 1, /* domain invariant violated */
    LOCGATE_E_PARSE = 2,      /* malformed JSONL or config */
    LOCGATE_E_IO = 3,         /* filesystem failure */
    LOCGATE_E_ARG = 4,        /* bad argument / unknown name */
    LOCGATE_E_STATE = 5       /* call invalid for current state */
} locgate_status;

typedef enum locgate_action {
    LOCGATE_ACTION_PROCEED = 0,
    LOCGATE_ACTION_STEP_UP = 1,
    LOCGATE_ACTION_DENY = 2,
    LOCGATE_ACTION_UNSCORED_PROCEED = 3
} locgate_action;

typedef enum locgate_latch {
    LOCGATE_LATCH_NONE = 0,
    LOCGATE_LATCH_STEP_UP = 1,
    LOCGATE_LATCH_DENY = 2
} locgate_latch;

typedef enum locgate_mode {
    LOCGATE_MODE_BINARY = 0,
    LOCGATE_MODE_GRADUATED = 1
} locgate_mode;

typedef enum locgate_disposition {
    LOCGATE_DISP_ACCEPTED = 0,
    LOCGATE_DISP_DENIED = 1,
    LOCGATE_DISP_STEPPED_UP_THEN_ACCEPTED = 2,
    LOCGATE_DISP_STEPPED_UP_THEN_DENIED = 3,
    LOCGATE_DISP_STEPPED_UP_UNRESOLVED = 4
} locgate_disposition;

typedef struct locgate_config locgate_config;
typedef struct locgate_corpus locgate_corpus;
typedef struct locgate_session locgate_session;
typedef struct locgate_replay locgate_replay;

typedef struct locgate_net_hint {
    double lat;
    double lon;
    double accuracy_m;
} locgate_net_hint;

typedef struct locgate_raw_sample {
    double lat;
    double lon;
    double accuracy_m;
} locgate_raw_sample;

/* One location report. Optional members may be NULL / zero-length. */
typedef struct locgate_fix {
    int64_t t_ms;
    double lat;
    double lon;
    double accuracy_m;
    const locgate_net_hint* net_hint;
    const locgate_raw_sample* raw_samples;
    size_t raw_sample_count;
} locgate_fix;

typedef struct locgate_step_result {
    locgate_action action;
    int scored; /* nonzero when a trust score was computed for this fix */
    double trust;
    locgate_latch latch; /* session latch after this fix */
} locgate_step_result;

const char* locgate_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* locgate_last_error(void);

/* ---- configuration ---------------------------------------------------- */

locgate_config* locgate_config_new(void);
locgate_status locgate_config_load(const char* path, locgate_config** out);
void locgate_config_free(locgate_config* cfg);

locgate_status locgate_config_set_thresholds(locgate_config* cfg, double theta_p, double theta_s);
locgate_status locgate_config_set_master_seed(locgate_config* cfg, uint64_t seed);
locgate_status locgate_config_set_traces_per_scenario(locgate_config* cfg, int n);
locgate_status locgate_config_set_strict_parse(locgate_config* cfg, int strict);
locgate_status locgate_config_get_thresholds(const locgate_config* cfg, double* theta_p,
                                             double* theta_s);

/* ---- gate primitives --------------------------------------------------- */

/* Three-way decision on a trust score; boundary values proceed / step up. */
locgate_status locgate_gate_eval(double trust, double theta_p, double theta_s,
                                 locgate_action* out);

/* ---- sessions ----------------------------------------------------------- */

locgate_status locgate_session_new(const locgate_config* cfg, const char* session_id,
                                   locgate_session** out);
void locgate_session_free(locgate_session* sess);

/* Steps one fix through the session-aware gate. Latched sessions return the
 * latched action without scoring. */
locgate_status locgate_session_step(locgate_session* sess, const locgate_fix* fix,
                                    locgate_step_result* out);

/* Adjudicates a pending step-up latch: verified != 0 clears it, 0 denies. */
locgate_status locgate_session_resolve_step_up(locgate_session* sess, int verified);

locgate_latch locgate_session_latch(const locgate_session* sess);

/* ---- corpora ------------------------------------------------------------ */

locgate_status locgate_corpus_generate(const locgate_config* cfg, locgate_corpus** out);
locgate_status locgate_corpus_load(const locgate_config* cfg, const char* path,
                                   locgate_corpus** out);
void locgate_corpus_free(locgate_corpus* corpus);

size_t locgate_corpus_trace_count(const locgate_corpus* corpus);

/* Writes JSONL plus "<path>.manifest.json". */
locgate_status locgate_corpus_save(const locgate_corpus* corpus, const char* path);

/* "fnv1a64:<hex>" content hash of the serialized corpus. */
locgate_status locgate_corpus_content_hash(const locgate_corpus* corpus, char* buf,
                                           size_t buf_len);

/* ---- replay ------------------------------------------------------------- */

typedef struct locgate_replay_row {
    int fix_index;
    int scored;
    double trust;
    locgate_action action;
    locgate_latch latch;
} locgate_replay_row;

typedef struct locgate_replay_summary {
    const char* session_id; /* owned by the replay handle */
    size_t fix_count;
    size_t scored_count;
    double min_trust; /* 1.0 when nothing was scored */
    locgate_disposition disposition;
    locgate_latch final_latch;
} locgate_replay_summary;

/* Replays a JSONL trace file through the gate (no step-up oracle: step-up
 * latches persist and are visible per fix). */
locgate_status locgate_replay_file(const locgate_config* cfg, const char* path,
                                   locgate_mode mode, locgate_replay** out);
void locgate_replay_free(locgate_replay* replay);

size_t locgate_replay_trace_count(const locgate_replay* replay);
locgate_status locgate_replay_summary_at(const locgate_replay* replay, size_t trace_index,
                                         locgate_replay_summary* out);
locgate_status locgate_replay_row_at(const locgate_replay* replay, size_t trace_index,
                                     size_t fix_index, locgate_replay_row* out);

/* ---- experiments -------------------------------------------------------- */

/* name: detection | ablation | sweep | robustness | bench.
 * corpus may be NULL: one is generated from the config. Writes CSV and
 * markdown reports into out_dir. */
locgate_status locgate_experiment_run(const locgate_config* cfg, const locgate_corpus* corpus,
                                      const char* name, const char* out_dir);

/* Median / P99 latency of one full-context score evaluation. */
locgate_status locgate_bench_scoring(const locgate_config* cfg, long iterations,
                                     double* median_us, double* p99_us);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LOCGATE_H */
