#pragma once

// Graduated gate: three-way decision on the trust score, session latch
// semantics, step-up adjudication, and whole-trace evaluation.

#include <cstdint>
#include <vector>

#include "rng.hpp"
#include "scorer.hpp"

namespace locgate {

struct Thresholds {
    double theta_p = 0.7;  // proceed at or above
    double theta_s = 0.3;  // deny below

    void validate() const;
};

enum class GateAction {
    proceed,
    step_up,
    deny,
    unscored_proceed,  // only for a session's first fix (no history)
};

const char* action_name(GateAction a);

enum class LatchState { none, step_up, deny };

const char* latch_name(LatchState l);

// Both comparisons are inclusive: T == theta_p proceeds, T == theta_s steps up.
GateAction gate_eval(double trust, const Thresholds& th);

// Idealized step-up verifier. Defaults model the upper bound used throughout
// the experiments: legitimate sessions always pass, spoofed never do.
struct StepUpOracle {
    double pass_prob_legitimate = 1.0;
    double pass_prob_spoofed = 0.0;

    bool resolve(TraceLabel label, Rng& rng) const;
    void validate() const;
};

// Per-fix result of stepping a session.
struct StepResult {
    GateAction action = GateAction::unscored_proceed;
    bool scored = false;
    double trust = 0.0;           // valid when scored
    SignalVector signals;         // valid when scored
    LatchState latch = LatchState::none;  // state after this fix
};

// Session-aware gate. Single-writer per session id: callers must serialize
// steps for one session; distinct sessions are independent.
class Session {
public:
    Session(std::string session_id, Thresholds th, SignalConstants constants,
            ProfileTable profiles, uint8_t allowed_mask = kAllSignalsMask);

    // Latched sessions return the latched action without scoring and without
    // touching history. A first fix (empty history) passes through unscored.
    StepResult step(const Fix& fix);

    // Adjudicates a pending step-up latch: verified clears, failure denies.
    void resolve_step_up(bool verified);

    LatchState latch() const { return latch_; }
    const std::string& id() const { return id_; }
    int step_up_count() const { return step_up_count_; }

private:
    std::string id_;
    Thresholds th_;
    SignalConstants constants_;
    ProfileTable profiles_;
    uint8_t allowed_mask_;
    LatchState latch_ = LatchState::none;
    std::vector<Fix> history_;
    std::optional<NetworkHint> cached_hint_;
    int64_t last_t_ms_ = 0;
    bool seen_any_ = false;
    int step_up_count_ = 0;
};

enum class GateMode { binary, graduated };

enum class Disposition {
    accepted,
    denied,
    stepped_up_then_accepted,
    stepped_up_then_denied,
    stepped_up_unresolved,  // graduated run without an oracle ends latched
};

const char* disposition_name(Disposition d);

struct FixOutcome {
    GateAction action = GateAction::unscored_proceed;
    bool scored = false;
    double trust = 0.0;
    LatchState latch = LatchState::none;
};

struct TraceOutcome {
    std::vector<FixOutcome> fixes;
    double min_scored_trust = 1.0;  // over fixes actually scored by the gate
    bool any_scored = false;
    Disposition disposition = Disposition::accepted;
    int step_up_count = 0;       // oracle consultations
    int first_latch_index = -1;  // fix index of the first latch, -1 if none
};

// Scores every fix of a trace through the full pipeline (history window,
// cached hint, availability-driven profile selection). Entry i corresponds to
// fixes[i]; the first fix is marked unscored. Independent of gate thresholds.
struct ScoredFix {
    bool scored = false;
    double trust = 0.0;
    SignalVector signals;
};

std::vector<ScoredFix> score_trace(const Trace& trace, const SignalConstants& constants,
                                   const ProfileTable& profiles,
                                   uint8_t allowed_mask = kAllSignalsMask);

// Runs one trace through the gate.
//   binary:    per-fix accept iff T >= theta_p, deny otherwise; no band, no latch.
//   graduated: session latch per the three-way gate; when an oracle is given
//              it adjudicates each step-up latch immediately (a cleared
//              session may escalate and be adjudicated again); without one
//              the latch persists and the trace ends unresolved.
TraceOutcome run_trace(const Trace& trace, const Thresholds& th, GateMode mode,
                       const StepUpOracle* oracle, Rng* oracle_rng,
                       const SignalConstants& constants, const ProfileTable& profiles,
                       uint8_t allowed_mask = kAllSignalsMask);

// Same gate walk over precomputed per-fix scores; run_trace delegates here.
TraceOutcome run_trace_scored(const std::vector<ScoredFix>& scores,
                              std::optional<TraceLabel> label, const Thresholds& th,
                              GateMode mode, const StepUpOracle* oracle, Rng* oracle_rng);

}  // namespace locgate
