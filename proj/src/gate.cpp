#include "gate.hpp"

#include <algorithm>

namespace locgate {

void Thresholds::validate() const {
    if (!(theta_p > 0.0) || !(theta_p <= 1.0)) throw_validation("theta_p must be in (0, 1]");
    if (!(theta_s >= 0.0) || !(theta_s < 1.0)) throw_validation("theta_s must be in [0, 1)");
    if (!(theta_s < theta_p)) throw_validation("theta_s must be below theta_p");
}

const char* action_name(GateAction a) {
    switch (a) {
        case GateAction::proceed: return "proceed";
        case GateAction::step_up: return "step-up";
        case GateAction::deny: return "deny";
        case GateAction::unscored_proceed: return "unscored";
    }
    return "?";
}

const char* latch_name(LatchState l) {
    switch (l) {
        case LatchState::none: return "none";
        case LatchState::step_up: return "step-up";
        case LatchState::deny: return "deny";
    }
    return "?";
}

const char* disposition_name(Disposition d) {
    switch (d) {
        case Disposition::accepted: return "accepted";
        case Disposition::denied: return "denied";
        case Disposition::stepped_up_then_accepted: return "stepped_up_then_accepted";
        case Disposition::stepped_up_then_denied: return "stepped_up_then_denied";
        case Disposition::stepped_up_unresolved: return "stepped_up_unresolved";
    }
    return "?";
}

GateAction gate_eval(double trust, const Thresholds& th) {
    th.validate();
    if (!(trust >= 0.0) || !(trust <= 1.0))
        throw_validation("trust score out of [0, 1]: " + std::to_string(trust));
    if (trust >= th.theta_p) return GateAction::proceed;
    if (trust >= th.theta_s) return GateAction::step_up;
    return GateAction::deny;
}

bool StepUpOracle::resolve(TraceLabel label, Rng& rng) const {
    const double p = label == TraceLabel::legitimate ? pass_prob_legitimate : pass_prob_spoofed;
    // Always consume one draw so downstream streams do not shift with p.
    const double u = rng.uniform();
    return u < p;
}

void StepUpOracle::validate() const {
    if (!(pass_prob_legitimate >= 0.0) || !(pass_prob_legitimate <= 1.0) ||
        !(pass_prob_spoofed >= 0.0) || !(pass_prob_spoofed <= 1.0))
        throw_validation("oracle pass probabilities must be in [0, 1]");
}

Session::Session(std::string session_id, Thresholds th, SignalConstants constants,
                 ProfileTable profiles, uint8_t allowed_mask)
    : id_(std::move(session_id)),
      th_(th),
      constants_(constants),
      profiles_(profiles),
      allowed_mask_(allowed_mask) {
    th_.validate();
    constants_.validate();
    profiles_.validate();
}

StepResult Session::step(const Fix& fix) {
    if (fix.session_id != id_)
        throw_validation("fix session id '" + fix.session_id + "' does not match session '" +
                         id_ + "'");
    validate_fix(fix);
    if (seen_any_ && fix.t_ms <= last_t_ms_)
        throw_validation("timestamp regression in session " + id_);
    last_t_ms_ = fix.t_ms;
    seen_any_ = true;

    StepResult res;
    if (latch_ != LatchState::none) {
        res.action = latch_ == LatchState::deny ? GateAction::deny : GateAction::step_up;
        res.latch = latch_;
        return res;
    }

    if (fix.net_hint) cached_hint_ = fix.net_hint;

    if (history_.empty()) {
        history_.push_back(fix);
        res.action = GateAction::unscored_proceed;
        res.latch = latch_;
        return res;
    }

    SignalContext ctx;
    ctx.history = std::span<const Fix>(history_);
    ctx.net_hint = cached_hint_;
    ctx.raw_fixes = std::span<const RawSample>(fix.raw_fixes);
    const SignalVector sv = evaluate_all(fix, ctx, constants_, allowed_mask_);
    const WeightProfile profile = select_profile(sv.mask(), profiles_);
    const TrustScore score = compose(sv, profile);

    res.scored = true;
    res.trust = score.value;
    res.signals = sv;
    res.action = gate_eval(score.value, th_);
    if (res.action == GateAction::step_up) {
        latch_ = LatchState::step_up;
        ++step_up_count_;
    } else if (res.action == GateAction::deny) {
        latch_ = LatchState::deny;
    }
    res.latch = latch_;

    history_.push_back(fix);
    const size_t w = static_cast<size_t>(constants_.history_window);
    if (history_.size() > w) history_.erase(history_.begin(), history_.end() - w);
    return res;
}

void Session::resolve_step_up(bool verified) {
    if (latch_ != LatchState::step_up)
        throw_state("resolve_step_up requires a pending step-up latch");
    latch_ = verified ? LatchState::none : LatchState::deny;
}

std::vector<ScoredFix> score_trace(const Trace& trace, const SignalConstants& constants,
                                   const ProfileTable& profiles, uint8_t allowed_mask) {
    validate_trace(trace);
    std::vector<ScoredFix> out;
    out.reserve(trace.fixes.size());
    std::vector<Fix> history;
    std::optional<NetworkHint> cached_hint;
    const size_t w = static_cast<size_t>(constants.history_window);
    for (const Fix& fix : trace.fixes) {
        if (fix.net_hint) cached_hint = fix.net_hint;
        ScoredFix sf;
        if (!history.empty()) {
            SignalContext ctx;
            ctx.history = std::span<const Fix>(history);
            ctx.net_hint = cached_hint;
            ctx.raw_fixes = std::span<const RawSample>(fix.raw_fixes);
            sf.signals = evaluate_all(fix, ctx, constants, allowed_mask);
            sf.trust = compose(sf.signals, select_profile(sf.signals.mask(), profiles)).value;
            sf.scored = true;
        }
        out.push_back(std::move(sf));
        history.push_back(fix);
        if (history.size() > w) history.erase(history.begin(), history.end() - w);
    }
    return out;
}

TraceOutcome run_trace_scored(const std::vector<ScoredFix>& scores,
                              std::optional<TraceLabel> label, const Thresholds& th,
                              GateMode mode, const StepUpOracle* oracle, Rng* oracle_rng) {
    th.validate();
    if (oracle) {
        oracle->validate();
        if (!label) throw_argument("oracle adjudication requires a labeled trace");
        if (!oracle_rng) throw_argument("oracle adjudication requires an rng stream");
    }

    TraceOutcome out;
    out.fixes.reserve(scores.size());
    LatchState latch = LatchState::none;
    bool any_step_up = false;
    bool denied = false;

    for (size_t i = 0; i < scores.size(); ++i) {
        const ScoredFix& sf = scores[i];
        FixOutcome fo;
        if (mode == GateMode::binary) {
            if (!sf.scored) {
                fo.action = GateAction::unscored_proceed;
            } else {
                fo.scored = true;
                fo.trust = sf.trust;
                fo.action = sf.trust >= th.theta_p ? GateAction::proceed : GateAction::deny;
                if (fo.action == GateAction::deny) denied = true;
                out.any_scored = true;
                out.min_scored_trust = std::min(out.min_scored_trust, sf.trust);
            }
            out.fixes.push_back(fo);
            continue;
        }

        // graduated
        if (latch != LatchState::none) {
            fo.action = latch == LatchState::deny ? GateAction::deny : GateAction::step_up;
            fo.latch = latch;
            out.fixes.push_back(fo);
            continue;
        }
        if (!sf.scored) {
            fo.action = GateAction::unscored_proceed;
            out.fixes.push_back(fo);
            continue;
        }
        fo.scored = true;
        fo.trust = sf.trust;
        out.any_scored = true;
        out.min_scored_trust = std::min(out.min_scored_trust, sf.trust);
        fo.action = gate_eval(sf.trust, th);
        if (fo.action == GateAction::step_up) {
            latch = LatchState::step_up;
            any_step_up = true;
            if (out.first_latch_index < 0) out.first_latch_index = static_cast<int>(i);
            if (oracle) {
                ++out.step_up_count;
                const bool ok = oracle->resolve(*label, *oracle_rng);
                latch = ok ? LatchState::none : LatchState::deny;
                if (!ok) denied = true;
            }
        } else if (fo.action == GateAction::deny) {
            latch = LatchState::deny;
            denied = true;
            if (out.first_latch_index < 0) out.first_latch_index = static_cast<int>(i);
        }
        fo.latch = latch;
        out.fixes.push_back(fo);
    }

    if (mode == GateMode::binary) {
        out.disposition = denied ? Disposition::denied : Disposition::accepted;
        if (!out.any_scored) out.min_scored_trust = 1.0;
        return out;
    }

    if (latch == LatchState::deny || denied) {
        out.disposition = any_step_up ? Disposition::stepped_up_then_denied : Disposition::denied;
    } else if (latch == LatchState::step_up) {
        out.disposition = Disposition::stepped_up_unresolved;
    } else {
        out.disposition =
            any_step_up ? Disposition::stepped_up_then_accepted : Disposition::accepted;
    }
    if (!out.any_scored) out.min_scored_trust = 1.0;
    return out;
}

TraceOutcome run_trace(const Trace& trace, const Thresholds& th, GateMode mode,
                       const StepUpOracle* oracle, Rng* oracle_rng,
                       const SignalConstants& constants, const ProfileTable& profiles,
                       uint8_t allowed_mask) {
    // Post-latch fixes are never scored by the gate, so computing the full
    // score sequence up front matches session semantics on every emitted
    // action and on the set of gate-scored fixes.
    const auto scores = score_trace(trace, constants, profiles, allowed_mask);
    return run_trace_scored(scores, trace.label, th, mode, oracle, oracle_rng);
}

}  // namespace locgate
