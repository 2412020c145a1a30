#pragma once

// The five integrity signals. Each maps a fix plus context onto [0, 1];
// a signal whose inputs are missing is reported absent, never as 0 or 1.

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "geo.hpp"

namespace locgate {

enum class SignalId : int {
    s1_movement = 0,
    s2_accuracy = 1,
    s3_temporal = 2,
    s4_fix_consistency = 3,
    s5_network = 4,
};

inline constexpr int kSignalCount = 5;
inline constexpr uint8_t kAllSignalsMask = 0x1F;

inline constexpr uint8_t signal_bit(SignalId id) {
    return static_cast<uint8_t>(1u << static_cast<int>(id));
}

const char* signal_name(SignalId id);

// Piecewise-linear knee constants. All ramps are the simplest monotone
// interpolation between the plausible band and the hard-fail point.
struct SignalConstants {
    double s1_full_trust_speed_mps = 50.0;   // score 1.0 at or below
    double s1_zero_trust_speed_mps = 100.0;  // score 0.0 at or above
    double s2_min_plausible_accuracy_m = 2.0;
    double s3_violation_speed_mps = 100.0;
    double s4_ratio_low = 0.05;   // plausible scatter/accuracy band lower knee
    double s4_ratio_high = 3.0;   // band upper knee
    double s4_ratio_max = 10.0;   // score reaches 0 here
    double s5_near_ratio = 3.0;   // d <= near * hint accuracy scores 1.0
    double s5_far_ratio = 10.0;   // d >= far * hint accuracy scores 0.0
    int history_window = 10;      // W, most recent fixes kept for S1/S3

    void validate() const;
};

// Scores indexed by SignalId; absent entries encode unavailable signals.
class SignalVector {
public:
    void set(SignalId id, double score) {
        scores_[static_cast<int>(id)] = score;
        mask_ |= signal_bit(id);
    }
    bool present(SignalId id) const { return (mask_ & signal_bit(id)) != 0; }
    double get(SignalId id) const { return scores_[static_cast<int>(id)]; }
    std::optional<double> maybe(SignalId id) const {
        if (!present(id)) return std::nullopt;
        return scores_[static_cast<int>(id)];
    }
    uint8_t mask() const { return mask_; }
    int count() const { return __builtin_popcount(mask_); }

private:
    std::array<double, kSignalCount> scores_{};
    uint8_t mask_ = 0;
};

// Inputs available when scoring one fix. `history` is the window of prior
// fixes (oldest first); `net_hint` is the most recent hint seen in the
// session (network scans are cached, a fix without its own hint still scores
// S5 against the last scan); `raw_fixes` is the current fix's raw buffer.
struct SignalContext {
    std::span<const Fix> history;
    std::optional<NetworkHint> net_hint;
    std::span<const RawSample> raw_fixes;
};

double s1_movement(const Fix& prev, const Fix& cur, const SignalConstants& c);
double s2_accuracy(const Fix& cur, const SignalConstants& c);
// History pairs plus the (last history, cur) pair; requires |history| >= 1.
double s3_temporal(const Fix& cur, std::span<const Fix> history, const SignalConstants& c);
// RAIM-style scatter-vs-accuracy ratio over the raw buffer; requires >= 3 samples.
double s4_fix_consistency(std::span<const RawSample> raw, const SignalConstants& c);
double s5_network(const Fix& cur, const NetworkHint& hint, const SignalConstants& c);

// Evaluates every signal whose inputs are present:
//   S1, S3  iff history non-empty
//   S2      always
//   S4      iff >= 3 raw samples
//   S5      iff a hint is available
// `allowed_mask` drops channels entirely (degradation studies, V1 scoring).
SignalVector evaluate_all(const Fix& cur, const SignalContext& ctx, const SignalConstants& c,
                          uint8_t allowed_mask = kAllSignalsMask);

}  // namespace locgate
