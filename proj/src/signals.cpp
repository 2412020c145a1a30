#include "signals.hpp"

#include <algorithm>
#include <cmath>

namespace locgate {

const char* signal_name(SignalId id) {
    switch (id) {
        case SignalId::s1_movement: return "s1_movement";
        case SignalId::s2_accuracy: return "s2_accuracy";
        case SignalId::s3_temporal: return "s3_temporal";
        case SignalId::s4_fix_consistency: return "s4_fix_consistency";
        case SignalId::s5_network: return "s5_network";
    }
    return "?";
}

void SignalConstants::validate() const {
    if (!(s1_full_trust_speed_mps > 0) || !(s1_zero_trust_speed_mps > s1_full_trust_speed_mps))
        throw_validation("s1 knees must satisfy 0 < full < zero");
    if (!(s2_min_plausible_accuracy_m > 0))
        throw_validation("s2 accuracy knee must be > 0");
    if (!(s3_violation_speed_mps > 0))
        throw_validation("s3 violation speed must be > 0");
    if (!(s4_ratio_low > 0) || !(s4_ratio_high > s4_ratio_low) || !(s4_ratio_max > s4_ratio_high))
        throw_validation("s4 band must satisfy 0 < low < high < max");
    if (!(s5_near_ratio > 0) || !(s5_far_ratio > s5_near_ratio))
        throw_validation("s5 knees must satisfy 0 < near < far");
    if (history_window < 1)
        throw_validation("history window must be >= 1");
}

static double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double s1_movement(const Fix& prev, const Fix& cur, const SignalConstants& c) {
    const double v = speed_between(prev, cur);
    return clamp01((c.s1_zero_trust_speed_mps - v) /
                   (c.s1_zero_trust_speed_mps - c.s1_full_trust_speed_mps));
}

double s2_accuracy(const Fix& cur, const SignalConstants& c) {
    if (!(cur.accuracy_m > 0)) throw_validation("accuracy must be > 0");
    return clamp01(cur.accuracy_m / c.s2_min_plausible_accuracy_m);
}

double s3_temporal(const Fix& cur, std::span<const Fix> history, const SignalConstants& c) {
    if (history.empty()) throw_argument("s3 requires non-empty history");
    int pairs = 0;
    int violations = 0;
    for (size_t i = 0; i + 1 < history.size(); ++i) {
        ++pairs;
        if (speed_between(history[i], history[i + 1]) > c.s3_violation_speed_mps) ++violations;
    }
    ++pairs;
    if (speed_between(history.back(), cur) > c.s3_violation_speed_mps) ++violations;
    return 1.0 - static_cast<double>(violations) / static_cast<double>(pairs);
}

double s4_fix_consistency(std::span<const RawSample> raw, const SignalConstants& c) {
    if (raw.size() < 3) throw_argument("s4 requires at least 3 raw samples");
    double lat_c = 0.0, lon_c = 0.0, acc_mean = 0.0;
    for (const auto& s : raw) {
        lat_c += s.lat;
        lon_c += s.lon;
        acc_mean += s.accuracy_m;
    }
    const double n = static_cast<double>(raw.size());
    lat_c /= n;
    lon_c /= n;
    acc_mean /= n;
    double sq = 0.0;
    for (const auto& s : raw) {
        const double d = haversine_distance(s.lat, s.lon, lat_c, lon_c);
        sq += d * d;
    }
    const double scatter = std::sqrt(sq / n);
    const double rho = scatter / acc_mean;
    if (rho < c.s4_ratio_low) return clamp01(rho / c.s4_ratio_low);
    if (rho <= c.s4_ratio_high) return 1.0;
    return clamp01((c.s4_ratio_max - rho) / (c.s4_ratio_max - c.s4_ratio_high));
}

double s5_network(const Fix& cur, const NetworkHint& hint, const SignalConstants& c) {
    if (!(hint.accuracy_m > 0)) throw_validation("hint accuracy must be > 0");
    const double d = haversine_distance(cur.lat, cur.lon, hint.lat, hint.lon);
    const double r = d / hint.accuracy_m;
    if (r <= c.s5_near_ratio) return 1.0;
    if (r >= c.s5_far_ratio) return 0.0;
    return (c.s5_far_ratio - r) / (c.s5_far_ratio - c.s5_near_ratio);
}

SignalVector evaluate_all(const Fix& cur, const SignalContext& ctx, const SignalConstants& c,
                          uint8_t allowed_mask) {
    SignalVector out;
    const bool has_history = !ctx.history.empty();
    if (has_history && (allowed_mask & signal_bit(SignalId::s1_movement)))
        out.set(SignalId::s1_movement, s1_movement(ctx.history.back(), cur, c));
    if (allowed_mask & signal_bit(SignalId::s2_accuracy))
        out.set(SignalId::s2_accuracy, s2_accuracy(cur, c));
    if (has_history && (allowed_mask & signal_bit(SignalId::s3_temporal)))
        out.set(SignalId::s3_temporal, s3_temporal(cur, ctx.history, c));
    if (ctx.raw_fixes.size() >= 3 && (allowed_mask & signal_bit(SignalId::s4_fix_consistency)))
        out.set(SignalId::s4_fix_consistency, s4_fix_consistency(ctx.raw_fixes, c));
    if (ctx.net_hint && (allowed_mask & signal_bit(SignalId::s5_network)))
        out.set(SignalId::s5_network, s5_network(cur, *ctx.net_hint, c));
    return out;
}

}  // namespace locgate
