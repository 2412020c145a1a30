#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace locgate {

Confusion confusion(const std::vector<ScoredTrace>& traces, double theta) {
    if (traces.empty()) throw_argument("confusion requires a non-empty input");
    Confusion c;
    for (const auto& t : traces) {
        const bool actual_pos = t.label == TraceLabel::spoofed;
        const bool pred_pos = t.min_trust < theta;
        if (actual_pos && pred_pos) ++c.tp;
        else if (!actual_pos && pred_pos) ++c.fp;
        else if (actual_pos && !pred_pos) ++c.fn;
        else ++c.tn;
    }
    return c;
}

Prf precision_recall_f1(const Confusion& c) {
    Prf out;
    out.precision = (c.tp + c.fp) > 0 ? static_cast<double>(c.tp) / (c.tp + c.fp) : 0.0;
    out.recall = (c.tp + c.fn) > 0 ? static_cast<double>(c.tp) / (c.tp + c.fn) : 0.0;
    out.f1 = (out.precision + out.recall) > 0.0
                 ? 2.0 * out.precision * out.recall / (out.precision + out.recall)
                 : 0.0;
    return out;
}

namespace {

struct ThresholdGroup {
    double score = 0.0;
    long pos = 0;
    long neg = 0;
};

// Distinct scores in descending order with per-group class counts.
std::vector<ThresholdGroup> group_scores(const std::vector<double>& scores,
                                         const std::vector<bool>& positive, long* total_pos,
                                         long* total_neg) {
    if (scores.size() != positive.size())
        throw_argument("scores and labels must have equal length");
    if (scores.empty()) throw_argument("metric requires a non-empty input");
    std::vector<size_t> order(scores.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return scores[a] > scores[b]; });
    std::vector<ThresholdGroup> groups;
    *total_pos = 0;
    *total_neg = 0;
    for (size_t idx : order) {
        if (groups.empty() || groups.back().score != scores[idx])
            groups.push_back({scores[idx], 0, 0});
        if (positive[idx]) {
            ++groups.back().pos;
            ++*total_pos;
        } else {
            ++groups.back().neg;
            ++*total_neg;
        }
    }
    if (*total_pos == 0 || *total_neg == 0)
        throw_argument("metric requires both classes to be present");
    return groups;
}

}  // namespace

double auc_pr(const std::vector<double>& scores, const std::vector<bool>& positive) {
    long total_pos = 0, total_neg = 0;
    const auto groups = group_scores(scores, positive, &total_pos, &total_neg);
    double area = 0.0;
    long tp = 0, fp = 0;
    double prev_recall = 0.0;
    for (const auto& g : groups) {
        tp += g.pos;
        fp += g.neg;
        const double recall = static_cast<double>(tp) / total_pos;
        const double precision = static_cast<double>(tp) / (tp + fp);
        area += (recall - prev_recall) * precision;
        prev_recall = recall;
    }
    return area;
}

double eer(const std::vector<double>& scores, const std::vector<bool>& positive) {
    long total_pos = 0, total_neg = 0;
    const auto groups = group_scores(scores, positive, &total_pos, &total_neg);

    // Thresholds sweep from above the max score downward; predict positive
    // iff score >= t. FPR rises from 0 to 1, FNR falls from 1 to 0.
    double prev_fpr = 0.0, prev_fnr = 1.0;
    long fp = 0, tp = 0;
    for (const auto& g : groups) {
        tp += g.pos;
        fp += g.neg;
        const double fpr = static_cast<double>(fp) / total_neg;
        const double fnr = static_cast<double>(total_pos - tp) / total_pos;
        if (fpr >= fnr) {
            if (fpr == fnr) return fpr;
            // Crossed between the previous threshold and this one.
            const double span = (fpr - prev_fpr) + (prev_fnr - fnr);
            if (span <= 0.0) return (fpr + fnr) / 2.0;
            const double s = (prev_fnr - prev_fpr) / span;
            return prev_fpr + s * (fpr - prev_fpr);
        }
        prev_fpr = fpr;
        prev_fnr = fnr;
    }
    // No crossing within the grid: everything predicted positive at the last
    // threshold still had FPR < FNR, which is impossible since FNR ends at 0.
    return prev_fpr;
}

GateMetrics far_fdr(const std::vector<LabeledOutcome>& outcomes) {
    if (outcomes.empty()) throw_argument("far_fdr requires a non-empty input");
    long spoofed = 0, legit = 0, accepted_spoofed = 0, denied_legit = 0;
    Confusion c;
    for (const auto& o : outcomes) {
        const bool accepted = o.disposition == Disposition::accepted ||
                              o.disposition == Disposition::stepped_up_then_accepted;
        const bool denied = o.disposition == Disposition::denied ||
                            o.disposition == Disposition::stepped_up_then_denied;
        if (o.label == TraceLabel::spoofed) {
            ++spoofed;
            if (accepted) ++accepted_spoofed;
            if (denied) ++c.tp;
            else ++c.fn;
        } else {
            ++legit;
            if (denied) {
                ++denied_legit;
                ++c.fp;
            } else {
                ++c.tn;
            }
        }
    }
    GateMetrics m;
    m.spoofed_present = spoofed > 0;
    m.legitimate_present = legit > 0;
    m.far = spoofed > 0 ? static_cast<double>(accepted_spoofed) / spoofed : 0.0;
    m.fdr = legit > 0 ? static_cast<double>(denied_legit) / legit : 0.0;
    const Prf prf = precision_recall_f1(c);
    m.precision = prf.precision;
    m.recall = prf.recall;
    m.f1 = prf.f1;
    return m;
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw_argument("percentile of an empty sample");
    if (!(q >= 0.0) || !(q <= 1.0)) throw_argument("percentile q must be in [0, 1]");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const size_t lo = static_cast<size_t>(std::floor(pos));
    const size_t hi = static_cast<size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + (values[hi] - values[lo]) * frac;
}

}  // namespace locgate
