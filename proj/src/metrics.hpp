#pragma once

// Classification and gate metrics. Trace-level throughout: the detector
// statistic for a trace is its minimum scored trust (one bad fix condemns a
// trace, mirroring the latch), reported as suspicion = 1 - min T.

#include <vector>

#include "gate.hpp"

namespace locgate {

struct ScoredTrace {
    TraceLabel label = TraceLabel::legitimate;
    double min_trust = 1.0;

    double suspicion() const { return 1.0 - min_trust; }
};

struct Confusion {
    long tp = 0, fp = 0, tn = 0, fn = 0;
};

// Positive class = spoofed; predicted positive iff min trust < theta.
Confusion confusion(const std::vector<ScoredTrace>& traces, double theta);

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Standard definitions; every degenerate ratio (empty denominator) is 0.
Prf precision_recall_f1(const Confusion& c);

// Area under the precision-recall curve, positive = label true (spoofed),
// higher score = more suspicious. Step interpolation over distinct-score
// threshold groups (precision is a step function of recall); requires both
// classes.
double auc_pr(const std::vector<double>& scores, const std::vector<bool>& positive);

// Equal-error rate: the operating point where the false-positive and
// false-negative rates cross, linearly interpolated between the two adjacent
// thresholds when no exact crossing exists. Requires both classes.
double eer(const std::vector<double>& scores, const std::vector<bool>& positive);

struct GateMetrics {
    double far = 0.0;  // spoofed traces finally accepted / spoofed
    double fdr = 0.0;  // legitimate traces finally denied / legitimate
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool spoofed_present = false;     // FAR is a filler 0 when false
    bool legitimate_present = false;  // FDR is a filler 0 when false
};

struct LabeledOutcome {
    TraceLabel label = TraceLabel::legitimate;
    Disposition disposition = Disposition::accepted;
};

// Final-disposition rates. Step-up resolutions count toward their final
// accept/deny state; unresolved escalations count as neither.
GateMetrics far_fdr(const std::vector<LabeledOutcome>& outcomes);

// Linear-interpolation percentile (q in [0, 1]) of an unsorted sample.
double percentile(std::vector<double> values, double q);

}  // namespace locgate
