#include <doctest.h>

#include "gate.hpp"
#include "trace_io.hpp"
#include "tracegen.hpp"

using namespace locgate;

namespace {

const SignalConstants kC;
const ProfileTable kT = ProfileTable::defaults();

CorpusConfig small_config(int traces_per_scenario = 4) {
    CorpusConfig cfg;
    cfg.traces_per_scenario = traces_per_scenario;
    return cfg;
}

double max_pair_speed(const Trace& t) {
    double mx = 0.0;
    for (size_t i = 1; i < t.fixes.size(); ++i)
        mx = std::max(mx, speed_between(t.fixes[i - 1], t.fixes[i]));
    return mx;
}

}  // namespace

TEST_CASE("generate_trace is deterministic in (scenario, seed)") {
    const CorpusConfig cfg = small_config();
    for (Scenario sc : {Scenario::walking, Scenario::teleportation, Scenario::replay}) {
        const Trace a = generate_trace(sc, 77, cfg);
        const Trace b = generate_trace(sc, 77, cfg);
        CHECK(serialize_fix_line(a.fixes[5], a.label, a.scenario) ==
              serialize_fix_line(b.fixes[5], b.label, b.scenario));
        REQUIRE(a.fixes.size() == b.fixes.size());
        bool same = true;
        for (size_t i = 0; i < a.fixes.size(); ++i)
            same = same && serialize_fix_line(a.fixes[i], {}, {}) ==
                               serialize_fix_line(b.fixes[i], {}, {});
        CHECK(same);
        const Trace c = generate_trace(sc, 78, cfg);
        CHECK(serialize_fix_line(a.fixes[5], {}, {}) != serialize_fix_line(c.fixes[5], {}, {}));
    }
}

TEST_CASE("every generated trace satisfies the trace invariants") {
    const CorpusConfig cfg = small_config();
    const Corpus corpus = generate_corpus(cfg);
    for (const auto& trace : corpus.traces) {
        CHECK_NOTHROW(validate_trace(trace));
        REQUIRE(trace.label.has_value());
        REQUIRE(trace.scenario.has_value());
        CHECK(scenario_label(*trace.scenario) == *trace.label);
        CHECK(trace.seed.has_value());
        CHECK(trace.fixes.size() == static_cast<size_t>(cfg.fixes_per_trace));
    }
}

TEST_CASE("corpus counts and label split") {
    const Corpus corpus = generate_corpus(small_config(3));
    CHECK(corpus.traces.size() == 30);
    int legit = 0, spoofed = 0;
    for (const auto& t : corpus.traces)
        (*t.label == TraceLabel::legitimate ? legit : spoofed)++;
    CHECK(legit == 12);
    CHECK(spoofed == 18);

    const Corpus one = generate_corpus(small_config(1));
    CHECK(one.traces.size() == 10);
}

TEST_CASE("per-trace seeds derive from the master seed and indices") {
    const Corpus corpus = generate_corpus(small_config(2));
    for (int si = 0; si < kScenarioCount; ++si)
        for (int ti = 0; ti < 2; ++ti)
            CHECK(*corpus.traces[si * 2 + ti].seed ==
                  derive_seed(corpus.config.master_seed, si, ti));
}

TEST_CASE("corpus regeneration is byte-identical") {
    const CorpusConfig cfg = small_config(3);
    const std::string a = serialize_corpus(generate_corpus(cfg));
    const std::string b = serialize_corpus(generate_corpus(cfg));
    CHECK(a == b);
    CHECK(content_hash_of_bytes(a) == content_hash_of_bytes(b));

    CorpusConfig other = cfg;
    other.master_seed = cfg.master_seed + 1;
    CHECK(serialize_corpus(generate_corpus(other)) != a);
}

TEST_CASE("teleportation traces embed the jump") {
    const CorpusConfig cfg = small_config();
    for (uint64_t seed : {5ull, 6ull, 7ull}) {
        const Trace t = generate_trace(Scenario::teleportation, seed, cfg);
        CHECK(max_pair_speed(t) > 100.0);

        // at least one fix lands in the deny band under defaults
        const auto scores = score_trace(t, kC, kT);
        double mn = 1.0;
        for (const auto& sf : scores)
            if (sf.scored) mn = std::min(mn, sf.trust);
        CHECK(mn < 0.3);
    }
}

TEST_CASE("accuracy traces report implausibly small accuracy everywhere") {
    const Trace t = generate_trace(Scenario::accuracy, 9, small_config());
    for (const auto& fix : t.fixes) CHECK(fix.accuracy_m < 2.0);
}

TEST_CASE("legitimate traces stay above the trust floor") {
    CorpusConfig cfg = small_config(25);
    const Corpus corpus = generate_corpus(cfg);
    double mn = 1.0;
    for (const auto& trace : corpus.traces) {
        if (*trace.label != TraceLabel::legitimate) continue;
        for (const auto& sf : score_trace(trace, kC, kT))
            if (sf.scored) mn = std::min(mn, sf.trust);
    }
    CHECK(mn >= 0.85);
}

TEST_CASE("legitimate motion never crosses the movement knee") {
    const CorpusConfig cfg = small_config(6);
    for (Scenario sc : {Scenario::walking, Scenario::driving, Scenario::stationary, Scenario::train})
        for (uint64_t seed = 0; seed < 6; ++seed)
            CHECK(max_pair_speed(generate_trace(sc, derive_seed(cfg.master_seed,
                                                               static_cast<int>(sc), seed),
                                                cfg)) < 50.0);
}

TEST_CASE("unknown scenario name is rejected") {
    CHECK_THROWS_AS(scenario_from_name("jetpack"), Error);
    CHECK(scenario_from_name("net_mismatch") == Scenario::net_mismatch);
}

TEST_CASE("config validation") {
    CorpusConfig cfg;
    cfg.fixes_per_trace = 1;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = CorpusConfig{};
    cfg.fix_interval_ms = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = CorpusConfig{};
    cfg.traces_per_scenario = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
}
