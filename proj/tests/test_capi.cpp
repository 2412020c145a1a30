// Exercises the shared-library C surface end to end.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "locgate.h"

namespace {

struct TmpDir {
    std::filesystem::path path;
    explicit TmpDir(const char* name) : path(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TmpDir() { std::filesystem::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

locgate_fix make_fix(int64_t t_ms, double lat, double lon, double acc) {
    locgate_fix f{};
    f.t_ms = t_ms;
    f.lat = lat;
    f.lon = lon;
    f.accuracy_m = acc;
    return f;
}

}  // namespace

TEST_CASE("version and error text") {
    CHECK(std::string(locgate_version()) == "0.1.0");
    CHECK(locgate_last_error() != nullptr);
}

TEST_CASE("config handles and validation errors") {
    locgate_config* cfg = locgate_config_new();
    REQUIRE(cfg != nullptr);
    CHECK(locgate_config_set_thresholds(cfg, 0.9, 0.2) == LOCGATE_OK);
    double tp = 0, ts = 0;
    CHECK(locgate_config_get_thresholds(cfg, &tp, &ts) == LOCGATE_OK);
    CHECK(tp == 0.9);
    CHECK(ts == 0.2);

    CHECK(locgate_config_set_thresholds(cfg, 0.2, 0.9) == LOCGATE_E_VALIDATION);
    CHECK(std::strlen(locgate_last_error()) > 0);
    // the failed call left the previous values alone
    CHECK(locgate_config_get_thresholds(cfg, &tp, &ts) == LOCGATE_OK);
    CHECK(tp == 0.9);
    locgate_config_free(cfg);
}

TEST_CASE("config load from file") {
    TmpDir dir("locgate_capi_cfg");
    {
        std::ofstream out(dir.file("cfg.json"));
        out << R"({"schema_version": 1, "theta_p": 0.8, "theta_s": 0.25})";
    }
    locgate_config* cfg = nullptr;
    REQUIRE(locgate_config_load(dir.file("cfg.json").c_str(), &cfg) == LOCGATE_OK);
    double tp = 0, ts = 0;
    locgate_config_get_thresholds(cfg, &tp, &ts);
    CHECK(tp == 0.8);
    CHECK(ts == 0.25);
    locgate_config_free(cfg);

    locgate_config* bad = nullptr;
    CHECK(locgate_config_load(dir.file("missing.json").c_str(), &bad) == LOCGATE_E_IO);
}

TEST_CASE("gate_eval boundaries through the C surface") {
    locgate_action a;
    REQUIRE(locgate_gate_eval(0.7, 0.7, 0.3, &a) == LOCGATE_OK);
    CHECK(a == LOCGATE_ACTION_PROCEED);
    REQUIRE(locgate_gate_eval(0.3, 0.7, 0.3, &a) == LOCGATE_OK);
    CHECK(a == LOCGATE_ACTION_STEP_UP);
    REQUIRE(locgate_gate_eval(0.29, 0.7, 0.3, &a) == LOCGATE_OK);
    CHECK(a == LOCGATE_ACTION_DENY);
    CHECK(locgate_gate_eval(1.5, 0.7, 0.3, &a) == LOCGATE_E_VALIDATION);
}

TEST_CASE("session stepping, latch and resolution") {
    locgate_config* cfg = locgate_config_new();
    locgate_session* sess = nullptr;
    REQUIRE(locgate_session_new(cfg, "dev-1", &sess) == LOCGATE_OK);

    locgate_step_result r{};
    locgate_fix f0 = make_fix(1000, 35.0, 139.0, 15.0);
    REQUIRE(locgate_session_step(sess, &f0, &r) == LOCGATE_OK);
    CHECK(r.action == LOCGATE_ACTION_UNSCORED_PROCEED);
    CHECK(r.scored == 0);

    locgate_fix f1 = make_fix(2000, 35.0001, 139.0, 15.0);
    REQUIRE(locgate_session_step(sess, &f1, &r) == LOCGATE_OK);
    CHECK(r.scored == 1);
    CHECK(r.trust == doctest::Approx(1.0));
    CHECK(r.action == LOCGATE_ACTION_PROCEED);
    CHECK(locgate_session_latch(sess) == LOCGATE_LATCH_NONE);

    // teleport: latch to deny, stay there
    locgate_fix f2 = make_fix(3000, 25.76, -80.19, 0.01);
    REQUIRE(locgate_session_step(sess, &f2, &r) == LOCGATE_OK);
    CHECK(r.action == LOCGATE_ACTION_DENY);
    CHECK(locgate_session_latch(sess) == LOCGATE_LATCH_DENY);
    locgate_fix f3 = make_fix(4000, 25.76, -80.19, 15.0);
    REQUIRE(locgate_session_step(sess, &f3, &r) == LOCGATE_OK);
    CHECK(r.action == LOCGATE_ACTION_DENY);
    CHECK(r.scored == 0);

    // resolving a deny latch is a state error
    CHECK(locgate_session_resolve_step_up(sess, 1) == LOCGATE_E_STATE);

    // timestamp regression surfaces as validation
    locgate_fix f4 = make_fix(500, 25.76, -80.19, 15.0);
    CHECK(locgate_session_step(sess, &f4, &r) == LOCGATE_E_VALIDATION);

    locgate_session_free(sess);
    locgate_config_free(cfg);
}

TEST_CASE("corpus generate, hash, save, load, replay") {
    TmpDir dir("locgate_capi_corpus");
    locgate_config* cfg = locgate_config_new();
    REQUIRE(locgate_config_set_traces_per_scenario(cfg, 1) == LOCGATE_OK);

    locgate_corpus* corpus = nullptr;
    REQUIRE(locgate_corpus_generate(cfg, &corpus) == LOCGATE_OK);
    CHECK(locgate_corpus_trace_count(corpus) == 10);

    char hash[64];
    REQUIRE(locgate_corpus_content_hash(corpus, hash, sizeof(hash)) == LOCGATE_OK);
    CHECK(std::string(hash).rfind("fnv1a64:", 0) == 0);
    char tiny[4];
    CHECK(locgate_corpus_content_hash(corpus, tiny, sizeof(tiny)) == LOCGATE_E_ARG);

    const std::string path = dir.file("c.jsonl");
    REQUIRE(locgate_corpus_save(corpus, path.c_str()) == LOCGATE_OK);
    CHECK(std::filesystem::exists(path + ".manifest.json"));

    locgate_corpus* loaded = nullptr;
    REQUIRE(locgate_corpus_load(cfg, path.c_str(), &loaded) == LOCGATE_OK);
    CHECK(locgate_corpus_trace_count(loaded) == 10);
    char hash2[64];
    REQUIRE(locgate_corpus_content_hash(loaded, hash2, sizeof(hash2)) == LOCGATE_OK);
    CHECK(std::string(hash) == hash2);

    // replay the file through the graduated gate
    locgate_replay* replay = nullptr;
    REQUIRE(locgate_replay_file(cfg, path.c_str(), LOCGATE_MODE_GRADUATED, &replay) == LOCGATE_OK);
    REQUIRE(locgate_replay_trace_count(replay) == 10);

    bool saw_deny_latch = false;
    for (size_t t = 0; t < 10; ++t) {
        locgate_replay_summary sum{};
        REQUIRE(locgate_replay_summary_at(replay, t, &sum) == LOCGATE_OK);
        CHECK(sum.fix_count == 60);
        CHECK(sum.scored_count <= 59);
        const std::string sid = sum.session_id;
        if (sid.rfind("teleportation", 0) == 0) {
            CHECK(sum.disposition == LOCGATE_DISP_DENIED);
            CHECK(sum.final_latch == LOCGATE_LATCH_DENY);
            saw_deny_latch = true;
            // every fix after the first latch reports deny
            bool latched = false;
            for (size_t i = 0; i < sum.fix_count; ++i) {
                locgate_replay_row row{};
                REQUIRE(locgate_replay_row_at(replay, t, i, &row) == LOCGATE_OK);
                if (latched) CHECK(row.action == LOCGATE_ACTION_DENY);
                if (row.latch == LOCGATE_LATCH_DENY) latched = true;
            }
        }
        if (sid.rfind("walking", 0) == 0) {
            CHECK(sum.disposition == LOCGATE_DISP_ACCEPTED);
            CHECK(sum.min_trust >= 0.85);
        }
    }
    CHECK(saw_deny_latch);

    locgate_replay_row row{};
    CHECK(locgate_replay_row_at(replay, 0, 1000, &row) == LOCGATE_E_ARG);

    locgate_replay_free(replay);
    locgate_corpus_free(loaded);
    locgate_corpus_free(corpus);
    locgate_config_free(cfg);
}

TEST_CASE("experiment dispatch and bench through the C surface") {
    TmpDir dir("locgate_capi_exp");
    locgate_config* cfg = locgate_config_new();
    REQUIRE(locgate_config_set_traces_per_scenario(cfg, 5) == LOCGATE_OK);

    CHECK(locgate_experiment_run(cfg, nullptr, "nonsense", dir.file("out").c_str()) ==
          LOCGATE_E_ARG);
    REQUIRE(locgate_experiment_run(cfg, nullptr, "sweep", dir.file("out").c_str()) == LOCGATE_OK);
    CHECK(std::filesystem::exists(dir.path / "out" / "sweep.csv"));

    double median = 0, p99 = 0;
    REQUIRE(locgate_bench_scoring(cfg, 20'000, &median, &p99) == LOCGATE_OK);
    CHECK(median > 0.0);
    CHECK(p99 >= median);
    CHECK(locgate_bench_scoring(cfg, 10, &median, &p99) == LOCGATE_E_ARG);

    locgate_config_free(cfg);
}
