// End-to-end checks of the command line binary (path injected by CMake).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(LOCGATE_CLI_PATH) + " " + args + " 2>&1";
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    while (fgets(buf.data(), buf.size(), pipe)) res.output += buf.data();
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

struct TmpDir {
    std::filesystem::path path;
    explicit TmpDir(const char* name) : path(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TmpDir() { std::filesystem::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("generate: deterministic corpus with manifest") {
    TmpDir dir("locgate_cli_gen");
    const std::string out1 = dir.file("a.jsonl");
    const std::string out2 = dir.file("b.jsonl");

    const auto r1 = run_cli("generate --traces-per-scenario 2 --out " + out1);
    INFO(r1.output);
    CHECK(r1.exit_code == 0);
    CHECK(r1.output.find("wrote 20 traces") != std::string::npos);
    CHECK(std::filesystem::exists(out1 + ".manifest.json"));

    const auto r2 = run_cli("generate --traces-per-scenario 2 --out " + out2);
    CHECK(r2.exit_code == 0);

    // identical hash lines modulo the path
    const auto hash_of = [](const std::string& s) {
        const auto p = s.find("fnv1a64:");
        return s.substr(p, 24);
    };
    CHECK(hash_of(r1.output) == hash_of(r2.output));

    std::ifstream f1(out1), f2(out2);
    const std::string c1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    const std::string c2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(c1 == c2);

    // a different seed changes the contents
    const auto r3 = run_cli("generate --traces-per-scenario 2 --seed 7 --out " + dir.file("c.jsonl"));
    CHECK(r3.exit_code == 0);
    CHECK(hash_of(r3.output) != hash_of(r1.output));
}

TEST_CASE("replay: per-fix log with latch column") {
    TmpDir dir("locgate_cli_replay");
    const std::string corpus = dir.file("c.jsonl");
    REQUIRE(run_cli("generate --traces-per-scenario 1 --out " + corpus).exit_code == 0);

    const auto r = run_cli("replay --in " + corpus);
    INFO(r.output);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("#0 t=unscored action=unscored latch=none") != std::string::npos);
    CHECK(r.output.find("latch=deny") != std::string::npos);  // the teleport trace
    CHECK(r.output.find("disposition=denied") != std::string::npos);
    CHECK(r.output.find("summary session=walking") != std::string::npos);

    // a stricter gate escalates instead of passing borderline traffic
    const auto strict = run_cli("replay --theta-p 0.9 --in " + corpus);
    CHECK(strict.exit_code == 0);
    CHECK(strict.output.find("action=step-up") != std::string::npos);

    const auto bin = run_cli("replay --mode binary --in " + corpus);
    CHECK(bin.exit_code == 0);
    CHECK(bin.output.find("action=step-up") == std::string::npos);

    const auto bad_mode = run_cli("replay --mode sideways --in " + corpus);
    CHECK(bad_mode.exit_code == 2);
}

TEST_CASE("replay: malformed input reports the line and fails validation-style") {
    TmpDir dir("locgate_cli_bad");
    {
        std::ofstream out(dir.file("bad.jsonl"));
        out << R"({"session_id":"a","t_ms":1,"lat":0,"lon":0,"accuracy_m":5})" << "\n";
        out << "garbage\n";
    }
    const auto r = run_cli("replay --in " + dir.file("bad.jsonl"));
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("line 2") != std::string::npos);

    const auto missing = run_cli("replay --in " + dir.file("nope.jsonl"));
    CHECK(missing.exit_code == 4);
}

TEST_CASE("experiment: reports, unknown names, config file handling") {
    TmpDir dir("locgate_cli_exp");
    const std::string corpus = dir.file("c.jsonl");
    REQUIRE(run_cli("generate --traces-per-scenario 3 --out " + corpus).exit_code == 0);

    const auto r = run_cli("experiment sweep --corpus " + corpus + " --out " + dir.file("rep"));
    INFO(r.output);
    CHECK(r.exit_code == 0);
    CHECK(std::filesystem::exists(dir.path / "rep" / "sweep.csv"));
    CHECK(std::filesystem::exists(dir.path / "rep" / "sweep.md"));

    const auto unknown = run_cli("experiment warp --out " + dir.file("rep"));
    CHECK(unknown.exit_code == 2);

    // config file drives thresholds; unknown keys fail under strict_parse
    {
        std::ofstream out(dir.file("cfg.json"));
        out << R"({"schema_version": 1, "strict_parse": true, "typo_field": 1})";
    }
    const auto bad_cfg =
        run_cli("--config " + dir.file("cfg.json") + " experiment sweep --corpus " + corpus);
    CHECK(bad_cfg.exit_code == 3);
}

TEST_CASE("usage errors exit with the usage code") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("replay").exit_code == 2);          // missing --in
    CHECK(run_cli("frobnicate").exit_code == 2);      // unknown subcommand
}
