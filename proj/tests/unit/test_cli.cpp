#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>

namespace {

const std::string kFixtures = LEV_FIXTURE_DIR;

struct Run {
    int status = -1;
    std::string out;
};

// Runs the CLI through the shell; stderr is folded into the captured text
// only when requested.
Run run(const std::string& args, bool merge_stderr = false, const std::string& env = "") {
    std::string cmd = env + (env.empty() ? "" : " ") + "\"" LEV_CLI "\" " + args;
    cmd += merge_stderr ? " 2>&1" : " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
    const int st = pclose(pipe);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::set<std::string> rows_with_prefix(const std::string& text, const std::string& prefix) {
    std::set<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (line.starts_with(prefix)) out.insert(line);
    }
    return out;
}

const std::string kInputs = " --format delimited --seed 7 null=" + kFixtures + "/null.csv leverage=" + kFixtures +
                            "/leverage.csv";
const std::string kCommon = " --surrogates 200 --replicas 200" + kInputs;

}  // namespace

TEST_CASE("subcommands reproduce the one-shot pipeline", "[cli]") {
    const auto full = run("pipeline" + kCommon);
    REQUIRE(full.status == 0);
    // Each subcommand accepts only the options of its own stage.
    const std::array<std::pair<std::string, const char*>, 5> stages{{{"describe" + kInputs, "descriptive,"},
                                                                      {"lrd-test" + kInputs, "memory_tests,"},
                                                                      {"hurst" + kInputs, "hurst,"},
                                                                      {"xcorr --surrogates 200" + kInputs, "correlation,"},
                                                                      {"rct --replicas 200" + kInputs, "rescaled_covariance,"}}};
    for (const auto& [cmd, prefix] : stages) {
        const auto part = run(cmd);
        REQUIRE(part.status == 0);
        const auto rows = rows_with_prefix(part.out, prefix);
        CHECK_FALSE(rows.empty());
        CHECK(rows == rows_with_prefix(full.out, prefix));
    }
}

TEST_CASE("configuration file and output formats", "[cli]") {
    const auto a = run("pipeline -c " + kFixtures + "/pipeline.json --format json");
    REQUIRE(a.status == 0);
    CHECK(a.out.find("\"instruments\"") != std::string::npos);
    CHECK(run("pipeline -c " + kFixtures + "/pipeline.json --format json").out == a.out);

    const auto t = run("pipeline -c " + kFixtures + "/pipeline.json");
    REQUIRE(t.status == 0);
    CHECK(t.out.find("Table 5.") != std::string::npos);

    const auto d = run("pipeline -c " + kFixtures + "/pipeline.json --format delimited");
    CHECK(rows_with_prefix(d.out, "correlation,") == rows_with_prefix(run("xcorr --surrogates 200" + kInputs).out, "correlation,"));
}

TEST_CASE("seed from the environment", "[cli]") {
    const auto flag = run("xcorr --format csv --surrogates 200 --seed 99 " + kFixtures + "/null.csv");
    const auto env = run("xcorr --format csv --surrogates 200 " + kFixtures + "/null.csv", false, "LEVERAGE_SEED=99");
    REQUIRE(flag.status == 0);
    CHECK(flag.out == env.out);
    const auto other = run("xcorr --format csv --surrogates 200 --seed 98 " + kFixtures + "/null.csv");
    CHECK(other.out != flag.out);
}

TEST_CASE("ingest with a vendor column mapping", "[cli]") {
    const auto r = run("ingest --columns " + kFixtures + "/columns.json " + kFixtures + "/vendor.csv", true);
    REQUIRE(r.status == 0);
    CHECK(r.out.find("line 301 rejected") != std::string::npos);
    CHECK(r.out.find("duplicate date") != std::string::npos);
    const auto clean = run("ingest --columns " + kFixtures + "/columns.json " + kFixtures + "/vendor.csv");
    CHECK(clean.out.starts_with("date,open,high,low,close,"));
    CHECK(std::count(clean.out.begin(), clean.out.end(), '\n') == 600);  // header + 599 bars

    const auto strict = run("ingest --strict --columns " + kFixtures + "/columns.json " + kFixtures + "/vendor.csv",
                            true);
    CHECK(strict.status == 1);
    CHECK(strict.out.find("[vendor:ingest]") != std::string::npos);
}

TEST_CASE("errors exit non-zero with a stage tag", "[cli]") {
    const auto missing = run("pipeline " + kFixtures + "/absent.csv", true);
    CHECK(missing.status == 1);
    CHECK(missing.out.find("[absent:ingest]") != std::string::npos);

    const auto window = run("xcorr --window 2 " + kFixtures + "/null.csv", true);
    CHECK(window.status == 1);
    CHECK(window.out.find("[*:config]") != std::string::npos);

    const auto range = run("pipeline --from 2003-01-01 --to 2002-01-01 " + kFixtures + "/null.csv", true);
    CHECK(range.status == 1);
    CHECK(range.out.find("config") != std::string::npos);

    CHECK(run("pipeline --format xml " + kFixtures + "/null.csv").status != 0);
    CHECK(run("no-such-command").status != 0);
}

TEST_CASE("simulate is deterministic", "[cli]") {
    for (const char* kind : {"fgn", "arfima", "pair", "gbm", "sv"}) {
        const std::string args = std::string("simulate --kind ") + kind + " --length 64 --steps 64 --seed 5";
        const auto a = run(args);
        REQUIRE(a.status == 0);
        CHECK(a.out == run(args).out);
        CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 65);
    }
    CHECK(run("simulate --kind fgn --hurst 1.2").status == 1);
    CHECK(run("simulate --kind pair --hurst 0.5 --hurst2 0.95 --correlation 0.99").status == 1);
}
