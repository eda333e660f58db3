#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + "\"" CATREP_CLI_PATH "\" " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int st = pclose(pipe);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> comments;

    int col(const std::string& prefix) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i].rfind(prefix, 0) == 0) return static_cast<int>(i);
        FAIL("missing column " << prefix);
        return -1;
    }
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
    return out;
}

Csv parse_csv(const std::string& text) {
    Csv c;
    std::stringstream ss(text);
    for (std::string line; std::getline(ss, line);) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            c.comments.push_back(line);
        } else if (c.header.empty()) {
            c.header = split(line);
        } else {
            c.rows.push_back(split(line));
        }
    }
    return c;
}

fs::path scratch_dir() {
    const fs::path p = fs::temp_directory_path() / ("catrep_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("link-probs at r = 1/2 gives 1/4") {
    const Run r = run("fig link-probs --r-bs 0.5 --a 1.0");
    REQUIRE(r.status == 0);
    const Csv c = parse_csv(r.out);
    const int pair = c.col("pair"), pm = c.col("p_minus");
    bool found = false;
    for (const auto& row : c.rows)
        if (row[pair] == "odd-odd") {
            CHECK(std::abs(std::stod(row[pm]) - 0.25) < 1e-12);
            found = true;
        }
    CHECK(found);
}

TEST_CASE("header lists defaults and units") {
    const Run r = run("fig success --a 0.5");
    REQUIRE(r.status == 0);
    const Csv c = parse_csv(r.out);
    bool defaults = false;
    for (const auto& line : c.comments)
        if (line.find("r_bs=0.2") != std::string::npos && line.find("xi=0.9") != std::string::npos &&
            line.find("eta=0.95") != std::string::npos && line.find("kappa_db_per_km=0.2") != std::string::npos)
            defaults = true;
    CHECK(defaults);
    for (const auto& h : c.header)
        if (h != "pair" && h != "parity") CHECK(h.find('[') != std::string::npos);
}

TEST_CASE("fidelity at a = 0, even parity") {
    const Run r = run("fig fidelity --a 0 --parity even");
    REQUIRE(r.status == 0);
    const Csv c = parse_csv(r.out);
    REQUIRE(c.rows.size() == 3);
    const int fp = c.col("f_plus"), pair = c.col("pair");
    // The cross pair heralds the other branch on an even click.
    for (const auto& row : c.rows)
        if (row[pair] != "cross") CHECK(std::stod(row[fp]) == 1.0);
}

TEST_CASE("timing at 50 km lands in milliseconds") {
    for (const char* cmd : {"timing", "fig timing"}) {
        const Run r = run(std::string(cmd) + " --L 50 --kappa 0.2 --xi 0.9 --r-bs 0.2 --a 0.01");
        REQUIRE(r.status == 0);
        const Csv c = parse_csv(r.out);
        REQUIRE(c.rows.size() == 1);
        for (const char* col : {"t_wait [s]", "t_wait_c"}) {
            const double t = std::stod(c.rows[0][c.col(col)]);
            CHECK(t >= 1e-3);
            CHECK(t < 1e-1);
        }
    }
}

TEST_CASE("probability and fidelity columns stay in [0, 1]") {
    for (const char* args : {"fig link-probs --a 0:5:11 --r-bs 0.1,0.5,0.9", "fig click-probs --a 0.1:3:5",
                             "fig success --a 0:4:9 --eta 0.5,1", "fig fidelity --a 0:4:9 --r-bs 0.2,0.6",
                             "fig teleport --a 0.01:2:8"}) {
        const Run r = run(args);
        REQUIRE(r.status == 0);
        const Csv c = parse_csv(r.out);
        for (std::size_t i = 0; i < c.header.size(); ++i) {
            const bool bounded = c.header[i].find("[prob]") != std::string::npos ||
                                 c.header[i].rfind("f_", 0) == 0 || c.header[i].rfind("phase_fidelity [", 0) == 0;
            if (!bounded) continue;
            for (const auto& row : c.rows) {
                if (row[i] == "nan") continue;
                const double v = std::stod(row[i]);
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
            }
        }
    }
}

TEST_CASE("truth table output") {
    const Run r = run("fig teleport --truth-table");
    REQUIRE(r.status == 0);
    const Csv c = parse_csv(r.out);
    CHECK(c.rows.size() == 16);
}

TEST_CASE("json output mirrors the columns") {
    const Run r = run("fig link-probs --a 1 --pair cross --format json");
    REQUIRE(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["command"] == "fig link-probs");
    REQUIRE(j["rows"].size() == 1);
    CHECK(j["rows"][0]["pair"] == "cross");
    CHECK(j["rows"][0]["p_plus [prob]"].is_number());
    CHECK(j["defaults"]["r_bs"] == 0.2);
}

TEST_CASE("output directory from the environment and config files") {
    const fs::path dir = scratch_dir();
    const Run r = run("fig link-probs --a 0.5", "CATREP_OUTPUT_DIR=\"" + dir.string() + "\"");
    REQUIRE(r.status == 0);
    CHECK(r.out.empty());
    CHECK(fs::exists(dir / "link_probs.csv"));

    const fs::path cfg = dir / "cfg.json";
    std::ofstream(cfg) << R"({"a": "0.25", "r_bs": 0.5, "pair": "odd-odd"})";
    const Run fromcfg = run("fig link-probs --config \"" + cfg.string() + "\" --out -");
    REQUIRE(fromcfg.status == 0);
    const Csv c = parse_csv(fromcfg.out);
    REQUIRE(c.rows.size() == 1);
    CHECK(std::stod(c.rows[0][c.col("a [")]) == 0.25);
    CHECK(std::abs(std::stod(c.rows[0][c.col("p_minus")]) - 0.25) < 1e-12);

    // Command-line flags take precedence over the file.
    const Run over = run("fig link-probs --config \"" + cfg.string() + "\" --a 2 --out -");
    REQUIRE(over.status == 0);
    CHECK(std::stod(parse_csv(over.out).rows[0][c.col("a [")]) == 2.0);

    std::ofstream(dir / "bad.json") << R"({"no_such_option": 1})";
    CHECK(run("fig link-probs --config \"" + (dir / "bad.json").string() + "\"").status == 1);
    fs::remove_all(dir);
}

TEST_CASE("usage errors exit with status 1") {
    CHECK(run("").status == 1);
    CHECK(run("fig").status == 1);
    CHECK(run("fig link-probs --a oops").status == 1);
    CHECK(run("fig link-probs --a 1:2").status == 1);
    CHECK(run("fig link-probs --r-bs 1.5").status == 1);
    CHECK(run("fig success --parity sideways").status == 1);
    CHECK(run("fig link-probs --format xml").status == 1);
    CHECK(run("simulate --trials 0").status == 1);
    CHECK(run("verify --quantity nonsense").status == 1);
    CHECK(run("--help").status == 0);
}

TEST_CASE("verify emits passing JSON reports") {
    const Run r = run("verify --quantity parity_probs");
    REQUIRE(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.is_array());
    CHECK(j.size() > 0);
    for (const auto& rep : j) CHECK(rep["passed"] == true);
}

TEST_CASE("simulate agrees with the analytic counts and is repeatable") {
    const std::string args = "simulate --p1 0.3 --p2 0.7 --trials 200000 --seed 5";
    const Run a = run(args + " --workers 1");
    const Run b = run(args + " --workers 4");
    REQUIRE(a.status == 0);
    CHECK(a.out == b.out);
    const Csv c = parse_csv(a.out);
    REQUIRE(c.rows.size() == 4);
    for (const auto& row : c.rows) CHECK(std::abs(std::stod(row[c.col("z")])) < 4.0);
}
