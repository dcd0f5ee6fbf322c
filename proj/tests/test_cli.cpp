// End-to-end checks of the command-line tool: exit codes, output formats,
// and byte-identical reruns.

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

#ifndef ZDLAB_CLI_PATH
#error "ZDLAB_CLI_PATH must point at the CLI binary"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const fs::path tmp = fs::path("cli_out.txt");
    const std::string cmd = std::string(ZDLAB_CLI_PATH) + " " + args + " > " + tmp.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(raw);
    std::ifstream is(tmp);
    std::stringstream ss;
    ss << is.rdbuf();
    r.out = ss.str();
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// Parses the x,log_pdf,pdf CSV into columns, skipping # comments.
std::vector<std::array<double, 3>> parse_density_csv(const std::string& text) {
    std::vector<std::array<double, 3>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'x') continue;
        std::array<double, 3> row{};
        std::sscanf(line.c_str(), "%lf,%lf,%lf", &row[0], &row[1], &row[2]);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("list-models table and json") {
    const RunResult text = run_cli("list-models");
    CHECK(text.exit_code == 0);
    for (const char* name : {"gamma", "weibull", "lognormal", "pareto", "expsqrt", "exp"})
        CHECK(text.out.find(name) != std::string::npos);

    const RunResult json = run_cli("list-models --format json");
    CHECK(json.exit_code == 0);
    const auto parsed = nlohmann::json::parse(json.out);
    CHECK(parsed.is_array());
    CHECK(parsed.size() == 6);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("list-models --bogus-flag").exit_code == 2);
    CHECK(run_cli("density --model nope:q=1 --d 5").exit_code == 2);
    CHECK(run_cli("density --model weibull:alpha=0 --d 5").exit_code == 2);
    CHECK(run_cli("analyze").exit_code == 2);
}

TEST_CASE("show-defaults prints the table") {
    const RunResult r = run_cli("--show-defaults");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("ZDLAB_THREADS") != std::string::npos);
    CHECK(r.out.find("d ladder") != std::string::npos);
}

TEST_CASE("density command output and reproducibility") {
    const RunResult r = run_cli("density --model gamma:a=2 --d 100 --grid-n 128 --out d1.csv");
    CHECK(r.exit_code == 0);
    const std::string first = slurp("d1.csv");
    const auto rows = parse_density_csv(first);
    CHECK(rows.size() >= 128);
    for (const auto& row : rows) {
        const double beta = 6.0 * row[0] * (1.0 - row[0]);
        CHECK(std::fabs(row[2] - beta) < 1e-6);
    }
    CHECK(fs::exists("d1.csv.manifest.json"));
    const std::string manifest_first = slurp("d1.csv.manifest.json");

    // rerun: byte identical outputs and manifest
    const RunResult again = run_cli("density --model gamma:a=2 --d 100 --grid-n 128 --out d1.csv");
    CHECK(again.exit_code == 0);
    CHECK(slurp("d1.csv") == first);
    CHECK(slurp("d1.csv.manifest.json") == manifest_first);

    const auto man = nlohmann::json::parse(manifest_first);
    CHECK(man["command"] == "density");
    CHECK(man["tool_version"].is_string());
}

TEST_CASE("density of the exponential family is the uniform table") {
    const RunResult r = run_cli("density --model exp --d 10 --grid-n 64 --out d2.csv");
    CHECK(r.exit_code == 0);
    for (const auto& row : parse_density_csv(slurp("d2.csv")))
        CHECK(std::fabs(row[2] - 1.0) < 1e-9);
}

TEST_CASE("infeasible domain exits with code 3") {
    CHECK(run_cli("density --model pareto:alpha=2,t0=1 --d 1").exit_code == 3);
    CHECK(run_cli("density --model pareto:alpha=2,t0=1 --d 2").exit_code == 3);
}

TEST_CASE("analyze reports") {
    const RunResult w = run_cli("analyze --model weibull:alpha=0.5 --out a1.json");
    CHECK(w.exit_code == 0);
    const auto jw = nlohmann::json::parse(slurp("a1.json"));
    CHECK(jw["behaviour"] == "TypeI");

    const RunResult y = run_cli("analyze --model expsqrt:-");
    CHECK(y.exit_code == 0);
    const auto jy = nlohmann::json::parse(y.out);
    CHECK(jy["behaviour"] == "TypeI");
    CHECK(jy["tail_class"] == "Light");

    // certificate route with a short ladder for speed
    const RunResult p = run_cli(
        "analyze --model pareto:alpha=2,t0=1 --certify-pointwise "
        "--d-ladder 10,40,160,640,2560,10240,40960");
    CHECK(p.exit_code == 0);
    const auto jp = nlohmann::json::parse(p.out);
    CHECK(jp["pointwise_certificate"] == "vanishing");
    CHECK(jp["behaviour"] == "TypeI");
}

TEST_CASE("ladder command") {
    const RunResult r = run_cli("ladder --model gamma:a=3 --d-ladder 10,40,160,640 --out l1");
    CHECK(r.exit_code == 0);
    const auto sum = nlohmann::json::parse(slurp("l1.summary.json"));
    CHECK(sum["verdict"] == "Stationary");
    CHECK(slurp("l1.csv").find("d,endpoint_mass,midpoint_mass") != std::string::npos);
    CHECK(fs::exists("l1.manifest.json"));
}

TEST_CASE("simulate command") {
    const RunResult r = run_cli("simulate --model exp --d 6 --delta 0.1 --n 2000 --seed 3 --out s1");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(slurp("s1.json"));
    CHECK(j["n_samples"] == 2000);
    CHECK(j["ks_stat"].get<double>() < 0.05);
    CHECK(fs::exists("s1.samples.csv"));
    CHECK(fs::exists("s1.manifest.json"));

    const std::string sidecar = slurp("s1.json");
    const RunResult again =
        run_cli("simulate --model exp --d 6 --delta 0.1 --n 2000 --seed 3 --out s1");
    CHECK(again.exit_code == 0);
    CHECK(slurp("s1.json") == sidecar);
}

TEST_CASE("acceptance floor exits with code 4") {
    const RunResult r = run_cli("simulate --model weibull:alpha=2 --d 10000 --delta 1 --n 100");
    CHECK(r.exit_code == 4);
    CHECK(r.out.find("acceptance rate") != std::string::npos);
}
