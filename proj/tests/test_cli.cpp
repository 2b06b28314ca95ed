#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

#ifndef WREM_CLI_PATH
#define WREM_CLI_PATH "wrem"
#endif

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(WREM_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, n);
    int status = pclose(f);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path scratch() {
    fs::path d = fs::temp_directory_path() / ("wrem_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("help and usage errors") {
    CHECK(run("--help").code == 0);
    CHECK(run("porosity --help").code == 0);
    CHECK(run("").code == 2);
    CHECK(run("no-such-command").code == 2);
    CHECK(run("porosity --s abc").code == 2);
}

TEST_CASE("weight-profile") {
    Run r = run("weight-profile --weight const --samples 60");
    REQUIRE(r.code == 0);
    auto j = ordered_json::parse(r.out);
    CHECK(j.contains("schema_version"));
    CHECK(r.out.find("delta") != std::string::npos);
    CHECK(run("weight-profile --weight power --gamma -2").code == 2);
}

TEST_CASE("porosity verdicts and validation") {
    Run r = run("porosity --eta 0.1 --upsilon 1.1 --s 3 --p 1 --c1 1");
    REQUIRE(r.code == 0);
    auto j = ordered_json::parse(r.out)["report"];
    CHECK(j["verdict"] == "diverges");
    CHECK(j["t_k"].size() > 8);

    Run cf = run("porosity --criterion closed-form --upsilon 1.1 --s 3 --p 1 --c1 1");
    REQUIRE(cf.code == 0);
    auto k = ordered_json::parse(cf.out)["report"];
    CHECK(k["verdict"] == "diverges");
    CHECK(k["closed_form"]["lhs"].get<double>() == doctest::Approx(1.9));

    CHECK(run("porosity --s 1 --p 1 --c1 1").code == 2);
    CHECK(run("porosity --eta 0.5 --upsilon 1.1 --s 3 --p 1 --c1 1").code == 2);  // eta tau / (1 - 2 tau) > 1
    CHECK(run("porosity --tau 0.25 --upsilon 1.5 --s 3 --c1 1").code == 2);
}

TEST_CASE("reports are deterministic and round-trip byte for byte") {
    Run a = run("cantor-gen --eta 0.5 --tau 0.25 --levels 4");
    Run b = run("cantor-gen --eta 0.5 --tau 0.25 --levels 4");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto j = ordered_json::parse(a.out);
    REQUIRE(j["levels"].size() == 5);
    for (auto& lv : j["levels"]) {
        CHECK(lv["checks"]["disjoint"] == true);
        CHECK(lv["checks"]["rings_avoid_E"] == true);
    }
    std::string once = j.dump(2);
    CHECK(ordered_json::parse(once).dump(2) == once);

    Run w = run("weight-profile --weight power --gamma 1 --samples 30 --seed 5");
    Run v = run("weight-profile --weight power --gamma 1 --samples 30 --seed 5");
    CHECK(w.out == v.out);
}

TEST_CASE("config file merge, flags win") {
    fs::path d = scratch();
    fs::path ini = d / "run.ini";
    std::ofstream(ini) << "[porosity]\ns = 1.2\np = 1\nc1 = 1\nupsilon = 3\ncriterion = closed-form\n";
    Run from_file = run("--config " + ini.string() + " porosity");
    REQUIRE(from_file.code == 0);
    CHECK(ordered_json::parse(from_file.out)["report"]["verdict"] == "converges");
    Run override = run("--config " + ini.string() + " porosity --s 3 --upsilon 1.1");
    REQUIRE(override.code == 0);
    auto j = ordered_json::parse(override.out)["report"];
    CHECK(j["verdict"] == "diverges");
    CHECK(j["query"]["s"] == 3.0);
    fs::remove_all(d);
}

TEST_CASE("file outputs") {
    fs::path d = scratch();
    Run r = run("sweep --p 1 --c1 1 --n-upsilon 5 --n-s 4 --csv " + (d / "sweep.csv").string() + " --out " +
                (d / "sweep.json").string());
    REQUIRE(r.code == 0);
    std::ifstream csv(d / "sweep.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "upsilon,s,lhs,satisfied");
    std::size_t rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    CHECK(rows == 20);
    std::ifstream js(d / "sweep.json");
    auto j = ordered_json::parse(js);
    CHECK(j["region"]["nonempty"] == true);

    Run e = run("extend-verify --n 48 --alpha 0.6 --half-alphas 0.6 --export-grids " + (d / "grids").string());
    REQUIRE(e.code == 0);
    CHECK(fs::exists(d / "grids"));
    CHECK(!fs::is_empty(d / "grids"));
    fs::remove_all(d);
}
