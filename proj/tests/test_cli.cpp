#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

using json = nlohmann::ordered_json;

namespace {

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(BESSELINE_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    RunResult r;
    if (!p) return r;
    char buf[4096];
    size_t nread;
    while ((nread = fread(buf, 1, sizeof(buf), p)) > 0) r.out.append(buf, nread);
    int rc = pclose(p);
    if (WIFEXITED(rc)) r.status = WEXITSTATUS(rc);
    return r;
}

}  // namespace

TEST_CASE("cli: human output prints a bare value") {
    RunResult r = run_cli("eval bessel --kind K --nu 0.5 --x 1");
    CHECK(r.status == 0);
    CHECK(r.out == "0.4610685044\n");
    // sqrt(pi/2) e^{-1}, the half-order closed form
    RunResult g = run_cli("eval gamma --x 0.5");
    CHECK(g.status == 0);
    CHECK(std::fabs(std::stod(g.out) - std::sqrt(M_PI)) <= 1e-9);
}

TEST_CASE("cli: json envelope") {
    RunResult r = run_cli("--format json eval bessel --kind K --nu 0.5 --x 1");
    REQUIRE(r.status == 0);
    json env = json::parse(r.out);
    CHECK(env["command"] == "eval bessel");
    CHECK(env["version"] == "0.1.0");
    CHECK(env["params"]["nu"] == 0.5);
    CHECK(env["warnings"].is_array());
    REQUIRE(env["results"].size() == 1);
    CHECK(env["results"][0]["value"].get<double>() ==
          doctest::Approx(0.4610685044).epsilon(1e-12));
    CHECK(env["results"][0]["abs_error_bound"].get<double>() > 0.0);
    // identical invocations give byte-identical reports
    RunResult r2 = run_cli("--format json eval bessel --kind K --nu 0.5 --x 1");
    CHECK(r.out == r2.out);
}

TEST_CASE("cli: integral evaluation agrees with the closed form") {
    RunResult r =
        run_cli("--format json eval integral --family I --nu 1 --gamma 1 --x 2");
    REQUIRE(r.status == 0);
    json env = json::parse(r.out);
    double v = env["results"][0]["value"].get<double>();
    // 1 - e^{-2} (I_1(2) + I_0(2))
    CHECK(std::fabs(v - 0.4762223882) <= 1e-9);
    RunResult rk = run_cli("eval integral --family K --nu 1 --n 1 --x 1");
    REQUIRE(rk.status == 0);
    CHECK(std::fabs(std::stod(rk.out) - 0.6019072302) <= 1e-9);
}

TEST_CASE("cli: exit codes") {
    CHECK(run_cli("verify --ineq BK1").status == 0);
    // this lemma genuinely fails on part of its stated domain
    CHECK(run_cli("verify --ineq LEM_A1").status == 1);
    CHECK(run_cli("bogus-subcommand").status == 2);
    CHECK(run_cli("eval bessel --kind Q --nu 1 --x 1").status == 2);
    CHECK(run_cli("eval gamma --x -3").status == 3);
    CHECK(run_cli("eval integral --family K --nu 1 --gamma 1.5 --x 2").status == 3);
}

TEST_CASE("cli: verify report on a custom grid") {
    RunResult r = run_cli(
        "--format json verify --ineq BK3 --nus 1 --ns 1 --gammas 0 --xs 0.5,2");
    REQUIRE(r.status == 0);
    json env = json::parse(r.out);
    const json& rep = env["results"][0];
    CHECK(rep["inequality"] == "BK3");
    CHECK(rep["points_checked"] == 2);
    CHECK(rep["violation_count"] == 0);
    CHECK(rep["passed"] == true);
    REQUIRE(rep["tightness"].size() == 2);
    // n = 1 is the equality case, so the bound/integral ratio is 1
    CHECK(rep["tightness"][0]["ratio"].get<double>() ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cli: constants and conjecture reports") {
    RunResult r = run_cli("--format json constants cnun --nu 1");
    REQUIRE(r.status == 0);
    json env = json::parse(r.out);
    const json& c = env["results"][0];
    CHECK(c["c_value"].get<double>() == doctest::Approx(1.681250492).epsilon(2e-3));
    CHECK(c["upper_cap"] == 4.0);
    CHECK(c["bracketed"] == true);

    RunResult cj =
        run_cli("--format json conjecture --nu 4 --points 5 --probe-points 40");
    REQUIRE(cj.status == 0);
    json cenv = json::parse(cj.out);
    const json& rep = cenv["results"][0];
    CHECK(rep["alpha"].get<double>() ==
          doctest::Approx(4.0 - std::sqrt(7.0)).epsilon(1e-9));
    CHECK(rep["probe_found_negative"] == true);
    CHECK(rep["flagged_points"] == 0);
    CHECK(rep["points"].size() == 5);
}

TEST_CASE("cli: csv tables") {
    RunResult r = run_cli("--format csv tables corollary --nus 1 --xs 0.5,5");
    REQUIRE(r.status == 0);
    std::istringstream in(r.out);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "nu,x,relerr_l,relerr_u");
    REQUIRE(std::getline(in, line));
    CHECK(line.rfind("1,0.5,", 0) == 0);
    REQUIRE(std::getline(in, line));
    CHECK(line.rfind("1,5,", 0) == 0);
    CHECK_FALSE(std::getline(in, line));
}

TEST_CASE("cli: --out writes the report to a file") {
    std::string path = "/tmp/besseline_cli_test_out.json";
    std::remove(path.c_str());
    RunResult r = run_cli("--format json --out " + path + " eval gamma --x 2.5");
    REQUIRE(r.status == 0);
    std::ifstream f(path);
    REQUIRE(f.good());
    json env = json::parse(f);
    CHECK(env["results"][0]["value"].get<double>() ==
          doctest::Approx(1.329340388).epsilon(1e-9));
    std::remove(path.c_str());
}
