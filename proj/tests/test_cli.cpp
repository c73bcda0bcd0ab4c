#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// CLI_PATH is injected by the build; every case drives the real binary.

namespace {

struct RunResult {
    int exit_code;
    std::string stdout_text;
};

RunResult run(const std::string& args) {
    const std::string out = std::string(CLI_OUT_DIR) + "/cli_stdout.txt";
    const std::string cmd = std::string(CLI_PATH) + " " + args + " > " + out + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    std::ifstream f(out);
    std::stringstream ss;
    ss << f.rdbuf();
    return {WEXITSTATUS(rc), ss.str()};
}

double first_value(const std::string& text) {
    std::istringstream is(text);
    double v = 0.0;
    is >> v;
    return v;
}

} // namespace

TEST_CASE("eval examples") {
    auto r = run("eval --family qhermite --n 3 --x 1.0 --q 0.5");
    CHECK(r.exit_code == 0);
    CHECK(first_value(r.stdout_text) == doctest::Approx(-1.5).epsilon(1e-12));

    r = run("eval --family chebyshev-u --n 2 --x 0.0");
    CHECK(r.exit_code == 0);
    CHECK(first_value(r.stdout_text) == doctest::Approx(-1.0));

    r = run("eval --family asc --n 0 --x 0 --y 0 --rho 0.5 --q 0.3");
    CHECK(r.exit_code == 0);
    CHECK(first_value(r.stdout_text) == doctest::Approx(1.0));

    r = run("eval --family asc --n 2 --x 0.4 --y 0.1 --rho 1.5 --q 0.3");
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("connection-extension") != std::string::npos);
}

TEST_CASE("eval validation failures exit 2") {
    CHECK(run("eval --family no-such --n 1 --x 0").exit_code == 2);
    CHECK(run("eval --family qhermite --n 1").exit_code == 2);   // missing --x
    CHECK(run("eval --family qhermite --n 1 --x 0 --q 2").exit_code == 2);
    CHECK(run("eval --family qhermite --n 1 --x 0 --nope 3").exit_code == 2);
}

TEST_CASE("kernel subcommand") {
    auto r = run("kernel --id poisson-mehler --x 0 --y 0 --rho 0.5 --q 0 --method both --format json");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.stdout_text);
    CHECK(j["value"].get<double>() == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(j["discrepancy"].get<double>() <= 1e-12);

    r = run("kernel --id bigh --x 0.3 --y 0.2 --a 0 --b 0.5 --q 0.4 --format json");
    CHECK(r.exit_code == 0);
    CHECK(nlohmann::json::parse(r.stdout_text)["value"].get<double>() ==
          doctest::Approx(1.0).epsilon(1e-12));

    r = run("kernel --id inversion --x 0.3 --y -0.2 --z 0.5 --rho1 0.5 --rho2 0.35 --q 0.4 "
            "--format json");
    CHECK(r.exit_code == 0);
    CHECK(nlohmann::json::parse(r.stdout_text)["value"].get<double>() ==
          doctest::Approx(1.0).epsilon(1e-6));

    CHECK(run("kernel --id no-such --x 0").exit_code == 2);
    // non-convergence within the term cap is a numerical failure
    CHECK(run("kernel --id poisson-mehler --x 0.5 --y 0.5 --rho 0.8 --q 0.7 --method series "
              "--max-terms 5").exit_code == 1);
}

TEST_CASE("QKERNEL_MAX_TERMS environment override, flag precedence") {
    const std::string base =
        " --id poisson-mehler --x 0.5 --y 0.5 --rho 0.8 --q 0.7 --method series";
    const std::string out = std::string(CLI_OUT_DIR) + "/cli_stdout.txt";
    const std::string env_cmd = std::string("QKERNEL_MAX_TERMS=5 ") + CLI_PATH + " kernel" + base +
                                " > " + out + " 2>/dev/null";
    CHECK(WEXITSTATUS(std::system(env_cmd.c_str())) == 1);
    const std::string flag_cmd = std::string("QKERNEL_MAX_TERMS=5 ") + CLI_PATH + " kernel" + base +
                                 " --max-terms 400 > " + out + " 2>/dev/null";
    CHECK(WEXITSTATUS(std::system(flag_cmd.c_str())) == 0);
}

TEST_CASE("density subcommand") {
    const std::string csv_path = std::string(CLI_OUT_DIR) + "/density.csv";
    auto r = run("density --which fn --q 0 --points 11 --out " + csv_path);
    CHECK(r.exit_code == 0);
    std::ifstream f(csv_path);
    std::string header;
    std::getline(f, header);
    CHECK(header == "x,value,in_support");
    int rows = 0;
    for (std::string line; std::getline(f, line);)
        if (!line.empty() && line[0] != '#') ++rows;
    CHECK(rows == 11);

    r = run("density --which fcn --q 0.4 --y 0.5 --rho 0.6 --points 5 --format json");
    CHECK(r.exit_code == 0);
    CHECK(nlohmann::json::parse(r.stdout_text)["rows"].size() == 5);

    CHECK(run("density --which fcn --q 0.4 --y 99 --rho 0.6").exit_code == 2);
}

TEST_CASE("expand subcommand") {
    auto r = run("expand --lemma i --n 1 --y 0.2 --a 0.3 --b 0.7 --q 0.5 --format json");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.stdout_text);
    REQUIRE(j["coefficients"].size() == 2);
    CHECK(j["coefficients"][0].get<double>() ==
          doctest::Approx((0.3 / 0.7) * (0.2 - 0.7)).epsilon(1e-12));
    CHECK(j["coefficients"][1].get<double>() == doctest::Approx(1.0));

    r = run("expand --formula bigH --n 0 --a 0.4 --q 0.5 --format json");
    CHECK(r.exit_code == 0);
    j = nlohmann::json::parse(r.stdout_text);
    REQUIRE(j["coefficients"].size() == 1);
    CHECK(j["coefficients"][0].get<double>() == doctest::Approx(1.0));

    r = run("expand --formula asc-hb --n 1 --y 0.5 --rho 0.4 --q 0.2 --format json");
    CHECK(r.exit_code == 0);
    j = nlohmann::json::parse(r.stdout_text);
    CHECK(j["coefficients"][0].get<double>() == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(j["coefficients"][1].get<double>() == doctest::Approx(1.0));

    CHECK(run("expand --formula no-such --n 1").exit_code == 2);
}

TEST_CASE("verify all identities") {
    const std::string rep = std::string(CLI_OUT_DIR) + "/report_all.json";
    auto r = run("verify --identity all --tol 1e-6 --out " + rep);
    CHECK(r.exit_code == 0);
    std::ifstream f(rep);
    const auto j = nlohmann::json::parse(f);
    CHECK(j.size() == 19);
    for (const auto& item : j) CHECK(item["passed"].get<bool>());
}

TEST_CASE("verify subcommand") {
    CHECK(run("verify --identity no-such").exit_code == 2);

    const std::string rep = std::string(CLI_OUT_DIR) + "/report.json";
    auto r = run("verify --identity thm-i --q 0.9 --tol 1e-8 --out " + rep);
    CHECK(r.exit_code == 0);
    std::ifstream f(rep);
    const auto j = nlohmann::json::parse(f);
    CHECK(j["identity_id"] == "bigh-kernel");
    CHECK(j["passed"].get<bool>());

    const std::string csv = std::string(CLI_OUT_DIR) + "/report.csv";
    r = run("verify --identity mehler --q 0.3 --format csv --out " + csv);
    CHECK(r.exit_code == 0);
    std::ifstream fc(csv);
    std::string header;
    std::getline(fc, header);
    CHECK(header.find("residual") != std::string::npos);

    // an unreachable tolerance makes the run fail with exit 1
    CHECK(run("verify --identity mehler --q 0.3 --tol 1e-30 >/dev/null").exit_code == 1);
}

TEST_CASE("list subcommand") {
    auto r = run("list");
    CHECK(r.exit_code == 0);
    for (const char* id : {"poisson-mehler", "kernel-inversion", "orthogonality", "lancaster"})
        CHECK(r.stdout_text.find(id) != std::string::npos);
    CHECK(r.stdout_text.find("corollary-q0-bigh") != std::string::npos);
}
