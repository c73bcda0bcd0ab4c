#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qkernel/verify.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace qkernel;

TEST_CASE("gauss_rule basics") {
    const Support s = support(QParam(0.0)); // [-2, 2]
    const QuadratureRule rule = gauss_rule(64, s);
    CHECK(rule.nodes.size() == 64);
    CHECK(std::is_sorted(rule.nodes.begin(), rule.nodes.end()));
    double wsum = 0.0;
    for (double w : rule.weights) {
        CHECK(w > 0.0);
        wsum += w;
    }
    CHECK(wsum == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(rule.nodes.front() > s.lower());
    CHECK(rule.nodes.back() < s.upper);
}

TEST_CASE("gauss_rule integrates monomials of degree <= 2k-1 exactly") {
    const Support s = support(QParam(0.0));
    for (int order : {4, 8, 16}) {
        const QuadratureRule rule = gauss_rule(order, s);
        for (int m = 0; m <= 2 * order - 1; ++m) {
            double acc = 0.0;
            for (size_t i = 0; i < rule.nodes.size(); ++i)
                acc += rule.weights[i] * std::pow(rule.nodes[i], m);
            const double expect =
                (m % 2 == 1) ? 0.0 : 2.0 * std::pow(2.0, m + 1) / (m + 1); // int over [-2,2]
            const double scale = 2.0 * std::pow(2.0, m + 1) / (m + 1);     // int |x|^m
            CHECK(std::abs(acc - expect) <= 1e-11 * scale);
        }
    }
}

TEST_CASE("gaussian mode handles the unbounded support") {
    const Support unbounded = support(QParam(1.0));
    CHECK_THROWS_AS(gauss_rule(32, unbounded), std::domain_error);
    const QuadratureRule rule = gauss_rule(128, unbounded, true);
    Truncation t;
    double acc = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f_n(rule.nodes[i], QParam(1.0), t).value;
    CHECK(acc == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("density_rule: semicircle normalization and second moment") {
    const QuadratureRule rule = density_rule(64, QParam(0.0));
    CHECK(std::is_sorted(rule.nodes.begin(), rule.nodes.end()));
    Truncation t;
    double mass = 0.0, second = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        const double sm = f_n_smooth(rule.nodes[i], QParam(0.0), t);
        mass += rule.weights[i] * sm;
        second += rule.weights[i] * rule.nodes[i] * rule.nodes[i] * sm;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(second == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(density_rule(32, QParam(1.0)), std::domain_error);
}

TEST_CASE("check_orthogonality") {
    PolySpec herm{Family::QHermiteH, QParam(0.5)};
    CHECK(std::abs(check_orthogonality(herm, 2, 3, 128)) <= 1e-9);
    CHECK(std::abs(check_orthogonality(herm, 4, 4, 128)) <=
          1e-7 * q_factorial(4, QParam(0.5)));

    PolySpec ascf{Family::AscP, QParam(0.3)};
    ascf.y = 0.4;
    ascf.rho = 0.5;
    const double expect3 = q_pochhammer(0.25, QParam(0.3), 3) * q_factorial(3, QParam(0.3));
    CHECK(std::abs(check_orthogonality(ascf, 3, 3, 128)) <= 1e-7 * expect3);

    PolySpec big{Family::BigQHermiteH, QParam(0.5), 0.3};
    CHECK(std::abs(check_orthogonality(big, 4, 4, 128)) <= 1e-7 * q_factorial(4, QParam(0.5)));

    PolySpec cheb{Family::ChebyshevU, QParam(0.0)};
    CHECK_THROWS_AS(check_orthogonality(cheb, 1, 1, 64), std::domain_error);
    ascf.rho = 1.0;
    CHECK_THROWS_AS(check_orthogonality(ascf, 1, 1, 64), std::domain_error);
}

TEST_CASE("identity catalog, aliases, descriptions") {
    const std::vector<std::string> ids = identity_catalog();
    const std::set<std::string> expected = {
        "poisson-mehler", "bigh-kernel", "bigh-reciprocity", "asc-kernel", "asc-kernel-general",
        "kernel-inversion", "asc-mehler-reduction", "bigh-mehler-limit", "phi-inverse-series",
        "phi-generating", "hermite-kernel-q1", "chebyshev-kernel-q0", "asc-kernel-q1",
        "asc-kernel-q0", "qhermite-bound", "density-ratio", "normalization", "orthogonality",
        "lancaster"};
    CHECK(std::set<std::string>(ids.begin(), ids.end()) == expected);
    for (const auto& id : ids) {
        CHECK_FALSE(identity_description(id).empty());
        CHECK(default_tolerance(id) > 0.0);
        CHECK(canonical_identity_id(id) == id);
    }
    CHECK(canonical_identity_id("mehler") == "poisson-mehler");
    CHECK(canonical_identity_id("thm-i") == "bigh-kernel");
    CHECK(canonical_identity_id("thm-ii") == "bigh-reciprocity");
    CHECK(canonical_identity_id("thm-iii") == "asc-kernel");
    CHECK(canonical_identity_id("gen-asc") == "asc-kernel-general");
    CHECK(canonical_identity_id("nice") == "kernel-inversion");
    CHECK(canonical_identity_id("corollary-q0-asc") == "asc-kernel-q0");
    CHECK_THROWS_AS(canonical_identity_id("no-such"), std::invalid_argument);
}

TEST_CASE("run_identity_suite basics") {
    const IdentityReport r = run_identity_suite("thm-i");
    CHECK(r.identity_id == "bigh-kernel");
    CHECK(r.passed);
    CHECK(r.max_residual <= 1e-8);
    CHECK(r.grid_size == 5 * 3 * 25);
    CHECK(r.positivity_violations == 0);
    CHECK(r.worst_point.size() == r.param_names.size());
    CHECK(r.mean_residual <= r.max_residual);

    // rho = 0 degenerate grid: residual at product-truncation level
    GridSpec degenerate;
    degenerate.rhos = {0.0};
    const IdentityReport m = run_identity_suite("mehler", degenerate);
    CHECK(m.passed);
    CHECK(m.max_residual <= 1e-11);

    const IdentityReport nice = run_identity_suite("nice");
    CHECK(nice.passed);
    CHECK(nice.max_residual <= 1e-6);
}

TEST_CASE("reports are deterministic") {
    const IdentityReport a = run_identity_suite("poisson-mehler");
    const IdentityReport b = run_identity_suite("poisson-mehler");
    CHECK(a.max_residual == b.max_residual);
    CHECK(a.mean_residual == b.mean_residual);
    CHECK(a.worst_point == b.worst_point);
    CHECK(report_to_json(a) == report_to_json(b));
}

TEST_CASE("report serialization") {
    GridSpec small;
    small.qs = {0.3};
    small.rhos = {0.5};
    const IdentityReport r = run_identity_suite("poisson-mehler", small, 0.0, {2000, 1e-11, 0.0}, true);
    const std::string js = report_to_json(r, true);
    CHECK(js.find("\"identity_id\":\"poisson-mehler\"") != std::string::npos);
    CHECK(js.find("\"rows\":[") != std::string::npos);
    CHECK(js.find("\"passed\":true") != std::string::npos);
    const std::string csv = report_to_csv(r);
    CHECK(csv.find("q,rho,x,y,lhs,rhs,residual") != std::string::npos);
    CHECK(csv.find("# passed=true") != std::string::npos);
    CHECK(csv.find("# max_residual=") != std::string::npos);
    // one data row per grid point
    CHECK(static_cast<int>(std::count(csv.begin(), csv.end(), '\n')) ==
          1 + r.grid_size + 7); // header + rows + summary lines
}

TEST_CASE("unknown identity id") {
    CHECK_THROWS_AS(run_identity_suite("no-such"), std::invalid_argument);
}
