#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qkernel/families.hpp"

#include "support/exact.hpp"

#include <cmath>

using namespace qkernel;
using exact::Rat;

namespace {
const std::array<double, 5> kSampleX = {-1.3, -0.4, 0.0, 0.7, 1.6};
}

TEST_CASE("q_hermite basics") {
    CHECK(q_hermite(0, 1.7, QParam(0.42)) == 1.0);
    for (double x : kSampleX)
        for (double q : {-0.5, 0.0, 0.5, 1.0})
            CHECK(q_hermite(3, x, QParam(q)) ==
                  doctest::Approx(x * x * x - (2.0 + q) * x).epsilon(1e-13));
    // H_4(1|0) = U_4(1/2)
    CHECK(q_hermite(4, 1.0, QParam(0.0)) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(chebyshev_u(4, 0.5) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("q_hermite matches the exact oracle") {
    const Rat q(1, 2);
    for (int n = 0; n <= 12; ++n)
        for (const Rat& x : {Rat(-3, 2), Rat(2, 5), Rat(1)}) {
            const double ex = exact::qhermite(n, x, q).get_d();
            CHECK(q_hermite(n, x.get_d(), QParam(0.5)) ==
                  doctest::Approx(ex).epsilon(1e-12));
        }
}

TEST_CASE("continuous q-Hermite and the rescaling identity") {
    for (double x : kSampleX) {
        CHECK(continuous_q_hermite(1, x, QParam(0.3)) == doctest::Approx(2 * x).epsilon(1e-15));
        CHECK(continuous_q_hermite(2, x, QParam(0.3)) ==
              doctest::Approx(4 * x * x - 0.7).epsilon(1e-13));
    }
    // H_n(x|q) = h_n(x sqrt(1-q)/2 | q) / (1-q)^{n/2}
    for (int n : {1, 3, 7, 12}) {
        const double q = 0.5, x = 0.2;
        const double lhs = q_hermite(n, x, QParam(q));
        const double rhs = continuous_q_hermite(n, x * std::sqrt(1 - q) / 2, QParam(q)) /
                           std::pow(1 - q, n / 2.0);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
    CHECK_THROWS_AS(continuous_q_hermite(2, 0.1, QParam(1.0)), std::domain_error);
}

TEST_CASE("chebyshev_u") {
    CHECK(chebyshev_u(-1, 0.37) == 0.0);
    for (double x : kSampleX)
        CHECK(chebyshev_u(2, x) == doctest::Approx(4 * x * x - 1).epsilon(1e-13));
    for (int k = 0; k <= 6; ++k)
        CHECK(chebyshev_u(2 * k, 0.0) == doctest::Approx(k % 2 == 0 ? 1.0 : -1.0));
}

TEST_CASE("hermite_prob") {
    CHECK(hermite_prob(0, 2.2) == 1.0);
    CHECK(hermite_prob(3, 0.0) == 0.0);
    for (double x : kSampleX)
        CHECK(hermite_prob(2, x) == doctest::Approx(x * x - 1).epsilon(1e-13));
}

TEST_CASE("big_q_hermite") {
    for (double x : kSampleX) {
        CHECK(big_q_hermite(1, x, 0.4, QParam(0.6)) == doctest::Approx(x - 0.4).epsilon(1e-14));
        // a = 0 collapses to q_hermite
        for (int n = 0; n <= 12; ++n)
            CHECK(big_q_hermite(n, x, 0.0, QParam(0.6)) ==
                  doctest::Approx(q_hermite(n, x, QParam(0.6))).epsilon(1e-13));
    }
    // q = 1: shifted probabilistic Hermite
    CHECK(big_q_hermite(3, 0.5, 0.4, QParam(1.0)) ==
          doctest::Approx(hermite_prob(3, 0.1)).epsilon(1e-13));
    for (int n = 0; n <= 8; ++n)
        for (double x : kSampleX) {
            CHECK(big_q_hermite(n, x, 0.4, QParam(1.0)) ==
                  doctest::Approx(big_q_hermite_q1(n, x, 0.4)).epsilon(1e-12));
            CHECK(big_q_hermite(n, x, 0.4, QParam(0.0)) ==
                  doctest::Approx(big_q_hermite_q0(n, x, 0.4)).epsilon(1e-12));
        }
}

TEST_CASE("aux_b") {
    for (double x : kSampleX)
        for (double q : {-0.5, 0.0, 0.4, 1.0}) {
            CHECK(aux_b(1, x, QParam(q)) == doctest::Approx(-x).epsilon(1e-14));
            CHECK(aux_b(2, x, QParam(q)) == doctest::Approx(q * x * x + 1).epsilon(1e-13));
        }
    for (int n = 3; n <= 8; ++n) CHECK(aux_b(n, 0.8, QParam(0.0)) == 0.0);
    CHECK(aux_b(2, 0.8, QParam(0.0)) == 1.0);
}

TEST_CASE("aux_b at q = 1 equals the sign-twisted Hermite expansion (exact)") {
    // i^n H_n(ix) has real coefficients (-1)^{(n+k)/2} c_{n,k}; compare with
    // the B recurrence at q = 1 on coefficients, n <= 8
    for (int n = 0; n <= 8; ++n) {
        const exact::Poly h = exact::hermite_prob_poly(n);
        const exact::Poly b = exact::aux_b_poly(n, Rat(1));
        REQUIRE(h.size() == b.size());
        for (size_t k = 0; k < h.size(); ++k) {
            if (h[k] == 0) {
                CHECK(b[k] == 0);
                continue;
            }
            const int s = ((static_cast<int>(k) + n) / 2) % 2 == 0 ? 1 : -1;
            CHECK(b[k] == s * h[k]);
        }
    }
}

TEST_CASE("aux_b_shifted") {
    for (double x : kSampleX) {
        CHECK(aux_b_shifted(0, x, 0.7, QParam(0.5)) == 1.0);
        CHECK(aux_b_shifted(1, x, 0.7, QParam(0.5)) == doctest::Approx(0.7 - x).epsilon(1e-14));
        for (int m = 0; m <= 8; ++m)
            CHECK(aux_b_shifted(m, x, 0.0, QParam(0.5)) ==
                  doctest::Approx(aux_b(m, x, QParam(0.5))).epsilon(1e-13));
    }
}

TEST_CASE("asc recurrence and special cases") {
    for (double x : kSampleX) {
        CHECK(asc(1, x, -0.4, 0.6, QParam(0.3)) == doctest::Approx(x + 0.24).epsilon(1e-14));
        for (int n = 0; n <= 12; ++n)
            CHECK(asc(n, x, 0.3, 0.0, QParam(0.3)) ==
                  doctest::Approx(q_hermite(n, x, QParam(0.3))).epsilon(1e-13));
    }
    // q = 0 and q = 1 closed forms
    for (int n = 0; n <= 8; ++n)
        for (double x : kSampleX) {
            CHECK(asc(n, x, -0.4, 0.6, QParam(0.0)) ==
                  doctest::Approx(asc_q0(n, x, -0.4, 0.6)).epsilon(1e-12));
            CHECK(asc(n, x, -0.4, 0.6, QParam(1.0)) ==
                  doctest::Approx(asc_q1(n, x, -0.4, 0.6)).epsilon(1e-12));
        }
    CHECK(asc(3, 0.3, -0.4, 0.6, QParam(0.0)) ==
          doctest::Approx(chebyshev_u(3, 0.15) + 0.24 * chebyshev_u(2, 0.15) +
                          0.36 * chebyshev_u(1, 0.15))
              .epsilon(1e-13));
}

TEST_CASE("extended asc (|rho| >= 1) equals the recurrence polynomials") {
    // The connection-coefficient extension and the recurrence define the same
    // polynomials; the oracle runs the recurrence in exact arithmetic at
    // rho = 3/2 where the double path routes through the extension.
    const Rat q(2, 5), y(1, 4), rho(3, 2);
    for (int n = 0; n <= 10; ++n)
        for (const Rat& x : {Rat(-1), Rat(1, 3), Rat(1)}) {
            const double ex = exact::asc(n, x, y, rho, q).get_d();
            CHECK(asc(n, x.get_d(), y.get_d(), rho.get_d(), QParam(q.get_d())) ==
                  doctest::Approx(ex).epsilon(1e-11));
        }
}

TEST_CASE("asc_standard and the rescaling to asc") {
    CHECK(asc_standard(0, 0.3, 0.2, 0.25, QParam(0.4)) == 1.0);
    for (double x : kSampleX)
        CHECK(asc_standard(1, x, 0.2, 0.25, QParam(0.4)) ==
              doctest::Approx(2 * x - 0.2).epsilon(1e-14));
    const double q = 0.4, rho = 0.5, y = 0.3;
    const double s = rho * y * std::sqrt(1 - q), p = rho * rho;
    for (int n = 0; n <= 10; ++n)
        for (double x : kSampleX) {
            const double lhs = asc(n, x, y, rho, QParam(q));
            const double rhs =
                asc_standard(n, x * std::sqrt(1 - q) / 2, s, p, QParam(q)) / std::pow(1 - q, n / 2.0);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
        }
    CHECK_THROWS_AS(asc_standard(2, 0.1, 0.2, 0.25, QParam(1.0)), std::domain_error);
}

TEST_CASE("support") {
    CHECK(support(QParam(0.0)).upper == doctest::Approx(2.0));
    CHECK(support(QParam(0.75)).upper == doctest::Approx(4.0));
    CHECK(support(QParam(0.0)).lower() == doctest::Approx(-2.0));
    CHECK_FALSE(support(QParam(1.0)).bounded);
    CHECK(support(QParam(0.5)).bounded);
}

TEST_CASE("parity") {
    for (int n = 0; n <= 11; ++n)
        for (double x : {0.3, 1.1}) {
            const double sign = (n % 2 == 0) ? 1.0 : -1.0;
            CHECK(q_hermite(n, -x, QParam(0.6)) ==
                  doctest::Approx(sign * q_hermite(n, x, QParam(0.6))).epsilon(1e-12));
            CHECK(continuous_q_hermite(n, -x, QParam(0.6)) ==
                  doctest::Approx(sign * continuous_q_hermite(n, x, QParam(0.6))).epsilon(1e-12));
            CHECK(chebyshev_u(n, -x) == doctest::Approx(sign * chebyshev_u(n, x)).epsilon(1e-12));
            CHECK(hermite_prob(n, -x) ==
                  doctest::Approx(sign * hermite_prob(n, x)).epsilon(1e-12));
        }
}

TEST_CASE("leading coefficients via the exact oracle") {
    const Rat q(3, 7);
    for (int n = 0; n <= 10; ++n) {
        CHECK(exact::qhermite_poly(n, q).back() == 1);
        CHECK(exact::big_qhermite_poly(n, Rat(2, 5), q).back() == 1);
        CHECK(exact::asc_poly(n, Rat(1, 3), Rat(1, 2), q).back() == 1);
        Rat two_n = 1;
        for (int i = 0; i < n; ++i) two_n *= 2;
        CHECK(exact::chebyshev_u_poly(n).back() == two_n);
        // h_n leading coefficient is 2^n as well
        Rat qk = 1;
        const exact::Poly h = exact::three_term_poly(
            n, [](int) { return Rat(2); }, [](int) { return Rat(0); },
            [&](int k) {
                if (k > 0) qk *= q;
                return k == 0 ? Rat(0) : Rat(1 - qk);
            });
        CHECK(h.back() == two_n);
    }
}

TEST_CASE("degree cap and overflow guard") {
    CHECK_THROWS_AS(q_hermite(kMaxDegree + 1, 0.3, QParam(0.5)), std::domain_error);
    CHECK_THROWS_AS(q_hermite(-1, 0.3, QParam(0.5)), std::domain_error);
    CHECK_THROWS_AS(hermite_prob(150, 1e200), std::overflow_error);
}

TEST_CASE("PolySpec evaluate dispatch") {
    PolySpec spec{Family::AscP, QParam(0.3)};
    spec.y = -0.4;
    spec.rho = 0.6;
    CHECK(evaluate(spec, 1, 0.5) == doctest::Approx(asc(1, 0.5, -0.4, 0.6, QParam(0.3))));
    PolySpec cheb{Family::ChebyshevU, QParam(0.0)};
    CHECK(evaluate(cheb, 2, 0.0) == doctest::Approx(-1.0));
}
