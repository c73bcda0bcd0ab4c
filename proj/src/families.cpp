#include "qkernel/families.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qkernel {

namespace {

constexpr double kOverflowGuard = 1e300;

void check_degree(int n, const char* who) {
    if (n < 0) throw std::domain_error(std::string(who) + ": degree must be nonnegative");
    if (n > kMaxDegree) throw std::domain_error(std::string(who) + ": degree cap exceeded (n <= 200)");
}

void check_magnitude(double v, const char* who) {
    if (std::abs(v) > kOverflowGuard)
        throw std::overflow_error(std::string(who) + ": recurrence value exceeded 1e300");
}

// Rolls p_{k+1} = coef(k) * p_k - off(k) * p_{k-1} from p_{-1} = 0, p_0 = 1,
// storing degrees 0..n. coef(k) is always invoked before off(k); the lambdas
// may share running q-power state.
template <class Coef, class Off>
std::vector<double> roll(int n, const char* who, Coef coef, Off off) {
    check_degree(n, who);
    std::vector<double> out(static_cast<size_t>(n) + 1);
    double pm = 0.0, p = 1.0;
    out[0] = p;
    for (int k = 0; k < n; ++k) {
        const double c = coef(k);
        const double o = off(k);
        const double next = c * p - o * pm;
        check_magnitude(next, who);
        pm = p;
        p = next;
        out[static_cast<size_t>(k) + 1] = p;
    }
    return out;
}

} // namespace

Support support(QParam q) {
    if (q.is_one()) return {std::numeric_limits<double>::infinity(), false};
    return {2.0 / std::sqrt(1.0 - q.value()), true};
}

std::vector<double> q_hermite_all(int n, double x, QParam q) {
    return roll(n, "q_hermite", [&](int) { return x; }, [&](int k) { return q_bracket(k, q); });
}

double q_hermite(int n, double x, QParam q) { return q_hermite_all(n, x, q).back(); }

double continuous_q_hermite(int n, double x, QParam q) {
    if (q.is_one())
        throw std::domain_error("continuous_q_hermite: q = 1 not supported, use q_hermite");
    double qp = 1.0; // q^k, advanced in off()
    return roll(n, "continuous_q_hermite", [&](int) { return 2.0 * x; },
                [&](int k) {
                    if (k > 0) qp *= q.value();
                    return k == 0 ? 0.0 : 1.0 - qp;
                })
        .back();
}

std::vector<double> chebyshev_u_all(int n, double x) {
    return roll(n, "chebyshev_u", [&](int) { return 2.0 * x; }, [&](int k) { return k == 0 ? 0.0 : 1.0; });
}

double chebyshev_u(int n, double x) {
    if (n == -1) return 0.0;
    return chebyshev_u_all(n, x).back();
}

double hermite_prob(int n, double x) {
    return roll(n, "hermite_prob", [&](int) { return x; }, [&](int k) { return static_cast<double>(k); }).back();
}

std::vector<double> big_q_hermite_all(int n, double x, double a, QParam q) {
    double qp = 1.0; // q^k, advanced in coef()
    return roll(n, "big_q_hermite",
                [&](int k) {
                    if (k > 0) qp *= q.value();
                    return x - a * qp;
                },
                [&](int k) { return q_bracket(k, q); });
}

double big_q_hermite(int n, double x, double a, QParam q) {
    return big_q_hermite_all(n, x, a, q).back();
}

std::vector<double> aux_b_all(int n, double x, QParam q) {
    // B_{k+1} = -q^k x B_k + q^{k-1} [k]_q B_{k-1}; the k = 0 off-term is zero
    // because [0]_q = 0, so no q^{-1} is ever formed.
    double qp = 1.0, qpm = 1.0; // q^k and q^{k-1}, advanced in coef()
    return roll(n, "aux_b",
                [&](int k) {
                    if (k > 0) {
                        qpm = qp;
                        qp *= q.value();
                    }
                    return -qp * x;
                },
                [&](int k) { return k == 0 ? 0.0 : -qpm * q_bracket(k, q); });
}

double aux_b(int n, double x, QParam q) { return aux_b_all(n, x, q).back(); }

double aux_b_shifted(int m, double x, double b, QParam q) {
    check_degree(m, "aux_b_shifted");
    const std::vector<double> B = aux_b_all(m, x, q);
    double s = 0.0, bp = 1.0; // bp = b^{m-j}, built from j = m downward
    for (int j = m; j >= 0; --j) {
        s += q_binomial(m, j, q) * bp * B[static_cast<size_t>(j)];
        bp *= b;
    }
    return s;
}

namespace {

std::vector<double> asc_recurrence_all(int n, double x, double y, double rho, QParam q) {
    double qp = 1.0, qpm = 1.0;
    return roll(n, "asc",
                [&](int k) {
                    if (k > 0) {
                        qpm = qp;
                        qp *= q.value();
                    }
                    return x - rho * y * qp;
                },
                [&](int k) { return k == 0 ? 0.0 : q_bracket(k, q) * (1.0 - rho * rho * qpm); });
}

double asc_extension(int n, double x, double y, double t, QParam q) {
    const std::vector<double> B = aux_b_all(n, y, q);
    const std::vector<double> H = q_hermite_all(n, x, q);
    double s = 0.0, tp = 1.0; // tp = t^{n-k}, built from k = n downward
    for (int k = n; k >= 0; --k) {
        s += q_binomial(n, k, q) * tp * B[static_cast<size_t>(n - k)] * H[static_cast<size_t>(k)];
        tp *= t;
    }
    return s;
}

} // namespace

std::vector<double> asc_all(int n, double x, double y, double rho, QParam q) {
    if (std::abs(rho) < 1.0) return asc_recurrence_all(n, x, y, rho, q);
    check_degree(n, "asc");
    std::vector<double> out(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) out[static_cast<size_t>(k)] = asc_extension(k, x, y, rho, q);
    return out;
}

double asc(int n, double x, double y, double rho, QParam q) {
    if (std::abs(rho) < 1.0) return asc_recurrence_all(n, x, y, rho, q).back();
    check_degree(n, "asc");
    return asc_extension(n, x, y, rho, q);
}

double asc_standard(int n, double x, double s, double p, QParam q) {
    if (q.is_one()) throw std::domain_error("asc_standard: q = 1 not supported, use asc");
    double qp = 1.0, qpm = 1.0;
    return roll(n, "asc_standard",
                [&](int k) {
                    if (k > 0) {
                        qpm = qp;
                        qp *= q.value();
                    }
                    return 2.0 * x - s * qp;
                },
                [&](int k) { return k == 0 ? 0.0 : (1.0 - qp) * (1.0 - p * qpm); })
        .back();
}

double big_q_hermite_q0(int n, double x, double a) {
    return chebyshev_u(n, x / 2.0) - a * chebyshev_u(n - 1, x / 2.0);
}

double big_q_hermite_q1(int n, double x, double a) { return hermite_prob(n, x - a); }

double asc_q0(int n, double x, double y, double rho) {
    if (n == 0) return 1.0;
    return chebyshev_u(n, x / 2.0) - rho * y * chebyshev_u(n - 1, x / 2.0) +
           rho * rho * chebyshev_u(n - 2, x / 2.0);
}

double asc_q1(int n, double x, double y, double rho) {
    const double v = 1.0 - rho * rho;
    if (v <= 0.0) throw std::domain_error("asc_q1: requires |rho| < 1");
    return hermite_prob(n, (x - rho * y) / std::sqrt(v)) * std::pow(v, n / 2.0);
}

double evaluate(const PolySpec& spec, int n, double x) {
    switch (spec.family) {
        case Family::QHermiteH: return q_hermite(n, x, spec.q);
        case Family::ContinuousQHermiteh: return continuous_q_hermite(n, x, spec.q);
        case Family::BigQHermiteH: return big_q_hermite(n, x, spec.a, spec.q);
        case Family::AscP: return asc(n, x, spec.y, spec.rho, spec.q);
        case Family::AscStandard: {
            // p_n twin of AscP: s = rho y sqrt(1-q), p = rho^2.
            const double s = spec.rho * spec.y * std::sqrt(1.0 - spec.q.value());
            return asc_standard(n, x, s, spec.rho * spec.rho, spec.q);
        }
        case Family::AuxB: return aux_b(n, x, spec.q);
        case Family::AuxBShifted: return aux_b_shifted(n, x, spec.b, spec.q);
        case Family::ChebyshevU: return chebyshev_u(n, x);
        case Family::HermiteProb: return hermite_prob(n, x);
    }
    throw std::invalid_argument("evaluate: unknown family");
}

} // namespace qkernel
