#include "qkernel/qcore.hpp"

#include <cmath>
#include <cstdlib>

namespace qkernel {

namespace detail {

void require_product_regime(QParam q) {
    if (q.is_one())
        throw std::domain_error("infinite q-products are undefined at q = 1; use the closed forms");
    if (std::abs(q.value() - 1.0) < 1e-9)
        throw std::domain_error("q within 1e-9 of 1 rejected: product convergence degrades as 1/(1-q)");
}

} // namespace detail

double q_bracket(int n, QParam q) {
    if (n < 0) throw std::domain_error("q_bracket: n must be nonnegative");
    if (n == 0) return 0.0;
    if (q.is_one()) return static_cast<double>(n);
    // 1 + q + ... + q^{n-1}, summed directly: exact at small n and cheap,
    // and free of the 0/0 at q -> 1 that the (1-q^n)/(1-q) form has.
    double s = 1.0, p = 1.0;
    for (int i = 1; i < n; ++i) {
        p *= q.value();
        s += p;
    }
    return s;
}

double q_factorial(int n, QParam q) {
    if (n < 0) throw std::domain_error("q_factorial: n must be nonnegative");
    double r = 1.0;
    for (int i = 1; i <= n; ++i) r *= q_bracket(i, q);
    return r;
}

double q_binomial(int n, int k, QParam q) {
    if (!(n >= k && k >= 0)) return 0.0;
    if (k > n - k) k = n - k;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= q_bracket(n - k + i, q) / q_bracket(i, q);
    return r;
}

double q_pochhammer(double a, QParam q, int n) {
    if (n < 0) throw std::domain_error("q_pochhammer: n must be nonnegative");
    double r = 1.0, p = 1.0;
    for (int i = 0; i < n; ++i) {
        r *= 1.0 - a * p;
        p *= q.value();
    }
    return r;
}

double q_pochhammer_inf(double a, QParam q, Truncation& trunc) {
    detail::require_product_regime(q);
    const double absq = std::abs(q.value());
    const double stop = trunc.tail_tol * (1.0 - absq);
    double r = 1.0, ap = a; // ap = a q^k
    for (int k = 0; k < trunc.max_terms; ++k) {
        if (std::abs(ap) < stop && std::abs(ap) <= 0.5) {
            trunc.achieved_residual = std::expm1(2.0 * std::abs(ap) / (1.0 - absq));
            return r;
        }
        r *= 1.0 - ap;
        ap *= q.value();
    }
    throw ConvergenceError("q_pochhammer_inf: tail tolerance not reached within max_terms");
}

double q_pochhammer_inf(double a, QParam q) {
    Truncation t;
    return q_pochhammer_inf(a, q, t);
}

double q_pochhammer_inf_multi(std::span<const double> as, QParam q, Truncation& trunc) {
    double r = 1.0, res = 0.0;
    for (double a : as) {
        Truncation t = trunc;
        r *= q_pochhammer_inf(a, q, t);
        res += t.achieved_residual;
    }
    trunc.achieved_residual = res;
    return r;
}

} // namespace qkernel
