#include "qkernel/connect.hpp"

#include <cmath>

namespace qkernel {

double ExpansionResult::reassemble(double x) const {
    double s = 0.0;
    for (int i = 0; i <= source_index; ++i)
        s += coefficients[static_cast<size_t>(i)] * evaluate(target, i, x);
    return s;
}

ExpansionResult expand_bigh_in_qhermite(int n, double a, QParam q) {
    // coefficient of H_j(x|q) is qbinom(n,n-j) q^C(n-j,2) (-a)^{n-j}
    std::vector<double> c(static_cast<size_t>(n) + 1);
    double ap = 1.0, qc = 1.0, qi = 1.0; // (-a)^i, q^C(i,2), q^i
    for (int i = 0; i <= n; ++i) {
        c[static_cast<size_t>(n - i)] = q_binomial(n, i, q) * qc * ap;
        ap *= -a;
        qc *= qi; // q^C(i+1,2) = q^C(i,2) * q^i
        qi *= q.value();
    }
    return {std::move(c), PolySpec{Family::QHermiteH, q}, n};
}

ExpansionResult expand_qhermite_in_bigh(int n, double a, QParam q) {
    std::vector<double> c(static_cast<size_t>(n) + 1);
    double ap = 1.0;
    for (int i = 0; i <= n; ++i) {
        c[static_cast<size_t>(n - i)] = q_binomial(n, i, q) * ap;
        ap *= a;
    }
    return {std::move(c), PolySpec{Family::BigQHermiteH, q, a}, n};
}

ExpansionResult expand_asc_in_qhermite(int n, double y, double rho, QParam q) {
    const std::vector<double> B = aux_b_all(n, y, q);
    std::vector<double> c(static_cast<size_t>(n) + 1);
    double rp = 1.0; // rho^{n-i} built downward from i = n
    for (int i = n; i >= 0; --i) {
        c[static_cast<size_t>(i)] = q_binomial(n, i, q) * rp * B[static_cast<size_t>(n - i)];
        rp *= rho;
    }
    return {std::move(c), PolySpec{Family::QHermiteH, q}, n};
}

ExpansionResult expand_qhermite_in_asc(int n, double y, double rho, QParam q) {
    const std::vector<double> H = q_hermite_all(n, y, q);
    std::vector<double> c(static_cast<size_t>(n) + 1);
    double rp = 1.0;
    for (int i = n; i >= 0; --i) {
        c[static_cast<size_t>(i)] = q_binomial(n, i, q) * rp * H[static_cast<size_t>(n - i)];
        rp *= rho;
    }
    PolySpec target{Family::AscP, q};
    target.y = y;
    target.rho = rho;
    return {std::move(c), target, n};
}

ExpansionResult connect_bigh_via_asc(int n, double y, double a, double b, QParam q) {
    if (b == 0.0) throw std::domain_error("connect_bigh_via_asc: b must be nonzero");
    const double ratio = a / b;
    const std::vector<double> Hb = big_q_hermite_all(n, y, b, q);
    std::vector<double> c(static_cast<size_t>(n) + 1);
    double rp = 1.0;
    for (int j = n; j >= 0; --j) {
        c[static_cast<size_t>(j)] = q_binomial(n, j, q) * rp * Hb[static_cast<size_t>(n - j)];
        rp *= ratio;
    }
    PolySpec target{Family::AscP, q};
    target.y = y;
    target.rho = ratio;
    return {std::move(c), target, n};
}

ExpansionResult connect_asc_via_bigh(int n, double y, double rho, double a, QParam q) {
    if (rho == 0.0 && a != 0.0)
        throw std::domain_error("connect_asc_via_bigh: rho = 0 with a != 0 is singular (a/rho)");
    if (rho == 0.0) return expand_asc_in_qhermite(n, y, 0.0, q);
    const double shift = a / rho;
    std::vector<double> c(static_cast<size_t>(n) + 1);
    double rp = 1.0;
    for (int i = n; i >= 0; --i) {
        c[static_cast<size_t>(i)] = q_binomial(n, i, q) * rp * aux_b_shifted(n - i, y, shift, q);
        rp *= rho;
    }
    PolySpec target{Family::BigQHermiteH, q, a};
    return {std::move(c), target, n};
}

ExpansionResult connect_asc_product(int n, double y, double z, double rho1, double rho2, QParam q) {
    const std::vector<double> P2 = asc_all(n, z, y, rho2, q);
    std::vector<double> c(static_cast<size_t>(n) + 1);
    double rp = 1.0;
    for (int i = n; i >= 0; --i) {
        c[static_cast<size_t>(i)] = q_binomial(n, i, q) * rp * P2[static_cast<size_t>(n - i)];
        rp *= rho1;
    }
    PolySpec target{Family::AscP, q};
    target.y = z;
    target.rho = rho1;
    return {std::move(c), target, n};
}

double r_poly(int n, double x, QParam q) {
    if (n < 0) throw std::domain_error("r_poly: n must be nonnegative");
    double s = 0.0, xp = 1.0;
    for (int i = 0; i <= n; ++i) {
        s += q_binomial(n, i, q) * xp;
        xp *= x;
    }
    return s;
}

double bound_qhermite(int n, double a, QParam q) {
    if (q.is_one()) throw std::domain_error("bound_qhermite: q = 1 not supported");
    const double base = std::pow(1.0 - q.value(), -n / 2.0) * r_poly(n, 1.0, q);
    if (a == 0.0) return base;
    return q_pochhammer_inf(-std::abs(a) * std::sqrt(1.0 - q.value()), q) * base;
}

std::pair<double, double> density_ratio_bounds(double rho, QParam q, Truncation& trunc) {
    if (std::abs(rho) >= 1.0) throw std::domain_error("density_ratio_bounds: requires |rho| < 1");
    detail::require_product_regime(q);
    Truncation t1 = trunc, t2 = trunc, t3 = trunc;
    const double num = q_pochhammer_inf(rho * rho, q, t1);
    const double dlo = q_pochhammer_inf(-std::abs(rho), q, t2);
    const double dhi = q_pochhammer_inf(std::abs(rho), q, t3);
    trunc.achieved_residual = t1.achieved_residual + 4.0 * std::max(t2.achieved_residual, t3.achieved_residual);
    return {num / (dlo * dlo * dlo * dlo), num / (dhi * dhi * dhi * dhi)};
}

std::pair<double, double> density_ratio_bounds(double rho, QParam q) {
    Truncation t;
    return density_ratio_bounds(rho, q, t);
}

} // namespace qkernel
