#include "qkernel/measures.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qkernel {

namespace detail {

namespace {

// Shared driver for products whose k-th factor tends to 1 geometrically in
// q^k. factor(u) evaluates the factor at u = lead * q^k; slope bounds
// |factor(u) - 1| <= slope * |u|. The geometric tail gives
// |log prod_{k>=K}| <= 2 slope |u_K| / (1 - |q|) once slope |u_K| <= 1/2.
template <class F>
double product_to_one(double lead, QParam q, double slope, Truncation& trunc, const char* who, F factor) {
    require_product_regime(q);
    const double absq = std::abs(q.value());
    const double stop = trunc.tail_tol * (1.0 - absq);
    double r = 1.0, u = lead;
    for (int k = 0; k < trunc.max_terms; ++k) {
        const double bound = slope * std::abs(u);
        if (bound < stop && bound <= 0.5) {
            trunc.achieved_residual = std::expm1(2.0 * bound / (1.0 - absq));
            return r;
        }
        const double f = factor(u);
        if (std::abs(f) < 1e-280)
            throw PoleError(std::string(who) + ": product factor vanished");
        r *= f;
        u *= q.value();
    }
    throw ConvergenceError(std::string(who) + ": tail tolerance not reached within max_terms");
}

} // namespace

double w_product(double x, double y, double rho, QParam q, Truncation& trunc) {
    const double om = 1.0 - q.value();
    // |w(x,y,u|q) - 1| <= |u| (2 + |u|^3 + om (1+u^2) |xy| + om |u| (x^2+y^2)),
    // coarsened with |u| <= |rho| < 1.
    const double slope = 3.0 + 2.0 * om * std::abs(x * y) + om * (x * x + y * y);
    return product_to_one(rho, q, slope, trunc, "w_product",
                          [&](double u) { return w_kernel(x, y, u, q); });
}

double phi_denominator_product(double x, double t, QParam q, Truncation& trunc) {
    const double om = 1.0 - q.value();
    // factor - 1 = -om x u + om u^2 with u = t q^k; |factor - 1| <= |u| om (|x| + |t|).
    const double slope = om * (std::abs(x) + std::abs(t));
    return product_to_one(t, q, slope, trunc, "phi_denominator_product",
                          [&](double u) { return 1.0 - om * x * u + om * u * u; });
}

} // namespace detail

double phi(double x, double t, QParam q, Truncation& trunc) {
    switch (q.regime()) {
        case QRegime::One: return std::exp(x * t - t * t / 2.0);
        case QRegime::Zero: {
            if (std::abs(t) >= 1.0) throw std::domain_error("phi: requires |t sqrt(1-q)| < 1");
            const double den = 1.0 - x * t + t * t;
            if (std::abs(den) < 1e-280) throw PoleError("phi: pole at q = 0");
            return 1.0 / den;
        }
        case QRegime::Generic: break;
    }
    if (std::abs(t) * std::sqrt(1.0 - q.value()) >= 1.0)
        throw std::domain_error("phi: requires |t sqrt(1-q)| < 1");
    return 1.0 / detail::phi_denominator_product(x, t, q, trunc);
}

double phi(double x, double t, QParam q) {
    Truncation tr;
    return phi(x, t, q, tr);
}

double w_kernel(double x, double y, double rho, QParam q) {
    const double r2 = rho * rho;
    const double om = 1.0 - q.value();
    return (1.0 - r2) * (1.0 - r2) - om * rho * (1.0 + r2) * x * y + om * r2 * (x * x + y * y);
}

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;

// Smooth part of f_N for |q| < 1: sqrt(1-q) (q;q)_inf / (2 pi) *
// prod_{k>=1} ((1+q^k)^2 - (1-q) x^2 q^k). Defined on all of S(q).
double f_n_smooth_generic(double x, QParam q, Truncation& trunc) {
    Truncation t1 = trunc;
    const double qq = q_pochhammer_inf(q.value(), q, t1);
    const double om = 1.0 - q.value();
    // factor - 1 = u (2 + u - om x^2) with u = q^k, k >= 1;
    // |factor - 1| <= |u| (3 + om x^2) since om x^2 <= 4 on S(q).
    Truncation t2 = trunc;
    const double slope = 3.0 + om * x * x;
    const double prod = detail::product_to_one(q.value(), q, slope, t2, "f_n", [&](double u) {
        return (1.0 + u) * (1.0 + u) - om * x * x * u;
    });
    trunc.achieved_residual = t1.achieved_residual + t2.achieved_residual;
    return std::sqrt(om) * qq / (2.0 * std::numbers::pi) * prod;
}

} // namespace

double f_n_smooth(double x, QParam q, Truncation& trunc) {
    if (q.is_one()) throw std::domain_error("f_n_smooth: defined for |q| < 1 only");
    if (q.is_zero()) return 1.0 / (2.0 * std::numbers::pi);
    return f_n_smooth_generic(x, q, trunc);
}

DensityPoint f_n(double x, QParam q, Truncation& trunc) {
    if (q.is_one())
        return {x, kInvSqrt2Pi * std::exp(-x * x / 2.0), true};
    const Support s = support(q);
    if (std::abs(x) > s.upper) return {x, 0.0, false};
    const double root = std::sqrt(std::max(0.0, 4.0 - (1.0 - q.value()) * x * x));
    return {x, f_n_smooth(x, q, trunc) * root, true};
}

DensityPoint f_n(double x, QParam q) {
    Truncation t;
    return f_n(x, q, t);
}

DensityPoint f_bn(double x, double a, QParam q, Truncation& trunc) {
    if (std::abs(a) * std::sqrt(1.0 - q.value()) >= 1.0)
        throw std::domain_error("f_bn: requires |a sqrt(1-q)| < 1");
    if (q.is_one()) {
        const double u = x - a;
        return {x, kInvSqrt2Pi * std::exp(-u * u / 2.0), true};
    }
    DensityPoint base = f_n(x, q, trunc);
    if (!base.in_support) return base;
    base.value *= phi(x, a, q, trunc);
    return base;
}

DensityPoint f_bn(double x, double a, QParam q) {
    Truncation t;
    return f_bn(x, a, q, t);
}

double f_bn_smooth(double x, double a, QParam q, Truncation& trunc) {
    if (std::abs(a) * std::sqrt(1.0 - q.value()) >= 1.0)
        throw std::domain_error("f_bn_smooth: requires |a sqrt(1-q)| < 1");
    return f_n_smooth(x, q, trunc) * phi(x, a, q, trunc);
}

namespace {

void check_cn_domain(double y, double rho, QParam q, const char* who) {
    if (std::abs(rho) >= 1.0) throw std::domain_error(std::string(who) + ": requires |rho| < 1");
    if (!q.is_one() && std::abs(y) > support(q).upper)
        throw std::domain_error(std::string(who) + ": y must lie in S(q)");
}

} // namespace

DensityPoint f_cn(double x, double y, double rho, QParam q, Truncation& trunc) {
    check_cn_domain(y, rho, q, "f_cn");
    if (q.is_one()) {
        const double v = 1.0 - rho * rho;
        const double u = x - rho * y;
        return {x, std::exp(-u * u / (2.0 * v)) / std::sqrt(2.0 * std::numbers::pi * v), true};
    }
    DensityPoint base = f_n(x, q, trunc);
    if (!base.in_support) return base;
    if (q.is_zero()) {
        base.value *= (1.0 - rho * rho) / w_kernel(x, y, rho, q);
        return base;
    }
    Truncation t1 = trunc, t2 = trunc;
    base.value *= q_pochhammer_inf(rho * rho, q, t1) / detail::w_product(x, y, rho, q, t2);
    trunc.achieved_residual += t1.achieved_residual + t2.achieved_residual;
    return base;
}

DensityPoint f_cn(double x, double y, double rho, QParam q) {
    Truncation t;
    return f_cn(x, y, rho, q, t);
}

double f_cn_smooth(double x, double y, double rho, QParam q, Truncation& trunc) {
    check_cn_domain(y, rho, q, "f_cn_smooth");
    const double base = f_n_smooth(x, q, trunc);
    if (q.is_zero()) return base * (1.0 - rho * rho) / w_kernel(x, y, rho, q);
    Truncation t1 = trunc, t2 = trunc;
    const double ratio = q_pochhammer_inf(rho * rho, q, t1) / detail::w_product(x, y, rho, q, t2);
    trunc.achieved_residual += t1.achieved_residual + t2.achieved_residual;
    return base * ratio;
}

} // namespace qkernel
