#include "qkernel/kernels.hpp"

#include "qkernel/connect.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace qkernel {

namespace {

void require_kernel_regime(QParam q) {
    detail::require_product_regime(q);
}

void require_on_support(double v, QParam q, const char* who) {
    if (std::abs(v) > support(q).upper)
        throw std::domain_error(std::string(who) + ": point outside S(q)");
}

void require_corr(double rho, const char* who) {
    if (std::abs(rho) >= 1.0)
        throw std::domain_error(std::string(who) + ": correlation parameter must satisfy |rho| < 1");
}

// ---- hat-scale rolling recurrences ---------------------------------------
//
// Series terms are accumulated with the polynomials in the h_n / p_n
// normalization (argument c = x sqrt(1-q)/2, values scaled by (1-q)^{n/2});
// the (1-q) powers cancel against the [n]_q! denominators, leaving O(1)
// factors throughout. Raw H_n/P_n values overflow doubles near q = 0.9 for
// the term counts the tail tolerances demand.

// h_{n+1}(c|alpha,q) = (2c - alpha q^n) h_n - (1 - q^n) h_{n-1}; alpha = 0
// gives the continuous q-Hermite sequence.
struct HatBigH {
    double c, alpha, q;
    double hm = 0.0, h = 1.0, qn = 1.0;
    double value() const { return h; }
    void advance() {
        const double next = (2.0 * c - alpha * qn) * h - (1.0 - qn) * hm;
        hm = h;
        h = next;
        qn *= q;
    }
};

// p_{n+1}(c) = (2c - s q^n) p_n - (1 - q^n)(1 - p q^{n-1}) p_{n-1}; the
// (1 - q^0) = 0 factor neutralizes q^{-1} at n = 0.
struct HatAsc {
    double c, s, p, q;
    double pm = 0.0, pv = 1.0, qn = 1.0, qnm = 1.0;
    double value() const { return pv; }
    void advance() {
        const double next = (2.0 * c - s * qn) * pv - (1.0 - qn) * (1.0 - p * qnm) * pm;
        pm = pv;
        pv = next;
        qnm = qn;
        qn *= q;
    }
};

// Bhat_{n+1} = -2 c q^n Bhat_n + q^{n-1} (1 - q^n) Bhat_{n-1}.
struct HatAuxB {
    double c, q;
    double bm = 0.0, b = 1.0, qn = 1.0, qnm = 1.0;
    double value() const { return b; }
    void advance() {
        const double next = -2.0 * c * qn * b + qnm * (1.0 - qn) * bm;
        bm = b;
        b = next;
        qnm = qn;
        qn *= q;
    }
};

// Row of Gaussian binomials [n i]_q plus its sum r_n(1|q), advanced in n.
struct QBinomRow {
    explicit QBinomRow(double q) : q_(q) {}
    double sum() const { return sum_; }
    const std::vector<double>& row() const { return row_; }
    void advance() {
        const size_t n = row_.size();
        std::vector<double> next(n + 1);
        next[0] = 1.0;
        next[n] = 1.0;
        double qi = 1.0, s = 2.0;
        for (size_t i = 1; i < n; ++i) {
            qi *= q_;
            next[i] = row_[i - 1] + qi * row_[i];
            s += next[i];
        }
        row_ = std::move(next);
        sum_ = s;
    }

private:
    double q_;
    std::vector<double> row_{1.0};
    double sum_ = 1.0;
};

struct SeriesOut {
    double sum = 0.0;
    int terms = 0;
    double residual = 0.0;
    double abs_sum = 0.0; // sum of |t_n|: conditioning scale of the summation
};

// Series engine with the r_n(1|q) sup-bound majorant (|H_n(x|a,q)| on S(q) is
// dominated by const * (1-q)^{-n/2} r_n(1|q)): stops once the bound for the
// next term, |rho|^{n+1} Ca Cb r_{n+1}(1|q)^2 / (q;q)_{n+1}, drops below
// tail_tol; the reported residual sums the remaining bounds.
template <class FA, class FB>
SeriesOut h_kernel_series(double rho, QParam q, double ca, double cb, FA fa, FB fb,
                          const Truncation& trunc, const char* who) {
    QBinomRow row(q.value());
    double s = 0.0, asum = 0.0;
    double u = 1.0;    // rho^n / (q;q)_n
    double umaj = 1.0; // |rho|^n / (q;q)_n
    double qn1 = q.value();
    for (int n = 0; n < trunc.max_terms; ++n) {
        const double t = u * fa.value() * fb.value();
        s += t;
        asum += std::abs(t);
        row.advance();
        const double denom = 1.0 - qn1;
        u *= rho / denom;
        umaj *= std::abs(rho) / denom;
        qn1 *= q.value();
        const double bound = umaj * ca * cb * row.sum() * row.sum();
        if (bound < trunc.tail_tol) {
            double tail = 0.0, b = bound, prev = bound;
            double u2 = umaj, qx = qn1;
            QBinomRow row2 = row;
            for (int m = 0; m < 400 && b > bound * 1e-6 && b > 0.0; ++m) {
                tail += b;
                row2.advance();
                u2 *= std::abs(rho) / (1.0 - qx);
                qx *= q.value();
                prev = b;
                b = u2 * ca * cb * row2.sum() * row2.sum();
            }
            const double ratio = (prev > 0.0) ? std::min(0.999, b / prev) : std::abs(rho);
            tail += b / (1.0 - ratio);
            return {s, n + 1, tail, asum};
        }
        fa.advance();
        fb.advance();
    }
    throw ConvergenceError(std::string(who) + ": series tail bound not met within max_terms");
}

// Series engine for the ASC-family kernels, where no closed sup bound is
// available: stops after 5 consecutive terms below tail_tol and reports a
// geometric extrapolation of the tail as the residual estimate.
// u_{n+1} = u_n * lead / ((1 - q^{n+1}) (1 - sig2 q^n)).
template <class Term>
SeriesOut window_series(double lead, double sig2, QParam q, const Truncation& trunc,
                        const char* who, Term term) {
    double s = 0.0, u = 1.0, asum = 0.0;
    double qn = 1.0, qn1 = q.value();
    int below = 0;
    for (int n = 0; n < trunc.max_terms; ++n) {
        const double t = u * term(n);
        s += t;
        asum += std::abs(t);
        below = (std::abs(t) < trunc.tail_tol) ? below + 1 : 0;
        if (below >= 5) {
            const double r = std::min(0.99, std::abs(lead) * 1.25);
            return {s, n + 1, 5.0 * trunc.tail_tol + std::abs(t) * r / (1.0 - r), asum};
        }
        u *= lead / ((1.0 - qn1) * (1.0 - sig2 * qn));
        qn = qn1;
        qn1 *= q.value();
    }
    throw ConvergenceError(std::string(who) + ": series terms did not fall below tail_tol within max_terms");
}

// Hat-scale sup-bound constant prod_k (1 + |alpha| |q|^k) for the shifted family.
double hat_bound_constant(double alpha, QParam q) {
    if (alpha == 0.0) return 1.0;
    return q_pochhammer_inf(-std::abs(alpha), QParam(std::abs(q.value())));
}

double half_sqrt_om(QParam q) { return std::sqrt(1.0 - q.value()) / 2.0; }

KernelResult assemble(Method method, const SeriesOut* series, double closed_value,
                      double closed_residual) {
    KernelResult r;
    r.method = method;
    switch (method) {
        case Method::Series:
            r.value = series->sum;
            r.series_value = series->sum;
            r.terms_used = series->terms;
            r.residual_estimate = series->residual;
            r.series_term_sum = series->abs_sum;
            break;
        case Method::Closed:
            r.value = closed_value;
            r.closed_value = closed_value;
            r.residual_estimate = closed_residual;
            break;
        case Method::Both:
            r.value = closed_value;
            r.series_value = series->sum;
            r.closed_value = closed_value;
            r.terms_used = series->terms;
            r.residual_estimate = std::max(series->residual, closed_residual);
            r.series_term_sum = series->abs_sum;
            r.discrepancy = std::abs(series->sum - closed_value);
            break;
    }
    return r;
}

} // namespace

KernelResult poisson_mehler(double x, double y, double rho, QParam q, Truncation trunc,
                            Method method) {
    require_kernel_regime(q);
    require_corr(rho, "poisson_mehler");
    require_on_support(x, q, "poisson_mehler");
    require_on_support(y, q, "poisson_mehler");

    SeriesOut series;
    if (method != Method::Closed) {
        const double k = half_sqrt_om(q);
        series = h_kernel_series(rho, q, 1.0, 1.0, HatBigH{k * x, 0.0, q.value()},
                                 HatBigH{k * y, 0.0, q.value()}, trunc, "poisson_mehler");
    }
    double closed = 0.0, closed_res = 0.0;
    if (method != Method::Series) {
        Truncation t1 = trunc, t2 = trunc;
        closed = q_pochhammer_inf(rho * rho, q, t1) / detail::w_product(x, y, rho, q, t2);
        closed_res = (t1.achieved_residual + t2.achieved_residual) * std::abs(closed);
    }
    return assemble(method, &series, closed, closed_res);
}

KernelResult bigh_kernel(double x, double y, double a, double b, QParam q, Truncation trunc,
                         Method method) {
    require_kernel_regime(q);
    if (b == 0.0) throw std::domain_error("bigh_kernel: b must be nonzero");
    if (std::abs(a) >= std::abs(b)) throw std::domain_error("bigh_kernel: requires |a| < |b|");
    require_on_support(x, q, "bigh_kernel");
    require_on_support(y, q, "bigh_kernel");

    const double rho = a / b;
    const double sq = std::sqrt(1.0 - q.value());
    SeriesOut series;
    if (method != Method::Closed) {
        const double k = half_sqrt_om(q);
        series = h_kernel_series(rho, q, hat_bound_constant(a * sq, q), hat_bound_constant(b * sq, q),
                                 HatBigH{k * x, a * sq, q.value()}, HatBigH{k * y, b * sq, q.value()},
                                 trunc, "bigh_kernel");
    }
    double closed = 0.0, closed_res = 0.0;
    if (method != Method::Series) {
        Truncation t1 = trunc, t2 = trunc, t3 = trunc;
        closed = q_pochhammer_inf(rho * rho, q, t1) *
                 detail::phi_denominator_product(x, a, q, t2) / detail::w_product(x, y, rho, q, t3);
        closed_res =
            (t1.achieved_residual + t2.achieved_residual + t3.achieved_residual) * std::abs(closed);
    }
    return assemble(method, &series, closed, closed_res);
}

KernelResult bigh_kernel_reciprocal(double x, double y, double a, double b, QParam q,
                                    Truncation trunc) {
    require_kernel_regime(q);
    if (b == 0.0) throw std::domain_error("bigh_kernel_reciprocal: b must be nonzero");
    if (std::abs(a) >= std::abs(b)) throw std::domain_error("bigh_kernel_reciprocal: requires |a| < |b|");
    require_on_support(x, q, "bigh_kernel_reciprocal");
    require_on_support(y, q, "bigh_kernel_reciprocal");

    const double rho = a / b;
    const double k = half_sqrt_om(q);
    const double beta = b * std::sqrt(1.0 - q.value());

    // shifted hat-B values: Bhat_n(y|b) = sum_j [n j]_q beta^{n-j} Bhat_j(c_y)
    HatAuxB bgen{k * y, q.value()};
    std::vector<double> bhat;
    QBinomRow row(q.value());
    HatAsc pa{k * x, rho * y * std::sqrt(1.0 - q.value()), rho * rho, q.value()};

    SeriesOut series = window_series(
        rho, rho * rho, q, trunc, "bigh_kernel_reciprocal", [&](int n) {
            if (n > 0) {
                row.advance();
                pa.advance();
            }
            bhat.push_back(bgen.value());
            bgen.advance();
            double shifted = 0.0, bp = 1.0;
            for (int j = n; j >= 0; --j) {
                shifted += row.row()[static_cast<size_t>(j)] * bp * bhat[static_cast<size_t>(j)];
                bp *= beta;
            }
            return shifted * pa.value();
        });
    KernelResult r;
    r.method = Method::Series;
    r.value = series.sum;
    r.series_value = series.sum;
    r.terms_used = series.terms;
    r.residual_estimate = series.residual;
    r.series_term_sum = series.abs_sum;
    return r;
}

KernelResult asc_kernel(double x, double y, double z, double rho1, double rho2, QParam q,
                        Truncation trunc, Method method) {
    require_kernel_regime(q);
    require_corr(rho1, "asc_kernel");
    require_corr(rho2, "asc_kernel");
    require_on_support(x, q, "asc_kernel");
    require_on_support(y, q, "asc_kernel");
    require_on_support(z, q, "asc_kernel");

    const double sq = std::sqrt(1.0 - q.value());
    const double k = half_sqrt_om(q);
    const double r12 = rho1 * rho2;
    SeriesOut series;
    if (method != Method::Closed) {
        HatAsc p1{k * x, r12 * y * sq, r12 * r12, q.value()};
        HatAsc p2{k * z, rho2 * y * sq, rho2 * rho2, q.value()};
        series = window_series(rho1, r12 * r12, q, trunc, "asc_kernel", [&](int n) {
            if (n > 0) {
                p1.advance();
                p2.advance();
            }
            return p1.value() * p2.value();
        });
    }
    double closed = 0.0, closed_res = 0.0;
    if (method != Method::Series) {
        Truncation t1 = trunc, t2 = trunc, t3 = trunc, t4 = trunc;
        closed = q_pochhammer_inf(rho1 * rho1, q, t1) / q_pochhammer_inf(r12 * r12, q, t2) *
                 detail::w_product(x, y, r12, q, t3) / detail::w_product(x, z, rho1, q, t4);
        closed_res = (t1.achieved_residual + t2.achieved_residual + t3.achieved_residual +
                      t4.achieved_residual) *
                     std::abs(closed);
    }
    return assemble(method, &series, closed, closed_res);
}

double asc_kernel_fcn_ratio(double x, double y, double z, double rho1, double rho2, QParam q,
                            Truncation trunc) {
    require_kernel_regime(q);
    require_on_support(x, q, "asc_kernel_fcn_ratio");
    const double num = f_cn(x, z, rho1, q, trunc).value;
    const double den = f_cn(x, y, rho1 * rho2, q, trunc).value;
    return num / den;
}

KernelResult asc_kernel_general(double x, double y, double z, double rho1, double rho2, QParam q,
                                Truncation trunc, Method method) {
    require_kernel_regime(q);
    require_corr(rho1, "asc_kernel_general");
    require_corr(rho2, "asc_kernel_general");
    if (rho1 == 0.0 && rho2 != 0.0)
        throw std::domain_error("asc_kernel_general: rho1 = 0 with rho2 != 0 leaves rho2/rho1 undefined");
    require_on_support(x, q, "asc_kernel_general");
    require_on_support(y, q, "asc_kernel_general");
    require_on_support(z, q, "asc_kernel_general");

    const double sq = std::sqrt(1.0 - q.value());
    const double k = half_sqrt_om(q);
    const double t = (rho1 == 0.0) ? 0.0 : rho2 / rho1;

    SeriesOut series;
    if (method != Method::Closed) {
        // The P_n(z|y,rho2/rho1,q) factor may sit outside the orthogonal
        // regime |t| < 1; the recurrence evaluates the same polynomials there
        // and, unlike the connection-coefficient sum, does not cancel
        // catastrophically near q = 0.9.
        HatAsc p1{k * x, rho2 * y * sq, rho2 * rho2, q.value()};
        HatAsc p2{k * z, t * y * sq, t * t, q.value()};
        series = window_series(rho1, rho2 * rho2, q, trunc, "asc_kernel_general", [&](int n) {
            if (n > 0) {
                p1.advance();
                p2.advance();
            }
            return p1.value() * p2.value();
        });
    }
    double closed = 0.0, closed_res = 0.0;
    if (method != Method::Series) {
        Truncation t1 = trunc, t2 = trunc, t3 = trunc, t4 = trunc;
        closed = q_pochhammer_inf(rho1 * rho1, q, t1) / q_pochhammer_inf(rho2 * rho2, q, t2) *
                 detail::w_product(x, y, rho2, q, t3) / detail::w_product(x, z, rho1, q, t4);
        closed_res = (t1.achieved_residual + t2.achieved_residual + t3.achieved_residual +
                      t4.achieved_residual) *
                     std::abs(closed);
    }
    return assemble(method, &series, closed, closed_res);
}

double inversion_identity(double x, double y, double z, double rho1, double rho2, QParam q,
                          Truncation trunc) {
    return detail::inversion_identity_scaled(x, y, z, rho1, rho2, q, trunc, nullptr);
}

double phi_reciprocal_series(double x, double a, QParam q, Truncation trunc) {
    return detail::phi_reciprocal_series_scaled(x, a, q, trunc, nullptr);
}

double phi_series(double x, double t, QParam q, Truncation trunc) {
    return detail::phi_series_scaled(x, t, q, trunc, nullptr);
}

namespace detail {

double inversion_identity_scaled(double x, double y, double z, double rho1, double rho2, QParam q,
                                 Truncation trunc, double* scale) {
    if (rho1 == 0.0 || rho2 == 0.0)
        throw std::domain_error("inversion_identity: rho1 and rho2 must be nonzero");
    const KernelResult lhs = asc_kernel_general(x, y, z, rho1, rho2, q, trunc, Method::Series);
    const KernelResult rhs = asc_kernel_general(x, z, y, rho2, rho1, q, trunc, Method::Series);
    if (scale)
        *scale = std::abs(lhs.value) * rhs.series_term_sum + std::abs(rhs.value) * lhs.series_term_sum;
    return lhs.value * rhs.value;
}

double phi_reciprocal_series_scaled(double x, double a, QParam q, Truncation trunc, double* abs_sum) {
    require_kernel_regime(q);
    const double sq = std::sqrt(1.0 - q.value());
    const double alpha = a * sq;
    const double k = half_sqrt_om(q);
    HatBigH ha{k * x, alpha, q.value()};
    // term_n = (-alpha)^n q^C(n,2) hat_n / (q;q)_n
    double u = 1.0, qc = 1.0, qn = 1.0, qn1 = q.value();
    double s = 0.0, asum = 0.0;
    int below = 0;
    for (int n = 0; n < trunc.max_terms; ++n) {
        const double t = u * qc * ha.value();
        s += t;
        asum += std::abs(t);
        below = (std::abs(t) < trunc.tail_tol) ? below + 1 : 0;
        if (below >= 5) {
            if (abs_sum) *abs_sum = asum;
            return s;
        }
        u *= -alpha / (1.0 - qn1);
        qc *= qn;
        qn = qn1;
        qn1 *= q.value();
        ha.advance();
    }
    throw ConvergenceError("phi_reciprocal_series: did not converge within max_terms");
}

double phi_series_scaled(double x, double t, QParam q, Truncation trunc, double* abs_sum) {
    require_kernel_regime(q);
    const double alpha = t * std::sqrt(1.0 - q.value());
    if (std::abs(alpha) >= 1.0) throw std::domain_error("phi_series: requires |t sqrt(1-q)| < 1");
    struct HatOne {
        double value() const { return 1.0; }
        void advance() {}
    };
    const double k = half_sqrt_om(q);
    const SeriesOut s = h_kernel_series(alpha, q, 1.0, 1.0, HatBigH{k * x, 0.0, q.value()}, HatOne{},
                                        trunc, "phi_series");
    if (abs_sum) *abs_sum = s.abs_sum;
    return s.sum;
}

} // namespace detail

double build_lancaster_density(double x, double y, double rho, QParam q, Truncation trunc) {
    require_kernel_regime(q);
    require_corr(rho, "build_lancaster_density");
    const DensityPoint fx = f_n(x, q, trunc);
    if (!fx.in_support) return 0.0;
    const DensityPoint fy = f_n(y, q, trunc);
    if (!fy.in_support) return 0.0;
    const KernelResult kr = poisson_mehler(x, y, rho, q, trunc, Method::Closed);
    return fx.value * kr.value * fy.value;
}

namespace {

// q = 1 bilinear Hermite series sum_{n<cap} lead^n/n! H_n(u) H_n(v) with the
// 120-term policy; requires |lead| <= 0.8.
double hermite_bilinear_series(double u, double v, double lead, int cap) {
    double hm1 = 0.0, h1 = 1.0, hm2 = 0.0, h2 = 1.0;
    double w = 1.0, s = 0.0;
    for (int n = 0; n < cap; ++n) {
        s += w * h1 * h2;
        w *= lead / (n + 1);
        const double n1 = u * h1 - n * hm1;
        hm1 = h1;
        h1 = n1;
        const double n2 = v * h2 - n * hm2;
        hm2 = h2;
        h2 = n2;
    }
    return s;
}

} // namespace

KernelResult corollary_special(CorollaryCase which, const CorollaryParams& p, Truncation trunc) {
    KernelResult r;
    r.method = Method::Both;
    switch (which) {
        case CorollaryCase::Q1BigH: {
            if (std::abs(p.a) >= std::abs(p.b) || p.b == 0.0)
                throw std::domain_error("corollary_special: requires |a| < |b|, b != 0");
            const double rho = p.a / p.b;
            const double closed = std::exp(-(p.x - rho * p.y) * (p.x - rho * p.y) /
                                               (2.0 * (1.0 - rho * rho)) +
                                           (p.x - p.a) * (p.x - p.a) / 2.0) /
                                  std::sqrt(1.0 - rho * rho);
            r.closed_value = closed;
            r.value = closed;
            if (std::abs(rho) > 0.8) {
                r.method = Method::Closed;
                return r;
            }
            const double s = hermite_bilinear_series(p.x - p.a, p.y - p.b, rho, 120);
            r.series_value = s;
            r.terms_used = 120;
            r.discrepancy = std::abs(s - closed);
            return r;
        }
        case CorollaryCase::Q1Asc: {
            require_corr(p.rho1, "corollary_special");
            require_corr(p.rho2, "corollary_special");
            const double v1 = 1.0 - p.rho1 * p.rho1;
            const double v12 = 1.0 - p.rho1 * p.rho1 * p.rho2 * p.rho2;
            const double v2 = 1.0 - p.rho2 * p.rho2;
            const double closed =
                std::sqrt(v12 / v1) * std::exp(-(p.x - p.rho1 * p.z) * (p.x - p.rho1 * p.z) / (2.0 * v1) +
                                               (p.x - p.rho1 * p.rho2 * p.y) *
                                                   (p.x - p.rho1 * p.rho2 * p.y) / (2.0 * v12));
            r.closed_value = closed;
            r.value = closed;
            if (std::abs(p.rho1) > 0.8) {
                r.method = Method::Closed;
                return r;
            }
            const double lead = p.rho1 * std::sqrt(v2 / v12);
            const double s = hermite_bilinear_series((p.x - p.rho1 * p.rho2 * p.y) / std::sqrt(v12),
                                                     (p.z - p.rho2 * p.y) / std::sqrt(v2), lead, 120);
            r.series_value = s;
            r.terms_used = 120;
            r.discrepancy = std::abs(s - closed);
            return r;
        }
        case CorollaryCase::Q0BigH: {
            if (std::abs(p.a) >= std::abs(p.b) || std::abs(p.b) >= 1.0)
                throw std::domain_error("corollary_special: requires 1 > |b| > |a|");
            if (std::abs(p.x) > 2.0 || std::abs(p.y) > 2.0)
                throw std::domain_error("corollary_special: requires x, y in [-2, 2]");
            const double rho = p.a / p.b;
            const double closed = (1.0 - rho * rho) * (1.0 - p.a * p.x + p.a * p.a) /
                                  w_kernel(p.x, p.y, rho, QParam(0.0));
            double um1 = 0.0, u1 = 1.0, um2 = 0.0, u2 = 1.0; // U_n at x/2 and y/2
            double rp = 1.0, s = 0.0;
            int below = 0, n = 0;
            for (; n < trunc.max_terms; ++n) {
                const double t = rp * (u1 - p.a * um1) * (u2 - p.b * um2);
                s += t;
                below = (std::abs(t) < trunc.tail_tol) ? below + 1 : 0;
                if (below >= 5) break;
                rp *= rho;
                const double n1 = p.x * u1 - um1;
                um1 = u1;
                u1 = n1;
                const double n2 = p.y * u2 - um2;
                um2 = u2;
                u2 = n2;
            }
            if (n >= trunc.max_terms)
                throw ConvergenceError("corollary_special Q0BigH: series did not converge");
            r.closed_value = closed;
            r.series_value = s;
            r.value = closed;
            r.terms_used = n + 1;
            r.discrepancy = std::abs(s - closed);
            return r;
        }
        case CorollaryCase::Q0Asc: {
            require_corr(p.rho1, "corollary_special");
            require_corr(p.rho2, "corollary_special");
            if (std::abs(p.x) > 2.0 || std::abs(p.y) > 2.0 || std::abs(p.z) > 2.0)
                throw std::domain_error("corollary_special: requires x, y, z in [-2, 2]");
            const QParam q0(0.0);
            const double r12 = p.rho1 * p.rho2;
            const double closed = (1.0 - p.rho1 * p.rho1) * w_kernel(p.x, p.y, r12, q0) /
                                  ((1.0 - r12 * r12) * w_kernel(p.x, p.z, p.rho1, q0));
            // 1 + 1/(1 - rho1^2 rho2^2) sum_{n>=1} rho1^n P_n(x|y,r12,0) P_n(z|y,rho2,0)
            HatAsc p1{p.x / 2.0, r12 * p.y, r12 * r12, 0.0};
            HatAsc p2{p.z / 2.0, p.rho2 * p.y, p.rho2 * p.rho2, 0.0};
            double rp = 1.0, s = 0.0;
            int below = 0, n = 1;
            p1.advance();
            p2.advance();
            for (; n < trunc.max_terms; ++n) {
                rp *= p.rho1;
                const double t = rp * p1.value() * p2.value();
                s += t;
                below = (std::abs(t) < trunc.tail_tol) ? below + 1 : 0;
                if (below >= 5) break;
                p1.advance();
                p2.advance();
            }
            if (n >= trunc.max_terms)
                throw ConvergenceError("corollary_special Q0Asc: series did not converge");
            const double series = 1.0 + s / (1.0 - r12 * r12);
            r.closed_value = closed;
            r.series_value = series;
            r.value = closed;
            r.terms_used = n + 1;
            r.discrepancy = std::abs(series - closed);
            return r;
        }
    }
    throw std::invalid_argument("corollary_special: unknown case");
}

} // namespace qkernel
