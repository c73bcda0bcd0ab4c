#include "qkernel/verify.hpp"

#include "qkernel/connect.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace qkernel {

// ---- quadrature -----------------------------------------------------------

QuadratureRule gauss_rule(int order, Support s, bool gaussian_mode) {
    if (order < 1) throw std::domain_error("gauss_rule: order must be >= 1");
    double lo, hi;
    if (s.bounded) {
        lo = s.lower();
        hi = s.upper;
    } else if (gaussian_mode) {
        lo = -12.0;
        hi = 12.0;
    } else {
        throw std::domain_error("gauss_rule: unbounded support requires gaussian_mode");
    }
    const double mid = (lo + hi) / 2.0, half = (hi - lo) / 2.0;
    QuadratureRule rule;
    rule.order = order;
    rule.nodes.resize(static_cast<size_t>(order));
    rule.weights.resize(static_cast<size_t>(order));
    for (int k = 0; k < order; ++k) {
        // Newton on P_order with the Chebyshev initial guess
        double x = std::cos(std::numbers::pi * (k + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= order; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
            }
            dp = order * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // k = 0 gives the largest root; store ascending
        rule.nodes[static_cast<size_t>(order - 1 - k)] = mid + half * x;
        rule.weights[static_cast<size_t>(order - 1 - k)] = 2.0 * half / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

QuadratureRule density_rule(int order, QParam q) {
    if (order < 1) throw std::domain_error("density_rule: order must be >= 1");
    if (q.is_one()) throw std::domain_error("density_rule: defined for |q| < 1 only");
    const double s = support(q).upper;
    QuadratureRule rule;
    rule.order = order;
    rule.nodes.resize(static_cast<size_t>(order));
    rule.weights.resize(static_cast<size_t>(order));
    for (int k = 1; k <= order; ++k) {
        const double theta = k * std::numbers::pi / (order + 1);
        // cos(theta) descends in k; store ascending
        rule.nodes[static_cast<size_t>(order - k)] = s * std::cos(theta);
        const double sn = std::sin(theta);
        rule.weights[static_cast<size_t>(order - k)] =
            2.0 * s * std::numbers::pi / (order + 1) * sn * sn;
    }
    return rule;
}

// ---- orthogonality --------------------------------------------------------

namespace {

// Smooth part (density / sqrt(4-(1-q)x^2)) for the family's density.
double family_density_smooth(const PolySpec& fam, double x, Truncation& trunc) {
    switch (fam.family) {
        case Family::QHermiteH: return f_n_smooth(x, fam.q, trunc);
        case Family::BigQHermiteH: return f_bn_smooth(x, fam.a, fam.q, trunc);
        case Family::AscP: return f_cn_smooth(x, fam.y, fam.rho, fam.q, trunc);
        default:
            throw std::domain_error("check_orthogonality: family has no orthogonality density here");
    }
}

double family_density(const PolySpec& fam, double x, Truncation& trunc) {
    switch (fam.family) {
        case Family::QHermiteH: return f_n(x, fam.q, trunc).value;
        case Family::BigQHermiteH: return f_bn(x, fam.a, fam.q, trunc).value;
        case Family::AscP: return f_cn(x, fam.y, fam.rho, fam.q, trunc).value;
        default:
            throw std::domain_error("check_orthogonality: family has no orthogonality density here");
    }
}

double expected_norm(const PolySpec& fam, int n) {
    const double base = q_factorial(n, fam.q);
    if (fam.family == Family::AscP) return q_pochhammer(fam.rho * fam.rho, fam.q, n) * base;
    return base;
}

double orthogonality_integral(const PolySpec& fam, int n, int m, int order) {
    Truncation trunc;
    const int deg = std::max(n, m);
    double acc = 0.0;
    if (fam.q.is_one()) {
        const QuadratureRule rule = gauss_rule(order, support(fam.q), true);
        for (size_t i = 0; i < rule.nodes.size(); ++i) {
            const double x = rule.nodes[i];
            const std::vector<double> p = (fam.family == Family::AscP)
                                              ? asc_all(deg, x, fam.y, fam.rho, fam.q)
                                              : (fam.family == Family::BigQHermiteH)
                                                    ? big_q_hermite_all(deg, x, fam.a, fam.q)
                                                    : q_hermite_all(deg, x, fam.q);
            acc += rule.weights[i] * p[static_cast<size_t>(n)] * p[static_cast<size_t>(m)] *
                   family_density(fam, x, trunc);
        }
        return acc;
    }
    const QuadratureRule rule = density_rule(order, fam.q);
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = rule.nodes[i];
        const std::vector<double> p = (fam.family == Family::AscP)
                                          ? asc_all(deg, x, fam.y, fam.rho, fam.q)
                                          : (fam.family == Family::BigQHermiteH)
                                                ? big_q_hermite_all(deg, x, fam.a, fam.q)
                                                : q_hermite_all(deg, x, fam.q);
        acc += rule.weights[i] * p[static_cast<size_t>(n)] * p[static_cast<size_t>(m)] *
               family_density_smooth(fam, x, trunc);
    }
    return acc;
}

} // namespace

double check_orthogonality(const PolySpec& fam, int n, int m, int order) {
    if (n < 0 || m < 0) throw std::domain_error("check_orthogonality: degrees must be nonnegative");
    if (fam.family == Family::AscP && std::abs(fam.rho) >= 1.0)
        throw std::domain_error("check_orthogonality: ASC family is orthogonal only for |rho| < 1");
    // one adaptive doubling if the normalization check misses
    const double norm0 = orthogonality_integral(fam, 0, 0, order);
    if (std::abs(norm0 - 1.0) > 1e-8) order *= 2;
    const double value = orthogonality_integral(fam, n, m, order);
    const double expect = (n == m) ? expected_norm(fam, n) : 0.0;
    return value - expect;
}

// ---- identity catalog ------------------------------------------------------

namespace {

struct IdentityInfo {
    const char* id;
    const char* description;
    double tolerance;
};

// clang-format off
const IdentityInfo kCatalog[] = {
    {"poisson-mehler",       "bilinear q-Hermite kernel: series vs closed product, positivity", 1e-8},
    {"bigh-kernel",          "big q-Hermite kernel: series vs closed product, nonnegativity",   1e-8},
    {"bigh-reciprocity",     "big q-Hermite kernel times its reciprocal series equals 1",       1e-6},
    {"asc-kernel",           "ASC kernel: series vs closed product vs density ratio, positivity", 1e-8},
    {"asc-kernel-general",   "symmetric ASC kernel: series vs closed product",                  1e-8},
    {"kernel-inversion",     "product of the two mutually reciprocal ASC kernel series equals 1", 1e-6},
    {"asc-mehler-reduction", "ASC kernel at rho2 = 0 equals the Poisson-Mehler kernel",         1e-10},
    {"bigh-mehler-limit",    "big q-Hermite kernel at a = rho*eps, b = eps approaches Poisson-Mehler", 1e-6},
    {"phi-inverse-series",   "phi times its reciprocal big-q-Hermite series equals 1",          1e-10},
    {"phi-generating",       "q-Hermite generating series equals the phi product",              1e-10},
    {"hermite-kernel-q1",    "q = 1 shifted-Hermite kernel: series vs Gaussian closed form",    1e-8},
    {"chebyshev-kernel-q0",  "q = 0 Chebyshev kernel: series vs rational closed form",          1e-10},
    {"asc-kernel-q1",        "q = 1 ASC kernel: Hermite series vs Gaussian closed form",        1e-8},
    {"asc-kernel-q0",        "q = 0 ASC kernel: series vs rational closed form",                1e-10},
    {"qhermite-bound",       "grid maxima of |H_n(x|a,q)| never exceed the stated bound",       1e-12},
    {"density-ratio",        "f_CN/f_N stays within its two-sided product bounds",              1e-10},
    {"normalization",        "f_N, f_bN, f_CN all integrate to 1",                              1e-8},
    {"orthogonality",        "quadrature norms match [n]_q! and (rho^2)_n [n]_q! delta_nm",     1e-7},
    {"lancaster",            "Lancaster density: nonnegative, double integral 1",               1e-6},
};
// clang-format on

const std::map<std::string, std::string>& alias_map() {
    static const std::map<std::string, std::string> aliases = {
        {"mehler", "poisson-mehler"},
        {"thm-i", "bigh-kernel"},
        {"thm-ii", "bigh-reciprocity"},
        {"thm-iii", "asc-kernel"},
        {"gen-asc", "asc-kernel-general"},
        {"nice", "kernel-inversion"},
        {"corollary-q1-bigh", "hermite-kernel-q1"},
        {"corollary-q0-bigh", "chebyshev-kernel-q0"},
        {"corollary-q1-asc", "asc-kernel-q1"},
        {"corollary-q0-asc", "asc-kernel-q0"},
    };
    return aliases;
}

const IdentityInfo* find_identity(const std::string& id) {
    for (const auto& info : kCatalog)
        if (id == info.id) return &info;
    return nullptr;
}

// Sweep accumulator with fixed-order aggregation.
struct Sweep {
    explicit Sweep(bool keep) : keep_rows(keep) {}
    bool keep_rows;
    IdentityReport rep;
    double residual_sum = 0.0;

    void add(std::vector<double> params, double lhs, double rhs) {
        add_residual(std::move(params), lhs, rhs, std::abs(lhs - rhs));
    }
    // residual |lhs-rhs| divided by the conditioning scale of the comparison:
    // equals the absolute residual wherever the values are O(1)
    void add_scaled(std::vector<double> params, double lhs, double rhs, double scale) {
        add_residual(std::move(params), lhs, rhs, std::abs(lhs - rhs) / std::max(1.0, scale));
    }
    void add_residual(std::vector<double> params, double lhs, double rhs, double residual) {
        ++rep.grid_size;
        residual_sum += residual;
        if (residual >= rep.max_residual) {
            // ">=" so the worst point is the last maximizer: deterministic either way
            if (residual > rep.max_residual || rep.worst_point.empty()) rep.worst_point = params;
            rep.max_residual = residual;
        }
        if (keep_rows) rep.rows.push_back({std::move(params), lhs, rhs, residual});
    }
    void check_positive(double v, double floor = -1e-12) {
        if (v < floor) ++rep.positivity_violations;
    }
};

std::vector<double> scaled(const std::vector<double>& fracs, double bound) {
    std::vector<double> out;
    out.reserve(fracs.size());
    for (double f : fracs) out.push_back(f * bound);
    return out;
}

// ---- runners ---------------------------------------------------------------

void run_poisson_mehler(Sweep& s, const GridSpec& g, Truncation trunc) {
    s.rep.param_names = {"q", "rho", "x", "y"};
    for (double qv : g.qs) {
        const QParam q(qv);
        const double up = support(q).upper;
        for (double rho : g.rhos)
            for (double x : scaled(g.x_fracs, up))
                for (double y : scaled(g.x_fracs, up)) {
                    const KernelResult r = poisson_mehler(x, y, rho, q, trunc, Method::Both);
                    const double scale = std::max(std::abs(*r.closed_value), r.series_term_sum);
                    s.add_scaled({qv, rho, x, y}, *r.series_value, *r.closed_value, scale);
                    s.check_positive(*r.series_value, -1e-12 * std::max(1.0, scale));
                    s.check_positive(*r.closed_value);
                }
    }
}

void run_bigh_kernel(Sweep& s, const GridSpec& g, Truncation trunc) {
    s.rep.param_names = {"q", "a", "b", "x", "y"};
    for (double qv : g.qs) {
        const QParam q(qv);
        const double up = support(q).upper;
        for (auto [a, b] : g.ab_pairs)
            for (double x : scaled(g.x_fracs, up))
                for (double y : scaled(g.x_fracs, up)) {
                    const KernelResult r = bigh_kernel(x, y, a, b, q, trunc, Method::Both);
                    const double scale = std::max(std::abs(*r.closed_value), r.series_term_sum);
                    s.add_scaled({qv, a, b, x, y}, *r.series_value, *r.closed_value, scale);
                    s.check_positive(*r.series_value, -1e-12 * std::max(1.0, scale));
                }
    }
}

void run_bigh_reciprocity(Sweep& s, const GridSpec& g, Truncation trunc) {
    s.rep.param_names = {"q", "a", "b", "x", "y"};
    for (double qv : g.qs) {
        const QParam q(qv);
        const double up = support(q).upper;
        for (auto [a, b] : g.ab_pairs)
            for (double x : scaled(g.x_fracs, up))
                for (double y : scaled(g.x_fracs, up)) {
                    const KernelResult k = bigh_kernel(x, y, a, b, q, trunc, Method::Series);
                    const KernelResult r = bigh_kernel_reciprocal(x, y, a, b, q, trunc);
                    const double scale =
                        std::abs(k.value) * r.series_term_sum + std::abs(r.value) * k.series_term_sum;
                    s.add_scaled({qv, a, b, x, y}, k.value * r.value, 1.0, scale);
                }
    }
}

void run_asc_kernel(Sweep& s, const GridSpec& g, Truncation trunc) {
    s.rep.param_names = {"q", "rho1", "rho2", "x", "y", "z"};
    for (double qv : g.qs) {
        const QParam q(qv);
        const double up = support(q).upper;
        for (double r1 : g.rhos)
            for (double r2 : g.rhos)
                for (double x : scaled(g.xyz_fracs, up))
                    for (double y : scaled(g.xyz_fracs, up))
                        for (double z : scaled(g.xyz_fracs, up)) {
                            const KernelResult r = asc_kernel(x, y, z, r1, r2, q, trunc, Method::Both);
                            const double ratio = asc_kernel_fcn_ratio(x, y, z, r1, r2, q, trunc);
                            const double scale = std::max(
                                {1.0, std::abs(*r.closed_value), r.series_term_sum, std::abs(ratio)});
                            const double res = std::max(std::abs(*r.series_value - *r.closed_value),
                                                        std::abs(*r.series_value - ratio)) /
                                               scale;
                            s.add_residual({qv, r1, r2, x, y, z}, *r.series_value, *r.closed_value, res);
                            s.check_positive(*r.series_value, -1e-12 * scale);
                        }
    }
}

void run_asc_kernel_general(Sweep& s, const GridSpec& g, Truncation trunc) {
    s.rep.param_names = {"q", "rho1", "rho2", "x", "y", "z"};
    for (double qv : g.qs) {
        const QParam q(qv);
        const double up = support(q).upper;
        for (auto [r1, r2] : g.rho_pairs)
            for (double x : scaled(g.xyz_fracs, up))
                for (double y : scaled(g.xyz_fracs, up))
                    for (double z : scaled(g.xyz_fracs, up)) {
                        const KernelResult r =
                            asc_kernel_general(x, y, z, r1, r2, q, trunc, Method::Both);
                        double scale = std::max(std::abs(*r.closed_value), r.series_term_sum);
                        s.add_scaled({qv, r1, r2, x, y, z}, *r.series_value, *r.closed_value, scale);
                        s.check_positive(*r.series_value, -1e-12 * std::max(1.0, scale));
                        // swapped pair exercises the extended |rho2/rho1| > 1 route
                        const KernelResult rs =
                            asc_kernel_general(x, y, z, r2, r1, q, trunc, Method::Both);
                        scale = std::max(std::abs(*rs.closed_value), rs.series_term_sum);
                        s.add_scaled({qv, r2, r1, x, y, z}, *rs.series_value, *rs.closed_value, scale);
                        s.check_positive(*rs.series_value, -1e-12 * std::max(1.0, scale));
                    }
    }
}

void run_kernel_inversion(Sweep& s, const GridSpec& g, Truncation trunc) {
    s.rep.param_names = {"q", "rho1", "rho2", "x", "y", "z"};
    for (double qv : g.qs) {
        const QParam q(qv);
        const double up = support(q).upper;
        for (auto [r1, r2] : g.rho_pairs)
            for (double x : scaled(g.xyz_fracs, up))
                for (double y : scaled(g.xyz_fracs, up))
                    for (double z : scaled(g.xyz_fracs, up)) {
                        double scale = 0.0;
                        const double prod =
                            detail::inversion_identity_scaled(x, y, z, r1, r2, q, trunc, &scale);
                        s.add_scaled({qv, r1, r2, x, y, z}, prod, 1.0, scale);
                    }
    }
}

void run_asc_mehler_reduction(Sweep& s, const GridSpec& g, Truncation trunc) {
    s.rep.param_names = {"q", "rho1", "x", "y", "z"};
    for (double qv : g.qs) {
        const QParam q(qv);
        const double up = support(q).upper;
        for (double r1 : g.rhos)
            for (double x : scaled(g.xyz_fracs, up))
                for (double y : scaled(g.xyz_fracs, up))
                    for (double z : scaled(g.xyz_fracs, up)) {
                        const KernelResult a = asc_kernel(x, y, z, r1, 0.0, q, trunc, Method::Both);
                        const KernelResult m = poisson_mehler(x, z, r1, q, trunc, Method::Both);
                        const double scale = std::max({1.0, std::abs(*a.closed_value),
                                                       a.series_term_sum, m.series_term_sum});
                        const double res = std::max(std::abs(*a.series_value - *m.series_value),
                                                    std::abs(*a.closed_value - *m.closed_value)) /
                                           scale;
                        s.add_residual({qv, r1, x, y, z}, *a.series_value, *m.series_value, res);
                    }
    }
}

void run_bigh_mehler_limit(Sweep& s, const GridSpec& g, Truncation trunc) {
    s.rep.param_names = {"q", "rho", "x", "y"};
    const double eps = 1e-8; // probe error is O(eps * scale)
    for (double qv : g.qs) {
        const QParam q(qv);
        const double up = support(q).upper;
        for (double rho : g.rhos)
            for (double x : scaled(g.xyz_fracs, up))
                for (double y : scaled(g.xyz_fracs, up)) {
                    const double k = bigh_kernel(x, y, rho * eps, eps, q, trunc, Method::Closed).value;
                    const double m = poisson_mehler(x, y, rho, q, trunc, Method::Closed).value;
                    s.add_scaled({qv, rho, x, y}, k, m, std::abs(m));
                }
    }
}

void run_phi_inverse(Sweep& s, const GridSpec& g, Truncation trunc) {
    s.rep.param_names = {"q", "a", "x"};
    for (double qv : g.qs) {
        const QParam q(qv);
        const double up = support(q).upper;
        for (double tau : g.rhos) {
            const double a = tau / std::sqrt(1.0 - qv); // |a sqrt(1-q)| = tau
            for (double x : scaled(g.x_fracs, up)) {
                const double p = phi(x, a, q, trunc);
                double asum = 0.0;
                const double r = detail::phi_reciprocal_series_scaled(x, a, q, trunc, &asum);
                s.add_scaled({qv, a, x}, p * r, 1.0, std::abs(p) * asum);
            }
        }
    }
}

void run_phi_generating(Sweep& s, const GridSpec& g, Truncation trunc) {
    s.rep.param_names = {"q", "t", "x"};
    for (double qv : g.qs) {
        const QParam q(qv);
        const double up = support(q).upper;
        for (double tau : g.rhos) {
            const double t = tau / std::sqrt(1.0 - qv);
            for (double x : scaled(g.x_fracs, up)) {
                double asum = 0.0;
                const double series = detail::phi_series_scaled(x, t, q, trunc, &asum);
                const double p = phi(x, t, q, trunc);
                s.add_scaled({qv, t, x}, series, p, std::max(asum, std::abs(p)));
            }
        }
    }
}

void run_hermite_kernel_q1(Sweep& s, const GridSpec& g, Truncation trunc) {
    s.rep.param_names = {"a", "b", "x", "y"};
    for (auto [a, b] : g.ab_pairs) {
        if (std::abs(a / b) > 0.8) continue; // series policy covers |rho| <= 0.8
        for (double x : {-1.5, 0.0, 1.5})
            for (double y : {-1.5, 0.0, 1.5}) {
                const KernelResult r =
                    corollary_special(CorollaryCase::Q1BigH, {.x = x, .y = y, .a = a, .b = b}, trunc);
                s.add({a, b, x, y}, *r.series_value, *r.closed_value);
            }
    }
}

void run_chebyshev_kernel_q0(Sweep& s, const GridSpec& g, Truncation trunc) {
    s.rep.param_names = {"a", "b", "x", "y"};
    for (auto [a, b] : g.ab_pairs)
        for (double xf : g.x_fracs)
            for (double yf : g.x_fracs) {
                const double x = 2.0 * xf, y = 2.0 * yf;
                const KernelResult r =
                    corollary_special(CorollaryCase::Q0BigH, {.x = x, .y = y, .a = a, .b = b}, trunc);
                s.add({a, b, x, y}, *r.series_value, *r.closed_value);
            }
}

void run_asc_kernel_q1(Sweep& s, const GridSpec& g, Truncation trunc) {
    s.rep.param_names = {"rho1", "rho2", "x", "y", "z"};
    for (auto [r1, r2] : g.rho_pairs)
        for (double x : {-1.5, 0.0, 1.5})
            for (double y : {-1.5, 0.0, 1.5})
                for (double z : {-1.5, 0.0, 1.5}) {
                    const KernelResult r = corollary_special(
                        CorollaryCase::Q1Asc, {.x = x, .y = y, .z = z, .rho1 = r1, .rho2 = r2}, trunc);
                    s.add({r1, r2, x, y, z}, *r.series_value, *r.closed_value);
                }
}

void run_asc_kernel_q0(Sweep& s, const GridSpec& g, Truncation trunc) {
    s.rep.param_names = {"rho1", "rho2", "x", "y", "z"};
    for (auto [r1, r2] : g.rho_pairs)
        for (double xf : g.xyz_fracs)
            for (double yf : g.xyz_fracs)
                for (double zf : g.xyz_fracs) {
                    const KernelResult r = corollary_special(
                        CorollaryCase::Q0Asc,
                        {.x = 2.0 * xf, .y = 2.0 * yf, .z = 2.0 * zf, .rho1 = r1, .rho2 = r2}, trunc);
                    s.add({r1, r2, 2.0 * xf, 2.0 * yf, 2.0 * zf}, *r.series_value, *r.closed_value);
                }
}

void run_qhermite_bound(Sweep& s, const GridSpec& g, Truncation) {
    s.rep.param_names = {"q", "a", "n"};
    for (double qv : {0.0, 0.3, 0.7}) {
        const QParam q(qv);
        const double up = support(q).upper;
        for (double a : {0.0, 0.3})
            for (int n = 1; n <= g.max_degree; ++n) {
                double gridmax = 0.0;
                for (int i = 0; i <= 1000; ++i) {
                    const double x = -up + 2.0 * up * i / 1000.0;
                    gridmax = std::max(gridmax, std::abs(big_q_hermite(n, x, a, q)));
                }
                const double bound = bound_qhermite(n, a, q);
                s.add_residual({qv, a, double(n)}, gridmax, bound, std::max(0.0, gridmax - bound));
            }
    }
}

void run_density_ratio(Sweep& s, const GridSpec& g, Truncation trunc) {
    s.rep.param_names = {"q", "rho", "x", "y"};
    for (double qv : {0.0, 0.3, 0.7}) {
        const QParam q(qv);
        const double up = support(q).upper;
        for (double rho : g.rhos) {
            const auto [lo, hi] = density_ratio_bounds(rho, q);
            for (int i = 0; i < 21; ++i)
                for (int j = 0; j < 21; ++j) {
                    const double x = -0.999 * up + 2 * 0.999 * up * i / 20.0;
                    const double y = -0.999 * up + 2 * 0.999 * up * j / 20.0;
                    const double ratio = f_cn(x, y, rho, q, trunc).value / f_n(x, q, trunc).value;
                    const double excess = std::max({0.0, lo - ratio, ratio - hi});
                    s.add_residual({qv, rho, x, y}, ratio, std::clamp(ratio, lo, hi), excess);
                    if (ratio <= 0.0) ++s.rep.positivity_violations;
                }
        }
    }
}

void run_normalization(Sweep& s, const GridSpec& g, Truncation trunc) {
    // family code: 0 = f_N, 1 = f_bN, 2 = f_CN
    s.rep.param_names = {"family", "q", "p1", "p2"};
    const int order = g.quad_order;
    auto integrate = [&](QParam q, const std::function<double(double, Truncation&)>& smooth) {
        for (int ord = order;; ord *= 2) {
            const QuadratureRule rule = density_rule(ord, q);
            double acc = 0.0;
            Truncation t = trunc;
            for (size_t i = 0; i < rule.nodes.size(); ++i)
                acc += rule.weights[i] * smooth(rule.nodes[i], t);
            if (std::abs(acc - 1.0) <= 1e-8 || ord >= 2 * order) return acc; // one doubling only
        }
    };
    for (double qv : g.qs) {
        const QParam q(qv);
        s.add({0.0, qv, 0.0, 0.0},
              integrate(q, [&](double x, Truncation& t) { return f_n_smooth(x, q, t); }), 1.0);
    }
    for (double qv : g.qs) {
        const QParam q(qv);
        for (auto [a, b] : g.ab_pairs) {
            (void)b;
            if (std::abs(a) * std::sqrt(1.0 - qv) >= 1.0) continue;
            s.add({1.0, qv, a, 0.0},
                  integrate(q, [&](double x, Truncation& t) { return f_bn_smooth(x, a, q, t); }), 1.0);
        }
    }
    for (double qv : g.qs) {
        const QParam q(qv);
        const double y = 0.4 * support(q).upper;
        for (double rho : g.rhos)
            s.add({2.0, qv, y, rho},
                  integrate(q, [&](double x, Truncation& t) { return f_cn_smooth(x, y, rho, q, t); }),
                  1.0);
    }
}

void run_orthogonality(Sweep& s, const GridSpec& g, Truncation trunc) {
    // family code: 0 = q-Hermite/f_N, 1 = big q-Hermite/f_bN, 2 = ASC/f_CN
    s.rep.param_names = {"family", "q", "p1", "p2", "n", "m"};
    const int deg = g.max_degree;

    auto sweep_family = [&](double code, const PolySpec& fam, const std::vector<double>& extra) {
        const QuadratureRule rule = density_rule(g.quad_order, fam.q);
        // node-major tables: polys[i][k] = p_k(node_i), dens[i] = smooth density
        std::vector<std::vector<double>> polys(rule.nodes.size());
        std::vector<double> dens(rule.nodes.size());
        Truncation t = trunc;
        for (size_t i = 0; i < rule.nodes.size(); ++i) {
            const double x = rule.nodes[i];
            polys[i] = (fam.family == Family::AscP) ? asc_all(deg, x, fam.y, fam.rho, fam.q)
                       : (fam.family == Family::BigQHermiteH)
                           ? big_q_hermite_all(deg, x, fam.a, fam.q)
                           : q_hermite_all(deg, x, fam.q);
            dens[i] = family_density_smooth(fam, x, t);
        }
        for (int n = 0; n <= deg; ++n)
            for (int m = n; m <= deg; ++m) {
                double acc = 0.0;
                for (size_t i = 0; i < rule.nodes.size(); ++i)
                    acc += rule.weights[i] * polys[i][static_cast<size_t>(n)] *
                           polys[i][static_cast<size_t>(m)] * dens[i];
                const double expect = (n == m) ? expected_norm(fam, n) : 0.0;
                const double scale = std::sqrt(std::max(1.0, expected_norm(fam, n)) *
                                               std::max(1.0, expected_norm(fam, m)));
                const double rel = std::abs(acc - expect) / scale;
                std::vector<double> params = {code, fam.q.value()};
                params.insert(params.end(), extra.begin(), extra.end());
                params.push_back(double(n));
                params.push_back(double(m));
                s.add_residual(std::move(params), acc, expect, rel);
            }
    };

    for (double qv : g.qs) {
        PolySpec fam{Family::QHermiteH, QParam(qv)};
        sweep_family(0.0, fam, {0.0, 0.0});
    }
    for (double qv : g.qs)
        for (auto [a, b] : g.ab_pairs) {
            (void)b;
            if (std::abs(a) * std::sqrt(1.0 - qv) >= 1.0) continue;
            PolySpec fam{Family::BigQHermiteH, QParam(qv), a};
            sweep_family(1.0, fam, {a, 0.0});
        }
    for (double qv : g.qs) {
        const double y = 0.4 * support(QParam(qv)).upper;
        for (double rho : g.rhos) {
            PolySpec fam{Family::AscP, QParam(qv)};
            fam.y = y;
            fam.rho = rho;
            sweep_family(2.0, fam, {y, rho});
        }
    }
}

void run_lancaster(Sweep& s, const GridSpec& g, Truncation trunc) {
    s.rep.param_names = {"q", "rho"};
    for (double qv : {0.0, 0.3, 0.7})
        for (double rho : g.rhos) {
            const QParam q(qv);
            const QuadratureRule rule = density_rule(96, q);
            Truncation t = trunc;
            std::vector<double> sm(rule.nodes.size());
            for (size_t i = 0; i < rule.nodes.size(); ++i) sm[i] = f_n_smooth(rule.nodes[i], q, t);
            double acc = 0.0;
            for (size_t i = 0; i < rule.nodes.size(); ++i)
                for (size_t j = 0; j < rule.nodes.size(); ++j) {
                    const double k =
                        poisson_mehler(rule.nodes[i], rule.nodes[j], rho, q, t, Method::Closed).value;
                    acc += rule.weights[i] * rule.weights[j] * sm[i] * k * sm[j];
                }
            s.add({qv, rho}, acc, 1.0);
            // positivity of h on a 41 x 41 grid
            const double up = support(q).upper;
            for (int i = 0; i < 41; ++i)
                for (int j = 0; j < 41; ++j) {
                    const double x = -up + 2 * up * i / 40.0;
                    const double y = -up + 2 * up * j / 40.0;
                    s.check_positive(build_lancaster_density(x, y, rho, q, t));
                }
        }
}

using Runner = void (*)(Sweep&, const GridSpec&, Truncation);

const std::map<std::string, Runner>& runner_map() {
    static const std::map<std::string, Runner> runners = {
        {"poisson-mehler", run_poisson_mehler},
        {"bigh-kernel", run_bigh_kernel},
        {"bigh-reciprocity", run_bigh_reciprocity},
        {"asc-kernel", run_asc_kernel},
        {"asc-kernel-general", run_asc_kernel_general},
        {"kernel-inversion", run_kernel_inversion},
        {"asc-mehler-reduction", run_asc_mehler_reduction},
        {"bigh-mehler-limit", run_bigh_mehler_limit},
        {"phi-inverse-series", run_phi_inverse},
        {"phi-generating", run_phi_generating},
        {"hermite-kernel-q1", run_hermite_kernel_q1},
        {"chebyshev-kernel-q0", run_chebyshev_kernel_q0},
        {"asc-kernel-q1", run_asc_kernel_q1},
        {"asc-kernel-q0", run_asc_kernel_q0},
        {"qhermite-bound", run_qhermite_bound},
        {"density-ratio", run_density_ratio},
        {"normalization", run_normalization},
        {"orthogonality", run_orthogonality},
        {"lancaster", run_lancaster},
    };
    return runners;
}

} // namespace

std::vector<std::string> identity_catalog() {
    std::vector<std::string> ids;
    for (const auto& info : kCatalog) ids.emplace_back(info.id);
    return ids;
}

std::string identity_description(const std::string& id) {
    const IdentityInfo* info = find_identity(canonical_identity_id(id));
    return info->description;
}

std::string canonical_identity_id(const std::string& id_or_alias) {
    if (find_identity(id_or_alias)) return id_or_alias;
    const auto it = alias_map().find(id_or_alias);
    if (it != alias_map().end()) return it->second;
    throw std::invalid_argument("unknown identity id: " + id_or_alias);
}

double default_tolerance(const std::string& id) {
    return find_identity(canonical_identity_id(id))->tolerance;
}

IdentityReport run_identity_suite(const std::string& id, const GridSpec& grid, double tolerance,
                                  Truncation trunc, bool keep_rows) {
    const std::string canon = canonical_identity_id(id);
    Sweep sweep(keep_rows);
    sweep.rep.identity_id = canon;
    sweep.rep.tolerance = tolerance > 0.0 ? tolerance : default_tolerance(canon);
    runner_map().at(canon)(sweep, grid, trunc);
    sweep.rep.mean_residual = sweep.rep.grid_size ? sweep.residual_sum / sweep.rep.grid_size : 0.0;
    sweep.rep.passed =
        sweep.rep.max_residual <= sweep.rep.tolerance && sweep.rep.positivity_violations == 0;
    return sweep.rep;
}

// ---- serialization ---------------------------------------------------------

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string report_to_json(const IdentityReport& r, bool include_rows) {
    std::ostringstream os;
    os << "{\"identity_id\":\"" << r.identity_id << "\""
       << ",\"grid_size\":" << r.grid_size << ",\"max_residual\":" << fmt(r.max_residual)
       << ",\"mean_residual\":" << fmt(r.mean_residual)
       << ",\"positivity_violations\":" << r.positivity_violations
       << ",\"tolerance\":" << fmt(r.tolerance) << ",\"passed\":" << (r.passed ? "true" : "false");
    os << ",\"worst_point\":{";
    for (size_t i = 0; i < r.worst_point.size() && i < r.param_names.size(); ++i) {
        if (i) os << ",";
        os << "\"" << r.param_names[i] << "\":" << fmt(r.worst_point[i]);
    }
    os << "}";
    if (include_rows) {
        os << ",\"rows\":[";
        for (size_t i = 0; i < r.rows.size(); ++i) {
            if (i) os << ",";
            os << "{\"params\":[";
            for (size_t j = 0; j < r.rows[i].params.size(); ++j) {
                if (j) os << ",";
                os << fmt(r.rows[i].params[j]);
            }
            os << "],\"lhs\":" << fmt(r.rows[i].lhs) << ",\"rhs\":" << fmt(r.rows[i].rhs)
               << ",\"residual\":" << fmt(r.rows[i].residual) << "}";
        }
        os << "]";
    }
    os << "}";
    return os.str();
}

std::string report_to_csv(const IdentityReport& r) {
    std::ostringstream os;
    for (const auto& name : r.param_names) os << name << ",";
    os << "lhs,rhs,residual\n";
    for (const auto& row : r.rows) {
        for (double p : row.params) os << fmt(p) << ",";
        os << fmt(row.lhs) << "," << fmt(row.rhs) << "," << fmt(row.residual) << "\n";
    }
    os << "# identity_id=" << r.identity_id << "\n";
    os << "# grid_size=" << r.grid_size << "\n";
    os << "# max_residual=" << fmt(r.max_residual) << "\n";
    os << "# mean_residual=" << fmt(r.mean_residual) << "\n";
    os << "# positivity_violations=" << r.positivity_violations << "\n";
    os << "# tolerance=" << fmt(r.tolerance) << "\n";
    os << "# passed=" << (r.passed ? "true" : "false") << "\n";
    return os.str();
}

} // namespace qkernel
