#pragma once

#include "qkernel/measures.hpp"
#include "qkernel/qcore.hpp"

#include <optional>

namespace qkernel {

enum class Method { Series, Closed, Both };

/// Result of a kernel evaluation. With Method::Both, value holds the closed
/// form, series_value/closed_value hold both routes and discrepancy their
/// absolute difference; discrepancy is present iff method == Both.
/// series_term_sum is sum |t_n| over the summed terms, the conditioning scale
/// of the summation (the series cannot be more accurate than about
/// eps * series_term_sum in absolute terms).
struct KernelResult {
    double value = 0.0;
    Method method = Method::Closed;
    int terms_used = 0;
    double residual_estimate = 0.0;
    double series_term_sum = 0.0;
    std::optional<double> discrepancy;
    std::optional<double> series_value;
    std::optional<double> closed_value;
};

// sum_{i>=0} rho^i/[i]_q! H_i(x|q) H_i(y|q)
//   == (rho^2)_inf / prod_k w(x,y,rho q^k|q).
// The sum includes the i = 0 term equal to 1, which is what the product form
// requires. Requires |rho| < 1, |q| < 1, x,y in S(q); the value is positive.
KernelResult poisson_mehler(double x, double y, double rho, QParam q,
                            Truncation trunc = {}, Method method = Method::Closed);

// sum_n (a/b)^n/[n]_q! H_n(x|a,q) H_n(y|b,q)
//   == (a^2/b^2)_inf prod_k (1-(1-q)xa q^k+(1-q)a^2 q^{2k}) / w(x,y,q^k a/b|q).
// Requires |b| > |a|, |q| < 1, x,y in S(q); the value is nonnegative.
KernelResult bigh_kernel(double x, double y, double a, double b, QParam q,
                         Truncation trunc = {}, Method method = Method::Closed);

/// sum_n (a/b)^n/([n]_q! (a^2/b^2)_n) B_n(y|b,q) P_n(x|y,a/b,q); the
/// reciprocal of bigh_kernel (their product is 1). Series only.
KernelResult bigh_kernel_reciprocal(double x, double y, double a, double b, QParam q,
                                    Truncation trunc = {});

// sum_n rho1^n/([n]_q! (rho1^2 rho2^2)_n) P_n(x|y,rho1*rho2,q) P_n(z|y,rho2,q)
//   == (rho1^2)_inf/(rho1^2 rho2^2)_inf * prod_k w(x,y,q^k rho1 rho2|q)/w(x,z,q^k rho1|q)
//   == f_CN(x|z,rho1,q) / f_CN(x|y,rho1*rho2,q).
KernelResult asc_kernel(double x, double y, double z, double rho1, double rho2, QParam q,
                        Truncation trunc = {}, Method method = Method::Closed);

/// The f_CN ratio route for the same kernel; used for triple agreement checks.
double asc_kernel_fcn_ratio(double x, double y, double z, double rho1, double rho2, QParam q,
                            Truncation trunc = {});

// Symmetric reparameterization of asc_kernel:
// sum_n rho1^n/([n]_q! (rho2^2)_n) P_n(x|y,rho2,q) P_n(z|y,rho2/rho1,q)
//   == (rho1^2)_inf/(rho2^2)_inf * prod_k w(x,y,rho2 q^k|q)/w(x,z,rho1 q^k|q).
// P_n(z|y,rho2/rho1,q) uses the extended ASC definition when |rho2/rho1| >= 1.
// rho1 = 0 with rho2 != 0 is rejected.
KernelResult asc_kernel_general(double x, double y, double z, double rho1, double rho2, QParam q,
                                Truncation trunc = {}, Method method = Method::Closed);

/// Product of the two mutually reciprocal general ASC kernel series; equals 1
/// within the combined truncation residuals. Requires rho1, rho2 != 0.
double inversion_identity(double x, double y, double z, double rho1, double rho2, QParam q,
                          Truncation trunc = {});

/// sum_n (-a)^n q^C(n,2)/[n]_q! H_n(x|a,q) == 1/phi(x|a,q).
double phi_reciprocal_series(double x, double a, QParam q, Truncation trunc = {});

/// sum_n t^n/[n]_q! H_n(x|q) == phi(x|t,q); requires |t sqrt(1-q)| < 1.
double phi_series(double x, double t, QParam q, Truncation trunc = {});

/// Lancaster density h(x,y) = f_N(x|q) K_rho(x,y) f_N(y|q) with K the
/// Poisson-Mehler kernel; nonnegative, double integral 1.
double build_lancaster_density(double x, double y, double rho, QParam q, Truncation trunc = {});

// The q = 1 / q = 0 specialisations of the two kernel identities, evaluated on
// both sides. Q1BigH/Q0BigH use (x, y, a, b); Q1Asc/Q0Asc use (x, y, z, rho1,
// rho2). The q = 1 Hermite series are truncated at 120 terms and require the
// effective |rho| <= 0.8; beyond that only the closed side is evaluated.
enum class CorollaryCase { Q1BigH, Q0BigH, Q1Asc, Q0Asc };

struct CorollaryParams {
    double x = 0.0, y = 0.0, z = 0.0;
    double a = 0.0, b = 0.0;
    double rho1 = 0.0, rho2 = 0.0;
};

KernelResult corollary_special(CorollaryCase which, const CorollaryParams& p,
                               Truncation trunc = {});

namespace detail {

// Variants that also report the summation conditioning scale (sum of absolute
// terms, or the product's condition for the inversion), consumed by the
// verification harness.
double phi_series_scaled(double x, double t, QParam q, Truncation trunc, double* abs_sum);
double phi_reciprocal_series_scaled(double x, double a, QParam q, Truncation trunc, double* abs_sum);
double inversion_identity_scaled(double x, double y, double z, double rho1, double rho2, QParam q,
                                 Truncation trunc, double* scale);

} // namespace detail

} // namespace qkernel
