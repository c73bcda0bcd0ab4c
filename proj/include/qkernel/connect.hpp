#pragma once

#include "qkernel/families.hpp"
#include "qkernel/qcore.hpp"

#include <utility>
#include <vector>

namespace qkernel {

/// A finite expansion of a degree-`source_index` polynomial in another family:
/// source(x) = sum_i coefficients[i] * target_i(x). Index i is the degree of
/// the i-th target polynomial, so coefficients.size() == source_index + 1.
struct ExpansionResult {
    std::vector<double> coefficients;
    PolySpec target;
    int source_index = 0;

    /// Reassemble sum_i coefficients[i] * target_i(x).
    double reassemble(double x) const;
};

/// H_n(x|a,q) = sum_i qbinom(n,i) q^C(i,2) (-a)^i H_{n-i}(x|q).
ExpansionResult expand_bigh_in_qhermite(int n, double a, QParam q);

/// H_n(x|q) = sum_i qbinom(n,i) a^i H_{n-i}(x|a,q).
ExpansionResult expand_qhermite_in_bigh(int n, double a, QParam q);

/// P_n(x|y,rho,q) = sum_i qbinom(n,i) rho^{n-i} B_{n-i}(y|q) H_i(x|q).
ExpansionResult expand_asc_in_qhermite(int n, double y, double rho, QParam q);

/// H_n(x|q) = sum_i qbinom(n,i) rho^{n-i} H_{n-i}(y|q) P_i(x|y,rho,q).
ExpansionResult expand_qhermite_in_asc(int n, double y, double rho, QParam q);

/// H_n(x|a,q) = sum_j qbinom(n,j) (a/b)^{n-j} H_{n-j}(y|b,q) P_j(x|y,a/b,q).
/// Rejects b = 0.
ExpansionResult connect_bigh_via_asc(int n, double y, double a, double b, QParam q);

// P_n(x|y,rho,q) = sum_i qbinom(n,i) rho^{n-i} B_{n-i}(y|a/rho,q) H_i(x|a,q).
// rho = 0 with a != 0 is rejected (the ratio a/rho enters the shifted-B
// weights); rho = 0 with a = 0 returns the plain q-Hermite expansion.
ExpansionResult connect_asc_via_bigh(int n, double y, double rho, double a, QParam q);

/// P_n(x|y,rho1*rho2,q) = sum_i qbinom(n,i) rho1^{n-i} P_{n-i}(z|y,rho2,q) P_i(x|z,rho1,q).
ExpansionResult connect_asc_product(int n, double y, double z, double rho1, double rho2, QParam q);

/// r_n(x|q) = sum_i qbinom(n,i) x^i.
double r_poly(int n, double x, QParam q);

/// Upper bound for max_{x in S(q)} |H_n(x|a,q)|:
/// (-|a| sqrt(1-q); q)_inf (1-q)^{-n/2} r_n(1|q); the a = 0 variant drops the
/// product factor. Rejects q = 1.
double bound_qhermite(int n, double a, QParam q);

/// Two-sided bounds for f_CN(x|y,rho,q)/f_N(x|q) over S(q)^2:
/// (rho^2)_inf / (-|rho|)_inf^4  <=  ratio  <=  (rho^2)_inf / (|rho|)_inf^4.
std::pair<double, double> density_ratio_bounds(double rho, QParam q, Truncation& trunc);
std::pair<double, double> density_ratio_bounds(double rho, QParam q);

} // namespace qkernel
