#pragma once

#include "qkernel/families.hpp"
#include "qkernel/qcore.hpp"

namespace qkernel {

/// A density evaluation; value is 0 whenever in_support is false.
struct DensityPoint {
    double x = 0.0;
    double value = 0.0;
    bool in_support = false;
};

// Generating function phi(x|t,q) = 1 / prod_k (1 - (1-q) x t q^k + (1-q) t^2 q^{2k}).
// Closed forms: exp(xt - t^2/2) at q = 1 and 1/(1 - xt + t^2) at q = 0. For the
// generic regime requires |t sqrt(1-q)| < 1; a vanishing factor raises PoleError.
double phi(double x, double t, QParam q, Truncation& trunc);
double phi(double x, double t, QParam q);

/// w(x,y,rho|q) = (1-rho^2)^2 - (1-q) rho (1+rho^2) x y + (1-q) rho^2 (x^2+y^2).
double w_kernel(double x, double y, double rho, QParam q);

// Orthogonality density of the q-Hermite family. The 1/sqrt(4-(1-q)x^2)
// prefactor and the k = 0 product factor are merged into sqrt(4-(1-q)x^2), so
// the support endpoints evaluate to 0 without a 0/0. Outside the support the
// value is 0 with in_support = false.
DensityPoint f_n(double x, QParam q, Truncation& trunc);
DensityPoint f_n(double x, QParam q);

/// Big-q-Hermite density f_N(x|q) phi(x|a,q); requires |a sqrt(1-q)| < 1.
DensityPoint f_bn(double x, double a, QParam q, Truncation& trunc);
DensityPoint f_bn(double x, double a, QParam q);

/// ASC conditional density f_N(x|q) (rho^2)_inf / prod_k w(x,y,rho q^k|q);
/// requires |rho| < 1 and y in S(q). Gaussian at q = 1, rational-times-
/// semicircle at q = 0.
DensityPoint f_cn(double x, double y, double rho, QParam q, Truncation& trunc);
DensityPoint f_cn(double x, double y, double rho, QParam q);

// The densities divided by their sqrt(4-(1-q)x^2) endpoint factor. These are
// the smooth integrands the weight-matched quadrature consumes; only defined
// for |q| < 1 and |x| <= 2/sqrt(1-q).
double f_n_smooth(double x, QParam q, Truncation& trunc);
double f_bn_smooth(double x, double a, QParam q, Truncation& trunc);
double f_cn_smooth(double x, double y, double rho, QParam q, Truncation& trunc);

namespace detail {

// prod_{k>=0} w(x,y,rho q^k|q) with a geometric tail bound written to
// trunc.achieved_residual; PoleError on a vanishing or negative factor.
double w_product(double x, double y, double rho, QParam q, Truncation& trunc);

// prod_{k>=0} (1 - (1-q) x t q^k + (1-q) t^2 q^{2k}) == 1/phi(x|t,q), valid for
// any t when |q| < 1 (the product converges even where the phi series does not).
double phi_denominator_product(double x, double t, QParam q, Truncation& trunc);

} // namespace detail

} // namespace qkernel
