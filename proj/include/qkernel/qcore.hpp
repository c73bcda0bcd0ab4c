#pragma once

#include <span>
#include <stdexcept>

namespace qkernel {

// Thrown when an infinite product or series hits a zero/near-zero factor in a
// denominator, as opposed to being called outside its parameter domain.
class PoleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when a truncated series/product fails to meet its tail tolerance
// within the allotted number of terms.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class QRegime { Generic, Zero, One };

/// Validated deformation parameter q, restricted to -1 < q <= 1.
class QParam {
public:
    QParam(double q) : q_(q) {
        if (!(q > -1.0 && q <= 1.0))
            throw std::domain_error("QParam: q must satisfy -1 < q <= 1");
        regime_ = (q == 0.0) ? QRegime::Zero : (q == 1.0) ? QRegime::One : QRegime::Generic;
    }

    double value() const noexcept { return q_; }
    QRegime regime() const noexcept { return regime_; }
    bool is_zero() const noexcept { return regime_ == QRegime::Zero; }
    bool is_one() const noexcept { return regime_ == QRegime::One; }

private:
    double q_;
    QRegime regime_;
};

/// Truncation policy for infinite series and products. achieved_residual is an
/// output: the tail bound actually attained by the operation that consumed the
/// policy, never an estimate presented as exact.
struct Truncation {
    int max_terms = 400;
    double tail_tol = 1e-12;
    double achieved_residual = 0.0;
};

/// [n]_q = 1 + q + ... + q^{n-1}; [0]_q = 0.
double q_bracket(int n, QParam q);

/// [n]_q! = prod_{i=1..n} [i]_q; [0]_q! = 1.
double q_factorial(int n, QParam q);

/// Gaussian binomial coefficient; 0 unless n >= k >= 0.
double q_binomial(int n, int k, QParam q);

/// (a;q)_n = prod_{i=0..n-1} (1 - a q^i).
double q_pochhammer(double a, QParam q, int n);

// (a;q)_infinity by truncated product. Requires |q| < 1 and rejects q within
// 1e-9 of 1, where convergence degrades as 1/(1-q); exact q = 1 has closed
// forms upstream. The stop index comes from the geometric tail bound
// |log prod_{k>=K} (1 - a q^k)| <= 2|a||q|^K / (1 - |q|), valid once
// |a||q|^K <= 1/2; trunc.achieved_residual receives the attained relative
// bound.
double q_pochhammer_inf(double a, QParam q, Truncation& trunc);
double q_pochhammer_inf(double a, QParam q);

/// Multiplicative multi-argument variant: (a1,...,ak;q)_inf.
double q_pochhammer_inf_multi(std::span<const double> as, QParam q, Truncation& trunc);

namespace detail {
// Shared guard for the infinite-product routines.
void require_product_regime(QParam q);
}

} // namespace qkernel
