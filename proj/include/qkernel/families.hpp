#pragma once

#include "qkernel/qcore.hpp"

#include <vector>

namespace qkernel {

enum class Family {
    QHermiteH,           // H_n(x|q), monic rescaling of the continuous q-Hermite family
    ContinuousQHermiteh, // h_n(x|q)
    BigQHermiteH,        // H_n(x|a,q)
    AscP,                // P_n(x|y,rho,q)
    AscStandard,         // p_n(x|a,b,q) via symmetric functions s = a+b, p = ab
    AuxB,                // B_n(x|q)
    AuxBShifted,         // B_m(x|b,q) = sum_j qbinom(m,j) b^{m-j} B_j(x|q)
    ChebyshevU,
    HermiteProb,
};

/// A polynomial family together with the parameters its recurrence needs.
/// Unused parameters are ignored per family.
struct PolySpec {
    Family family;
    QParam q;
    double a = 0.0;   // big-q-Hermite shift
    double b = 0.0;   // shifted-B parameter / standard-ASC symmetric sum
    double y = 0.0;   // ASC conditioning point
    double rho = 0.0; // ASC correlation
};

/// Orthogonality support [-upper, upper]; unbounded at q = 1.
struct Support {
    double upper;
    bool bounded;
    double lower() const noexcept { return -upper; }
};

/// S(q) = [-2/sqrt(1-q), 2/sqrt(1-q)]; the whole real line at q = 1.
Support support(QParam q);

// Degree cap for the public evaluators; the recurrences are stable on the
// support but overflow silently for unbounded n.
inline constexpr int kMaxDegree = 200;

/// H_n(x|q): H_{n+1} = x H_n - [n]_q H_{n-1}, H_{-1} = 0, H_0 = 1.
/// At q = 1 this is the probabilistic Hermite polynomial, at q = 0 it is U_n(x/2).
double q_hermite(int n, double x, QParam q);

/// h_n(x|q): h_{n+1} = 2x h_n - (1-q^n) h_{n-1}. Rejects q = 1 (use q_hermite).
double continuous_q_hermite(int n, double x, QParam q);

/// U_n: U_{n+1} = 2x U_n - U_{n-1}, U_{-1} = 0, U_0 = 1. Accepts n >= -1.
double chebyshev_u(int n, double x);

/// Probabilistic Hermite: H_{n+1} = x H_n - n H_{n-1}.
double hermite_prob(int n, double x);

/// H_n(x|a,q): H_{n+1} = (x - a q^n) H_n - [n]_q H_{n-1}.
double big_q_hermite(int n, double x, double a, QParam q);

/// B_n(x|q): B_{n+1} = -q^n x B_n + q^{n-1} [n]_q B_{n-1}; the n = 0 step
/// defines q^{-1} [0]_q B_{-1} := 0 before any division.
double aux_b(int n, double x, QParam q);

/// B_m(x|b,q) = sum_{j<=m} qbinom(m,j) b^{m-j} B_j(x|q).
double aux_b_shifted(int m, double x, double b, QParam q);

// P_n(x|y,rho,q): P_{n+1} = (x - rho y q^n) P_n - [n]_q (1 - rho^2 q^{n-1}) P_{n-1}.
// For |rho| >= 1 evaluation routes through the connection-coefficient
// extension sum_k qbinom(n,k) rho^{n-k} B_{n-k}(y|q) H_k(x|q), which agrees
// with the recurrence on |rho| < 1.
double asc(int n, double x, double y, double rho, QParam q);

/// p_n via its recurrence with the complex pair (a,b) represented by the real
/// symmetric functions s = a+b, p = ab. Rejects q = 1.
double asc_standard(int n, double x, double s, double p, QParam q);

// Closed special-case forms.
double big_q_hermite_q0(int n, double x, double a);               // U_n(x/2) - a U_{n-1}(x/2)
double big_q_hermite_q1(int n, double x, double a);               // HermiteProb_n(x - a)
double asc_q0(int n, double x, double y, double rho);             // U_n - rho y U_{n-1} + rho^2 U_{n-2} at x/2
double asc_q1(int n, double x, double y, double rho);             // H_n((x-rho y)/sqrt(1-rho^2)) (1-rho^2)^{n/2}

// Whole-sequence evaluators (values for degrees 0..n); shared by the
// connection expansions and the quadrature harness.
std::vector<double> q_hermite_all(int n, double x, QParam q);
std::vector<double> big_q_hermite_all(int n, double x, double a, QParam q);
std::vector<double> asc_all(int n, double x, double y, double rho, QParam q);
std::vector<double> aux_b_all(int n, double x, QParam q);
std::vector<double> chebyshev_u_all(int n, double x);

/// Evaluate an arbitrary family/degree; the entry point used by the CLI.
double evaluate(const PolySpec& spec, int n, double x);

} // namespace qkernel
