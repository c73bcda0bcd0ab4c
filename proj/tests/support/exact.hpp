#pragma once

// Exact-rational companions of the q-arithmetic and the polynomial
// recurrences, used as the brute-force oracle throughout the test suite.
// Everything here is recomputed from the defining formulas in rational
// arithmetic (GMP), independently of the library implementation it checks.

#include <gmpxx.h>

#include <vector>

namespace exact {

using Rat = mpq_class;
using Poly = std::vector<Rat>; // coefficient of x^i at index i

inline Rat rq_bracket(int n, const Rat& q) {
    Rat s = 0, p = 1;
    for (int i = 0; i < n; ++i) {
        s += p;
        p *= q;
    }
    return s;
}

inline Rat rq_factorial(int n, const Rat& q) {
    Rat r = 1;
    for (int i = 1; i <= n; ++i) r *= rq_bracket(i, q);
    return r;
}

inline Rat rq_binomial(int n, int k, const Rat& q) {
    if (!(n >= k && k >= 0)) return 0;
    Rat r = 1;
    for (int i = 1; i <= k; ++i) r *= rq_bracket(n - k + i, q) / rq_bracket(i, q);
    return r;
}

inline Rat rq_pochhammer(const Rat& a, const Rat& q, int n) {
    Rat r = 1, p = 1;
    for (int i = 0; i < n; ++i) {
        r *= 1 - a * p;
        p *= q;
    }
    return r;
}

// ---- value evaluators ------------------------------------------------------

inline Rat qhermite(int n, const Rat& x, const Rat& q) {
    Rat pm = 0, p = 1;
    for (int k = 0; k < n; ++k) {
        Rat next = x * p - rq_bracket(k, q) * pm;
        pm = p;
        p = next;
    }
    return p;
}

inline Rat big_qhermite(int n, const Rat& x, const Rat& a, const Rat& q) {
    Rat pm = 0, p = 1, qk = 1;
    for (int k = 0; k < n; ++k) {
        Rat next = (x - a * qk) * p - rq_bracket(k, q) * pm;
        pm = p;
        p = next;
        qk *= q;
    }
    return p;
}

inline Rat asc(int n, const Rat& x, const Rat& y, const Rat& rho, const Rat& q) {
    Rat pm = 0, p = 1, qk = 1, qkm = 1;
    for (int k = 0; k < n; ++k) {
        Rat off = (k == 0) ? Rat(0) : rq_bracket(k, q) * (1 - rho * rho * qkm);
        Rat next = (x - rho * y * qk) * p - off * pm;
        pm = p;
        p = next;
        qkm = qk;
        qk *= q;
    }
    return p;
}

inline Rat aux_b(int n, const Rat& x, const Rat& q) {
    Rat pm = 0, p = 1, qk = 1, qkm = 1;
    for (int k = 0; k < n; ++k) {
        Rat off = (k == 0) ? Rat(0) : qkm * rq_bracket(k, q);
        Rat next = -qk * x * p + off * pm;
        pm = p;
        p = next;
        qkm = qk;
        qk *= q;
    }
    return p;
}

inline Rat aux_b_shifted(int m, const Rat& x, const Rat& b, const Rat& q) {
    Rat s = 0, bp = 1;
    for (int j = m; j >= 0; --j) {
        s += rq_binomial(m, j, q) * bp * aux_b(j, x, q);
        bp *= b;
    }
    return s;
}

inline Rat chebyshev_u(int n, const Rat& x) {
    if (n == -1) return 0;
    Rat pm = 0, p = 1;
    for (int k = 0; k < n; ++k) {
        Rat next = 2 * x * p - pm;
        pm = p;
        p = next;
    }
    return p;
}

inline Rat hermite_prob(int n, const Rat& x) {
    Rat pm = 0, p = 1;
    for (int k = 0; k < n; ++k) {
        Rat next = x * p - k * pm;
        pm = p;
        p = next;
    }
    return p;
}

inline Rat r_poly(int n, const Rat& x, const Rat& q) {
    Rat s = 0, xp = 1;
    for (int i = 0; i <= n; ++i) {
        s += rq_binomial(n, i, q) * xp;
        xp *= x;
    }
    return s;
}

// ---- coefficient-vector evaluators ------------------------------------------
// p_{k+1}(x) = (A_k x + B_k) p_k(x) - C_k p_{k-1}(x), tracked on coefficients.

namespace detail {

inline Poly step(const Poly& p, const Poly& pm, const Rat& A, const Rat& B, const Rat& C) {
    Poly next(p.size() + 1, Rat(0));
    for (size_t i = 0; i < p.size(); ++i) {
        next[i + 1] += A * p[i];
        next[i] += B * p[i];
    }
    for (size_t i = 0; i < pm.size(); ++i) next[i] -= C * pm[i];
    return next;
}

} // namespace detail

template <class AF, class BF, class CF>
inline Poly three_term_poly(int n, AF A, BF B, CF C) {
    Poly pm{}, p{Rat(1)};
    for (int k = 0; k < n; ++k) {
        // sequenced: the lambdas may share running q-power state
        const Rat a = A(k);
        const Rat b = B(k);
        const Rat c = C(k);
        Poly next = detail::step(p, pm, a, b, c);
        pm = p;
        p = next;
    }
    return p;
}

inline Poly qhermite_poly(int n, const Rat& q) {
    return three_term_poly(
        n, [](int) { return Rat(1); }, [](int) { return Rat(0); },
        [&](int k) { return rq_bracket(k, q); });
}

inline Poly hermite_prob_poly(int n) {
    return three_term_poly(
        n, [](int) { return Rat(1); }, [](int) { return Rat(0); }, [](int k) { return Rat(k); });
}

inline Poly chebyshev_u_poly(int n) {
    return three_term_poly(
        n, [](int) { return Rat(2); }, [](int) { return Rat(0); },
        [](int k) { return Rat(k == 0 ? 0 : 1); });
}

inline Poly big_qhermite_poly(int n, const Rat& a, const Rat& q) {
    Rat qk = 1;
    return three_term_poly(
        n, [](int) { return Rat(1); },
        [&](int k) {
            if (k > 0) qk *= q;
            return Rat(-a * qk);
        },
        [&](int k) { return rq_bracket(k, q); });
}

inline Poly asc_poly(int n, const Rat& y, const Rat& rho, const Rat& q) {
    Rat qk = 1, qkm = 1;
    return three_term_poly(
        n, [](int) { return Rat(1); },
        [&](int k) {
            if (k > 0) {
                qkm = qk;
                qk *= q;
            }
            return Rat(-rho * y * qk);
        },
        [&](int k) { return k == 0 ? Rat(0) : Rat(rq_bracket(k, q) * (1 - rho * rho * qkm)); });
}

inline Poly aux_b_poly(int n, const Rat& q) {
    Rat qk = 1, qkm = 1;
    return three_term_poly(
        n,
        [&](int k) {
            if (k > 0) {
                qkm = qk;
                qk *= q;
            }
            return Rat(-qk);
        },
        [](int) { return Rat(0); },
        [&](int k) { return k == 0 ? Rat(0) : Rat(-qkm * rq_bracket(k, q)); });
}

inline Rat eval_poly(const Poly& p, const Rat& x) {
    Rat s = 0;
    for (size_t i = p.size(); i-- > 0;) s = s * x + p[i];
    return s;
}

} // namespace exact
