#include "qkernel/connect.hpp"
#include "qkernel/families.hpp"
#include "qkernel/kernels.hpp"
#include "qkernel/measures.hpp"
#include "qkernel/verify.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qkernel;

namespace {

Method parse_method(const std::string& m) {
    if (m == "series") return Method::Series;
    if (m == "closed") return Method::Closed;
    if (m == "both") return Method::Both;
    throw std::invalid_argument("method must be 'series', 'closed' or 'both'");
}

py::dict report_to_dict(const IdentityReport& r) {
    py::dict d;
    d["identity_id"] = r.identity_id;
    d["grid_size"] = r.grid_size;
    d["max_residual"] = r.max_residual;
    d["mean_residual"] = r.mean_residual;
    d["positivity_violations"] = r.positivity_violations;
    d["tolerance"] = r.tolerance;
    d["passed"] = r.passed;
    py::dict worst;
    for (size_t i = 0; i < r.worst_point.size() && i < r.param_names.size(); ++i)
        worst[py::str(r.param_names[i])] = r.worst_point[i];
    d["worst_point"] = worst;
    return d;
}

py::dict kernel_to_dict(const KernelResult& r) {
    py::dict d;
    d["value"] = r.value;
    d["method"] = r.method == Method::Both ? "both" : r.method == Method::Series ? "series" : "closed";
    d["terms_used"] = r.terms_used;
    d["residual_estimate"] = r.residual_estimate;
    if (r.series_value) d["series"] = *r.series_value;
    if (r.closed_value) d["closed"] = *r.closed_value;
    if (r.discrepancy) d["discrepancy"] = *r.discrepancy;
    return d;
}

Truncation make_trunc(int max_terms, double tail_tol) { return {max_terms, tail_tol, 0.0}; }

} // namespace

PYBIND11_MODULE(_qkernel, m) {
    m.doc() = "q-Hermite / big q-Hermite / Al-Salam-Chihara polynomials, densities and kernels";

    py::register_exception<PoleError>(m, "PoleError");
    py::register_exception<ConvergenceError>(m, "ConvergenceError");

    // q-arithmetic
    m.def("q_bracket", [](int n, double q) { return q_bracket(n, QParam(q)); }, py::arg("n"),
          py::arg("q"));
    m.def("q_factorial", [](int n, double q) { return q_factorial(n, QParam(q)); }, py::arg("n"),
          py::arg("q"));
    m.def("q_binomial", [](int n, int k, double q) { return q_binomial(n, k, QParam(q)); },
          py::arg("n"), py::arg("k"), py::arg("q"));
    m.def("q_pochhammer",
          [](double a, double q, int n) { return q_pochhammer(a, QParam(q), n); }, py::arg("a"),
          py::arg("q"), py::arg("n"));
    m.def("q_pochhammer_inf",
          [](double a, double q, int max_terms, double tail_tol) {
              Truncation t = make_trunc(max_terms, tail_tol);
              const double v = q_pochhammer_inf(a, QParam(q), t);
              return py::make_tuple(v, t.achieved_residual);
          },
          py::arg("a"), py::arg("q"), py::arg("max_terms") = 400, py::arg("tail_tol") = 1e-12,
          "returns (value, achieved_residual)");

    // polynomial families
    m.def("q_hermite", [](int n, double x, double q) { return q_hermite(n, x, QParam(q)); });
    m.def("continuous_q_hermite",
          [](int n, double x, double q) { return continuous_q_hermite(n, x, QParam(q)); });
    m.def("chebyshev_u", &chebyshev_u);
    m.def("hermite_prob", &hermite_prob);
    m.def("big_q_hermite",
          [](int n, double x, double a, double q) { return big_q_hermite(n, x, a, QParam(q)); });
    m.def("aux_b", [](int n, double x, double q) { return aux_b(n, x, QParam(q)); });
    m.def("aux_b_shifted",
          [](int m_, double x, double b, double q) { return aux_b_shifted(m_, x, b, QParam(q)); });
    m.def("asc",
          [](int n, double x, double y, double rho, double q) { return asc(n, x, y, rho, QParam(q)); });
    m.def("asc_standard",
          [](int n, double x, double s, double p, double q) { return asc_standard(n, x, s, p, QParam(q)); });
    m.def("support", [](double q) {
        const Support s = support(QParam(q));
        return py::make_tuple(s.lower(), s.upper, s.bounded);
    });

    // connection expansions
    auto coeffs = [](const ExpansionResult& r) { return r.coefficients; };
    m.def("expand_bigh_in_qhermite",
          [coeffs](int n, double a, double q) { return coeffs(expand_bigh_in_qhermite(n, a, QParam(q))); });
    m.def("expand_qhermite_in_bigh",
          [coeffs](int n, double a, double q) { return coeffs(expand_qhermite_in_bigh(n, a, QParam(q))); });
    m.def("expand_asc_in_qhermite", [coeffs](int n, double y, double rho, double q) {
        return coeffs(expand_asc_in_qhermite(n, y, rho, QParam(q)));
    });
    m.def("expand_qhermite_in_asc", [coeffs](int n, double y, double rho, double q) {
        return coeffs(expand_qhermite_in_asc(n, y, rho, QParam(q)));
    });
    m.def("connect_bigh_via_asc", [coeffs](int n, double y, double a, double b, double q) {
        return coeffs(connect_bigh_via_asc(n, y, a, b, QParam(q)));
    });
    m.def("connect_asc_via_bigh", [coeffs](int n, double y, double rho, double a, double q) {
        return coeffs(connect_asc_via_bigh(n, y, rho, a, QParam(q)));
    });
    m.def("connect_asc_product",
          [coeffs](int n, double y, double z, double rho1, double rho2, double q) {
              return coeffs(connect_asc_product(n, y, z, rho1, rho2, QParam(q)));
          });
    m.def("r_poly", [](int n, double x, double q) { return r_poly(n, x, QParam(q)); });
    m.def("bound_qhermite", [](int n, double a, double q) { return bound_qhermite(n, a, QParam(q)); });
    m.def("density_ratio_bounds", [](double rho, double q) {
        const auto [lo, hi] = density_ratio_bounds(rho, QParam(q));
        return py::make_tuple(lo, hi);
    });

    // measures
    m.def("phi", [](double x, double t, double q) { return phi(x, t, QParam(q)); });
    m.def("w_kernel", [](double x, double y, double rho, double q) { return w_kernel(x, y, rho, QParam(q)); });
    auto dp = [](const DensityPoint& p) { return py::make_tuple(p.value, p.in_support); };
    m.def("f_n", [dp](double x, double q) { return dp(f_n(x, QParam(q))); },
          "returns (value, in_support)");
    m.def("f_bn", [dp](double x, double a, double q) { return dp(f_bn(x, a, QParam(q))); });
    m.def("f_cn", [dp](double x, double y, double rho, double q) { return dp(f_cn(x, y, rho, QParam(q))); });

    // kernels
    m.def("poisson_mehler",
          [](double x, double y, double rho, double q, const std::string& method, int max_terms,
             double tail_tol) {
              return kernel_to_dict(poisson_mehler(x, y, rho, QParam(q),
                                                   make_trunc(max_terms, tail_tol), parse_method(method)));
          },
          py::arg("x"), py::arg("y"), py::arg("rho"), py::arg("q"), py::arg("method") = "closed",
          py::arg("max_terms") = 400, py::arg("tail_tol") = 1e-12);
    m.def("bigh_kernel",
          [](double x, double y, double a, double b, double q, const std::string& method,
             int max_terms, double tail_tol) {
              return kernel_to_dict(bigh_kernel(x, y, a, b, QParam(q), make_trunc(max_terms, tail_tol),
                                                parse_method(method)));
          },
          py::arg("x"), py::arg("y"), py::arg("a"), py::arg("b"), py::arg("q"),
          py::arg("method") = "closed", py::arg("max_terms") = 400, py::arg("tail_tol") = 1e-12);
    m.def("bigh_kernel_reciprocal",
          [](double x, double y, double a, double b, double q, int max_terms, double tail_tol) {
              return kernel_to_dict(
                  bigh_kernel_reciprocal(x, y, a, b, QParam(q), make_trunc(max_terms, tail_tol)));
          },
          py::arg("x"), py::arg("y"), py::arg("a"), py::arg("b"), py::arg("q"),
          py::arg("max_terms") = 400, py::arg("tail_tol") = 1e-12);
    m.def("asc_kernel",
          [](double x, double y, double z, double rho1, double rho2, double q,
             const std::string& method, int max_terms, double tail_tol) {
              return kernel_to_dict(asc_kernel(x, y, z, rho1, rho2, QParam(q),
                                               make_trunc(max_terms, tail_tol), parse_method(method)));
          },
          py::arg("x"), py::arg("y"), py::arg("z"), py::arg("rho1"), py::arg("rho2"), py::arg("q"),
          py::arg("method") = "closed", py::arg("max_terms") = 400, py::arg("tail_tol") = 1e-12);
    m.def("asc_kernel_general",
          [](double x, double y, double z, double rho1, double rho2, double q,
             const std::string& method, int max_terms, double tail_tol) {
              return kernel_to_dict(asc_kernel_general(
                  x, y, z, rho1, rho2, QParam(q), make_trunc(max_terms, tail_tol), parse_method(method)));
          },
          py::arg("x"), py::arg("y"), py::arg("z"), py::arg("rho1"), py::arg("rho2"), py::arg("q"),
          py::arg("method") = "closed", py::arg("max_terms") = 400, py::arg("tail_tol") = 1e-12);
    m.def("inversion_identity",
          [](double x, double y, double z, double rho1, double rho2, double q, int max_terms,
             double tail_tol) {
              return inversion_identity(x, y, z, rho1, rho2, QParam(q), make_trunc(max_terms, tail_tol));
          },
          py::arg("x"), py::arg("y"), py::arg("z"), py::arg("rho1"), py::arg("rho2"), py::arg("q"),
          py::arg("max_terms") = 400, py::arg("tail_tol") = 1e-12);
    m.def("phi_reciprocal_series", [](double x, double a, double q) {
        return phi_reciprocal_series(x, a, QParam(q));
    });
    m.def("phi_series", [](double x, double t, double q) { return phi_series(x, t, QParam(q)); });
    m.def("build_lancaster_density", [](double x, double y, double rho, double q) {
        return build_lancaster_density(x, y, rho, QParam(q));
    });
    m.def("corollary_special",
          [](const std::string& which, double x, double y, double z, double a, double b, double rho1,
             double rho2) {
              CorollaryCase c;
              if (which == "q1-bigh") c = CorollaryCase::Q1BigH;
              else if (which == "q0-bigh") c = CorollaryCase::Q0BigH;
              else if (which == "q1-asc") c = CorollaryCase::Q1Asc;
              else if (which == "q0-asc") c = CorollaryCase::Q0Asc;
              else throw std::invalid_argument("which must be q1-bigh, q0-bigh, q1-asc or q0-asc");
              return kernel_to_dict(corollary_special(
                  c, {.x = x, .y = y, .z = z, .a = a, .b = b, .rho1 = rho1, .rho2 = rho2}));
          },
          py::arg("which"), py::arg("x") = 0.0, py::arg("y") = 0.0, py::arg("z") = 0.0,
          py::arg("a") = 0.0, py::arg("b") = 0.0, py::arg("rho1") = 0.0, py::arg("rho2") = 0.0);

    // verification
    m.def("gauss_rule", [](int order, double q) {
        const QuadratureRule r = gauss_rule(order, support(QParam(q)), q == 1.0);
        return py::make_tuple(r.nodes, r.weights);
    });
    m.def("density_rule", [](int order, double q) {
        const QuadratureRule r = density_rule(order, QParam(q));
        return py::make_tuple(r.nodes, r.weights);
    });
    m.def("check_orthogonality",
          [](const std::string& family, int n, int m_, int order, double q, double a, double y,
             double rho) {
              PolySpec spec{Family::QHermiteH, QParam(q)};
              if (family == "qhermite") spec.family = Family::QHermiteH;
              else if (family == "big-qhermite") spec.family = Family::BigQHermiteH;
              else if (family == "asc") spec.family = Family::AscP;
              else throw std::invalid_argument("family must be qhermite, big-qhermite or asc");
              spec.a = a;
              spec.y = y;
              spec.rho = rho;
              return check_orthogonality(spec, n, m_, order);
          },
          py::arg("family"), py::arg("n"), py::arg("m"), py::arg("order"), py::arg("q"),
          py::arg("a") = 0.0, py::arg("y") = 0.0, py::arg("rho") = 0.0);
    m.def("identity_catalog", &identity_catalog);
    m.def("run_identity_suite",
          [](const std::string& id, double tolerance) {
              return report_to_dict(run_identity_suite(id, GridSpec{}, tolerance));
          },
          py::arg("id"), py::arg("tolerance") = 0.0);
}
