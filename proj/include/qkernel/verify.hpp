#pragma once

#include "qkernel/families.hpp"
#include "qkernel/kernels.hpp"
#include "qkernel/measures.hpp"

#include <string>
#include <utility>
#include <vector>

namespace qkernel {

struct QuadratureRule {
    std::vector<double> nodes;   // strictly increasing
    std::vector<double> weights; // positive
    int order = 0;
};

// Gauss-Legendre rule mapped affinely to a bounded support. For the unbounded
// q = 1 support, gaussian_mode integrates over [-12, 12] (twelve standard
// deviations of the Gaussian weight); an unbounded support without the flag
// errors.
QuadratureRule gauss_rule(int order, Support s, bool gaussian_mode = false);

// Rule for integrals against the weight sqrt(4 - (1-q) x^2) over S(q):
// integral g(x) sqrt(4-(1-q)x^2) dx == sum_i weights[i] g(nodes[i]), exact for
// polynomial g of degree <= 2*order - 1. This weight is exactly the endpoint
// factor of the orthogonality densities, so density integrals converge
// exponentially where a plain Legendre rule is limited by the sqrt endpoints.
QuadratureRule density_rule(int order, QParam q);

// integral p_n p_m density dx minus the expected norm (0 when the identity
// holds): QHermiteH against f_N with norm [n]_q!, BigQHermiteH against f_bN
// with norm [n]_q!, AscP against f_CN with norm (rho^2)_n [n]_q!. Other
// families have no density here and are rejected. The order is doubled once
// automatically if the n = m = 0 normalization misses 1e-8.
double check_orthogonality(const PolySpec& family, int n, int m, int order);

/// Grid specification for identity sweeps; fractions are scaled by the
/// support bound of each q.
struct GridSpec {
    std::vector<double> x_fracs = {-0.9, -0.45, 0.0, 0.45, 0.9};
    std::vector<double> xyz_fracs = {-0.9, 0.0, 0.9};
    std::vector<double> qs = {-0.5, 0.0, 0.3, 0.7, 0.9};
    std::vector<double> rhos = {0.2, 0.5, 0.8};
    std::vector<std::pair<double, double>> ab_pairs = {{0.2, 0.7}, {0.45, 0.5}, {-0.3, 0.8}};
    std::vector<std::pair<double, double>> rho_pairs = {{0.5, 0.35}, {0.3, 0.6}};
    int max_degree = 10;
    int quad_order = 128;
};

struct GridRow {
    std::vector<double> params;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
};

struct IdentityReport {
    std::string identity_id;
    int grid_size = 0;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    int positivity_violations = 0;
    double tolerance = 0.0;
    bool passed = false;
    std::vector<std::string> param_names;
    std::vector<double> worst_point;
    std::vector<GridRow> rows; // only populated when requested
};

/// Canonical identity ids, in the order `verify --identity all` runs them.
std::vector<std::string> identity_catalog();

/// One-line description of what an identity checks.
std::string identity_description(const std::string& id);

/// Resolves short aliases (mehler, thm-i, ...) to canonical ids; throws
/// std::invalid_argument for unknown ids.
std::string canonical_identity_id(const std::string& id_or_alias);

/// Default pass tolerance per identity.
double default_tolerance(const std::string& id);

// Sweeps the grid for one identity, evaluating both routes at every point and
// aggregating residuals in a fixed order (identical inputs give identical
// reports). tolerance <= 0 selects the identity's default. The default
// truncation is wider than the library default because the sweep grids reach
// rho = 0.9 at q = 0.9, where the kernel tail bounds need over 400 terms.
IdentityReport run_identity_suite(const std::string& id, const GridSpec& grid = {},
                                  double tolerance = 0.0, Truncation trunc = {2000, 1e-11, 0.0},
                                  bool keep_rows = false);

std::string report_to_json(const IdentityReport& report, bool include_rows = false);
std::string report_to_csv(const IdentityReport& report);

} // namespace qkernel
