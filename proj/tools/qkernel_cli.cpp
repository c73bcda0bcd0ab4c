// qkernel command line: evaluate polynomial families, tabulate densities,
// sum kernels, expand connection coefficients, and run identity verification
// sweeps. Exit codes: 0 success, 1 numerical failure or failed identity,
// 2 flag/parameter validation failure.

#include "qkernel/connect.hpp"
#include "qkernel/families.hpp"
#include "qkernel/kernels.hpp"
#include "qkernel/measures.hpp"
#include "qkernel/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using json = nlohmann::ordered_json;
namespace qk = qkernel;

namespace {

int truncation_cap_default() {
    if (const char* env = std::getenv("QKERNEL_MAX_TERMS")) {
        try {
            const int v = std::stoi(env);
            if (v >= 1) return v;
        } catch (const std::exception&) {
            // fall through to the library default
        }
    }
    return qk::Truncation{}.max_terms;
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw std::invalid_argument("cannot open output file: " + out_path);
    f << text;
}

struct EvalOpts {
    std::string family;
    int n = 0;
    double x = 0, q = 0, a = 0, b = 0, y = 0, rho = 0, s = 0, p = 0;
    std::string format = "text";
};

int run_eval(const EvalOpts& o) {
    double value = 0.0;
    std::string path = "forward-recurrence";
    const qk::QParam q(o.q);
    if (o.family == "qhermite") {
        value = qk::q_hermite(o.n, o.x, q);
    } else if (o.family == "continuous-qhermite") {
        value = qk::continuous_q_hermite(o.n, o.x, q);
    } else if (o.family == "big-qhermite") {
        value = qk::big_q_hermite(o.n, o.x, o.a, q);
    } else if (o.family == "asc") {
        value = qk::asc(o.n, o.x, o.y, o.rho, q);
        if (std::abs(o.rho) >= 1.0) path = "connection-extension";
    } else if (o.family == "asc-standard") {
        value = qk::asc_standard(o.n, o.x, o.s, o.p, q);
    } else if (o.family == "aux-b") {
        value = qk::aux_b(o.n, o.x, q);
    } else if (o.family == "aux-b-shifted") {
        value = qk::aux_b_shifted(o.n, o.x, o.b, q);
    } else if (o.family == "chebyshev-u") {
        value = qk::chebyshev_u(o.n, o.x);
    } else if (o.family == "hermite-prob") {
        value = qk::hermite_prob(o.n, o.x);
    } else {
        throw std::invalid_argument("unknown family: " + o.family);
    }
    if (o.format == "json") {
        json j{{"family", o.family}, {"n", o.n}, {"x", o.x}, {"value", value}, {"path", path}};
        std::cout << j.dump() << "\n";
    } else {
        std::cout.precision(17);
        std::cout << value << "\n";
        std::cout << "# path: " << path << "\n";
    }
    return 0;
}

struct KernelOpts {
    std::string id, method = "both", format = "text", out;
    double x = 0, y = 0, z = 0, q = 0, a = 0, b = 0, rho = 0, rho1 = 0, rho2 = 0;
    int max_terms = 400;
    double tail_tol = 1e-12;
};

int run_kernel(const KernelOpts& o) {
    qk::Truncation trunc{o.max_terms, o.tail_tol, 0.0};
    qk::Method method = qk::Method::Both;
    if (o.method == "series") method = qk::Method::Series;
    else if (o.method == "closed") method = qk::Method::Closed;

    const qk::QParam q(o.q);
    std::optional<qk::KernelResult> kr;
    std::optional<double> scalar;
    if (o.id == "poisson-mehler") {
        kr = qk::poisson_mehler(o.x, o.y, o.rho, q, trunc, method);
    } else if (o.id == "bigh") {
        kr = qk::bigh_kernel(o.x, o.y, o.a, o.b, q, trunc, method);
    } else if (o.id == "bigh-recip") {
        kr = qk::bigh_kernel_reciprocal(o.x, o.y, o.a, o.b, q, trunc);
    } else if (o.id == "asc") {
        kr = qk::asc_kernel(o.x, o.y, o.z, o.rho1, o.rho2, q, trunc, method);
    } else if (o.id == "asc-general") {
        kr = qk::asc_kernel_general(o.x, o.y, o.z, o.rho1, o.rho2, q, trunc, method);
    } else if (o.id == "inversion") {
        scalar = qk::inversion_identity(o.x, o.y, o.z, o.rho1, o.rho2, q, trunc);
    } else if (o.id == "lancaster") {
        scalar = qk::build_lancaster_density(o.x, o.y, o.rho, q, trunc);
    } else if (o.id == "corollary-q1-bigh" || o.id == "corollary-q0-bigh" ||
               o.id == "corollary-q1-asc" || o.id == "corollary-q0-asc") {
        qk::CorollaryCase which = qk::CorollaryCase::Q1BigH;
        if (o.id == "corollary-q0-bigh") which = qk::CorollaryCase::Q0BigH;
        if (o.id == "corollary-q1-asc") which = qk::CorollaryCase::Q1Asc;
        if (o.id == "corollary-q0-asc") which = qk::CorollaryCase::Q0Asc;
        kr = qk::corollary_special(
            which, {.x = o.x, .y = o.y, .z = o.z, .a = o.a, .b = o.b, .rho1 = o.rho1, .rho2 = o.rho2},
            trunc);
    } else {
        throw std::invalid_argument("unknown kernel id: " + o.id);
    }

    json j;
    if (scalar) {
        j = json{{"id", o.id}, {"value", *scalar}};
    } else {
        j["id"] = o.id;
        j["value"] = kr->value;
        j["method"] = kr->method == qk::Method::Both     ? "both"
                      : kr->method == qk::Method::Series ? "series"
                                                         : "closed";
        if (kr->series_value) j["series"] = *kr->series_value;
        if (kr->closed_value) j["closed"] = *kr->closed_value;
        j["terms_used"] = kr->terms_used;
        j["residual_estimate"] = kr->residual_estimate;
        if (kr->discrepancy) j["discrepancy"] = *kr->discrepancy;
    }
    if (o.format == "json") {
        write_output(j.dump(2), o.out);
    } else {
        std::ostringstream os;
        os.precision(17);
        for (auto& [key, val] : j.items()) {
            os << key << " = ";
            if (val.is_string()) os << val.get<std::string>();
            else os << val.dump();
            os << "\n";
        }
        write_output(os.str(), o.out);
    }
    return 0;
}

struct DensityOpts {
    std::string which = "fn", format = "csv", out;
    double q = 0, a = 0, y = 0, rho = 0;
    int points = 201;
};

int run_density(const DensityOpts& o) {
    const qk::QParam q(o.q);
    const qk::Support sup = qk::support(q);
    const double lo = sup.bounded ? sup.lower() : -12.0;
    const double hi = sup.bounded ? sup.upper : 12.0;
    qk::Truncation trunc;
    std::ostringstream os;
    os.precision(17);
    json rows = json::array();
    if (o.format == "csv") os << "x,value,in_support\n";
    for (int i = 0; i < o.points; ++i) {
        const double x = lo + (hi - lo) * i / (o.points - 1);
        qk::DensityPoint p;
        if (o.which == "fn") p = qk::f_n(x, q, trunc);
        else if (o.which == "fbn") p = qk::f_bn(x, o.a, q, trunc);
        else p = qk::f_cn(x, o.y, o.rho, q, trunc);
        if (o.format == "csv")
            os << p.x << "," << p.value << "," << (p.in_support ? 1 : 0) << "\n";
        else
            rows.push_back({{"x", p.x}, {"value", p.value}, {"in_support", p.in_support}});
    }
    if (o.format == "csv") {
        os << "# density=" << o.which << " q=" << o.q << "\n";
        write_output(os.str(), o.out);
    } else {
        write_output(json{{"density", o.which}, {"q", o.q}, {"rows", rows}}.dump(2), o.out);
    }
    return 0;
}

struct ExpandOpts {
    std::string formula, lemma, format = "text";
    int n = 0;
    double q = 0, a = 0, b = 0, y = 0, z = 0, rho = 0, rho1 = 0, rho2 = 0;
};

int run_expand(const ExpandOpts& o) {
    std::string lowered = o.formula;
    for (char& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const qk::QParam q(o.q);
    qk::ExpansionResult res{{}, qk::PolySpec{qk::Family::QHermiteH, q}, 0};
    std::string target_label;
    if (!o.lemma.empty()) {
        if (o.lemma == "i") {
            res = qk::connect_bigh_via_asc(o.n, o.y, o.a, o.b, q);
            target_label = "P_j(x|y,a/b,q)";
        } else if (o.lemma == "ii") {
            res = qk::connect_asc_via_bigh(o.n, o.y, o.rho, o.a, q);
            target_label = "H_i(x|a,q)";
        } else if (o.lemma == "iii") {
            res = qk::connect_asc_product(o.n, o.y, o.z, o.rho1, o.rho2, q);
            target_label = "P_i(x|z,rho1,q)";
        } else {
            throw std::invalid_argument("--lemma must be i, ii or iii");
        }
    } else if (lowered == "bigh") {
        res = qk::expand_bigh_in_qhermite(o.n, o.a, q);
        target_label = "H_i(x|q)";
    } else if (lowered == "bigh2") {
        res = qk::expand_qhermite_in_bigh(o.n, o.a, q);
        target_label = "H_i(x|a,q)";
    } else if (lowered == "asc-hb") {
        res = qk::expand_asc_in_qhermite(o.n, o.y, o.rho, q);
        target_label = "H_i(x|q)";
    } else if (lowered == "hnap") {
        res = qk::expand_qhermite_in_asc(o.n, o.y, o.rho, q);
        target_label = "P_i(x|y,rho,q)";
    } else {
        throw std::invalid_argument("--formula must be bigh, bigh2, asc-hb or hnap (or use --lemma)");
    }
    if (o.format == "json") {
        json j{{"source_index", res.source_index},
               {"target", target_label},
               {"coefficients", res.coefficients}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout.precision(17);
        std::cout << "degree coefficient (of " << target_label << ")\n";
        for (size_t i = 0; i < res.coefficients.size(); ++i)
            std::cout << i << " " << res.coefficients[i] << "\n";
    }
    return 0;
}

struct VerifyOpts {
    std::string identity = "all", format = "json", out;
    double tol = 0.0;
    std::vector<double> qs, rhos;
    int max_terms = 2000;
    double tail_tol = 1e-11;
    bool rows = false;
};

int run_verify(const VerifyOpts& o) {
    qk::GridSpec grid;
    if (!o.qs.empty()) grid.qs = o.qs;
    if (!o.rhos.empty()) grid.rhos = o.rhos;
    const qk::Truncation trunc{o.max_terms, o.tail_tol, 0.0};

    std::vector<std::string> ids;
    if (o.identity == "all") ids = qk::identity_catalog();
    else ids.push_back(qk::canonical_identity_id(o.identity)); // throws for unknown ids

    if (o.format == "csv" && ids.size() > 1)
        throw std::invalid_argument("csv output supports a single identity; use --format json for all");

    bool all_passed = true;
    std::string payload;
    json arr = json::array();
    for (const auto& id : ids) {
        const qk::IdentityReport rep =
            qk::run_identity_suite(id, grid, o.tol, trunc, o.rows || o.format == "csv");
        all_passed = all_passed && rep.passed;
        std::cerr << (rep.passed ? "PASS " : "FAIL ") << rep.identity_id
                  << " max_residual=" << rep.max_residual << " grid=" << rep.grid_size
                  << " violations=" << rep.positivity_violations << "\n";
        if (o.format == "csv") payload = qk::report_to_csv(rep);
        else arr.push_back(json::parse(qk::report_to_json(rep, o.rows)));
    }
    if (o.format != "csv") payload = (ids.size() == 1 ? arr[0].dump(2) : arr.dump(2));
    write_output(payload, o.out);
    return all_passed ? 0 : 1;
}

int run_list() {
    std::cout << "identities (verify --identity <id>):\n";
    for (const auto& id : qk::identity_catalog())
        std::cout << "  " << id << ": " << qk::identity_description(id) << "\n";
    std::cout << "\nfamilies (eval --family <name>): qhermite, continuous-qhermite, big-qhermite,\n"
                 "  asc, asc-standard, aux-b, aux-b-shifted, chebyshev-u, hermite-prob\n";
    std::cout << "\nkernels (kernel --id <id>): poisson-mehler, bigh, bigh-recip, asc, asc-general,\n"
                 "  inversion, lancaster, corollary-q1-bigh, corollary-q0-bigh, corollary-q1-asc,\n"
                 "  corollary-q0-asc\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"q-Hermite / Al-Salam-Chihara kernel toolkit"};
    app.require_subcommand(1);

    EvalOpts eo;
    CLI::App* eval = app.add_subcommand("eval", "evaluate one polynomial family member");
    eval->add_option("--family", eo.family)->required();
    eval->add_option("--n", eo.n)->required();
    eval->add_option("--x", eo.x)->required();
    eval->add_option("--q", eo.q);
    eval->add_option("--a", eo.a);
    eval->add_option("--b", eo.b);
    eval->add_option("--y", eo.y);
    eval->add_option("--rho", eo.rho);
    eval->add_option("--s", eo.s);
    eval->add_option("--p", eo.p);
    eval->add_option("--format", eo.format)->check(CLI::IsMember({"text", "json"}));

    KernelOpts ko;
    ko.max_terms = truncation_cap_default();
    CLI::App* kernel = app.add_subcommand("kernel", "evaluate a kernel sum / closed form");
    kernel->add_option("--id", ko.id)->required();
    kernel->add_option("--x", ko.x)->required();
    kernel->add_option("--y", ko.y);
    kernel->add_option("--z", ko.z);
    kernel->add_option("--q", ko.q);
    kernel->add_option("--a", ko.a);
    kernel->add_option("--b", ko.b);
    kernel->add_option("--rho", ko.rho);
    kernel->add_option("--rho1", ko.rho1);
    kernel->add_option("--rho2", ko.rho2);
    kernel->add_option("--method", ko.method)->check(CLI::IsMember({"series", "closed", "both"}));
    kernel->add_option("--max-terms", ko.max_terms);
    kernel->add_option("--tail-tol", ko.tail_tol);
    kernel->add_option("--format", ko.format)->check(CLI::IsMember({"text", "json"}));
    kernel->add_option("--out", ko.out);

    DensityOpts dopt;
    CLI::App* density = app.add_subcommand("density", "tabulate an orthogonality density");
    density->add_option("--which", dopt.which)->check(CLI::IsMember({"fn", "fbn", "fcn"}));
    density->add_option("--q", dopt.q)->required();
    density->add_option("--a", dopt.a);
    density->add_option("--y", dopt.y);
    density->add_option("--rho", dopt.rho);
    density->add_option("--points", dopt.points)->check(CLI::Range(2, 1000000));
    density->add_option("--format", dopt.format)->check(CLI::IsMember({"csv", "json"}));
    density->add_option("--out", dopt.out);

    ExpandOpts xo;
    CLI::App* expand = app.add_subcommand("expand", "connection-coefficient expansions");
    expand->add_option("--formula", xo.formula);
    expand->add_option("--lemma", xo.lemma);
    expand->add_option("--n", xo.n)->required();
    expand->add_option("--q", xo.q);
    expand->add_option("--a", xo.a);
    expand->add_option("--b", xo.b);
    expand->add_option("--y", xo.y);
    expand->add_option("--z", xo.z);
    expand->add_option("--rho", xo.rho);
    expand->add_option("--rho1", xo.rho1);
    expand->add_option("--rho2", xo.rho2);
    expand->add_option("--format", xo.format)->check(CLI::IsMember({"text", "json"}));

    VerifyOpts vo;
    vo.max_terms = std::max(truncation_cap_default(), 2000);
    CLI::App* verify = app.add_subcommand("verify", "run identity verification sweeps");
    verify->add_option("--identity", vo.identity);
    verify->add_option("--tol", vo.tol);
    verify->add_option("--q", vo.qs)->description("override the q grid (repeatable)");
    verify->add_option("--rho", vo.rhos)->description("override the rho grid (repeatable)");
    verify->add_option("--max-terms", vo.max_terms);
    verify->add_option("--tail-tol", vo.tail_tol);
    verify->add_flag("--rows", vo.rows, "include per-grid-point rows in the report");
    verify->add_option("--format", vo.format)->check(CLI::IsMember({"json", "csv"}));
    verify->add_option("--out", vo.out);

    CLI::App* list = app.add_subcommand("list", "list identities, families and kernel ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*eval) return run_eval(eo);
        if (*kernel) return run_kernel(ko);
        if (*density) return run_density(dopt);
        if (*expand) return run_expand(xo);
        if (*verify) return run_verify(vo);
        if (*list) return run_list();
    } catch (const qk::PoleError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const qk::ConvergenceError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::overflow_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
