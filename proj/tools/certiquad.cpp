// Command-line front end: evaluates the pointwise bounds, the composite rule
// with certified remainders, the corpus verification suite, the sharpness
// witness, and the distribution-function bounds. Reports are deterministic
// JSON on stdout (17-significant-digit reals, sorted keys); diagnostics go
// to stderr. Exit codes: 0 success, 1 inequality violation, 2 usage or parse
// error, 3 input domain error, 4 internal soundness failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "certiquad/bounds.hpp"
#include "certiquad/corpus.hpp"
#include "certiquad/expr.hpp"
#include "certiquad/integrand.hpp"
#include "certiquad/integrate.hpp"
#include "certiquad/kernel.hpp"
#include "certiquad/probability.hpp"
#include "certiquad/quadrature.hpp"
#include "certiquad/report.hpp"
#include "certiquad/sharpness.hpp"
#include "certiquad/stats.hpp"
#include "certiquad/verify.hpp"

namespace {

using namespace certiquad;

constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitInternal = 4;

Json opt_real(std::optional<double> v) {
    return v ? Json::real(*v) : Json::null();
}

std::vector<double> parse_real_list(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        const std::string item =
            csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (item.empty()) throw std::invalid_argument("empty entry in list: " + csv);
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument("malformed number: " + item);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

struct BoundsArgs {
    std::string f;
    double a = 0, b = 0, x = 0, p = 2.0;
};

int run_bounds(const BoundsArgs& args) {
    const ExprPtr expr = parse(args.f);
    const Integrand g = make_expr_integrand(expr);
    const IntervalCtx ctx = make_ctx(args.a, args.b, args.x);
    const double mean = integrate(g, ctx.a, ctx.b).value / ctx.width();
    const DerivativeStats st = estimate_stats(g, ctx.a, ctx.b);
    const BoundReport rep = best_bound(g, ctx, st, mean, args.p);

    Json entries = Json::array();
    for (const BoundEntry& e : rep.entries) {
        Json item = Json::object();
        item.set("id", Json::string(std::string(bound_name(e.id))))
            .set("rhs", e.applicable ? Json::real(e.rhs) : Json::null())
            .set("applicable", Json::boolean(e.applicable));
        entries.push(std::move(item));
    }
    Json stats = Json::object();
    stats.set("S", Json::real(st.S))
        .set("gamma", Json::real(st.gamma))
        .set("Gamma", Json::real(st.Gamma))
        .set("gamma_refined", Json::boolean(st.gamma_refined))
        .set("Gamma_refined", Json::boolean(st.Gamma_refined))
        .set("l1_fprime", Json::real(st.l1_fprime))
        .set("l2_fprime", Json::real(st.l2_fprime))
        .set("l2_fsecond", Json::real(st.l2_fsecond))
        .set("sigma_fprime", Json::real(sigma_fprime(st)));
    Json results = Json::object();
    results.set("lhs", Json::real(rep.lhs))
        .set("mean", Json::real(mean))
        .set("tightest", Json::string(std::string(bound_name(rep.tightest))))
        .set("bounds", std::move(entries))
        .set("stats", std::move(stats));
    Json inputs = Json::object();
    inputs.set("f", Json::string(args.f))
        .set("a", Json::real(args.a))
        .set("b", Json::real(args.b))
        .set("x", Json::real(args.x))
        .set("p", Json::real(args.p));
    std::cout << make_report("bounds", std::move(inputs), std::move(results), {}).dump() << "\n";
    return 0;
}

struct IntegrateArgs {
    std::string f;
    double a = 0, b = 0;
    std::optional<int> n;
    std::optional<double> target;
    std::optional<std::string> nonuniform;
    bool reference = false;
    bool percell = false;
};

// Experimental per-cell slope bound with locally sampled derivative ranges;
// tighter than the global form but not covered by a proved statement.
double percell_slope_bound(const Integrand& f, const Partition& P) {
    double sum = 0.0;
    for (std::size_t i = 0; i < P.cells(); ++i) {
        const double lo = P.points[i], hi = P.points[i + 1];
        const double h = hi - lo;
        const double slope = (f.f(hi) - f.f(lo)) / h;
        double gi = f.df(lo), Gi = gi;
        for (int k = 1; k <= 32; ++k) {
            const double d = f.df(lo + h * k / 32.0);
            gi = std::min(gi, d);
            Gi = std::max(Gi, d);
        }
        sum += std::min(std::max(slope - gi, 0.0), std::max(Gi - slope, 0.0)) * h * h;
    }
    return 0.25 * sum;
}

int run_integrate(const IntegrateArgs& args) {
    const ExprPtr expr = parse(args.f);
    const Integrand g = make_expr_integrand(expr);
    if (!(args.a < args.b)) throw std::invalid_argument("requires a < b");
    const int modes = static_cast<int>(args.n.has_value()) +
                      static_cast<int>(args.target.has_value()) +
                      static_cast<int>(args.nonuniform.has_value());
    if (modes != 1)
        throw std::invalid_argument("exactly one of --n, --target, --nonuniform is required");

    QuadratureResult result;
    std::optional<Partition> partition;
    std::vector<std::string> warnings;

    if (args.target) {
        AdaptiveResult ar = adaptive_partition(g, args.a, args.b, *args.target);
        result = ar.result;
        partition = std::move(ar.partition);
    } else {
        if (args.n) {
            if (*args.n < 1) throw std::invalid_argument("--n must be >= 1");
            partition = uniform_partition(args.a, args.b, *args.n);
        } else {
            std::vector<double> pts = parse_real_list(*args.nonuniform);
            pts.insert(pts.begin(), args.a);
            pts.push_back(args.b);
            partition = partition_from_points(std::move(pts));
        }
        result.estimate = composite_rule(g, *partition);
        const DerivativeStats st = widened(estimate_stats(g, args.a, args.b));
        const Th31Remainders t31 = remainder_th31(g, *partition, st.gamma, st.Gamma);
        result.bound_31_gamma = t31.rhs_gamma;
        result.bound_31_Gamma = t31.rhs_Gamma;
        if (args.n) {
            result.bound_32 = remainder_th32(args.a, args.b, *args.n, st.l2_fsecond);
            result.bound_33 = remainder_th33(args.a, args.b, *args.n, sigma_fprime(st));
        }
    }

    std::optional<double> reference;
    if (args.reference) {
        reference = integrate(g, args.a, args.b, 1e-12).value;
        result.true_error = std::abs(*reference - result.estimate);
    }

    std::optional<double> percell;
    if (args.percell) {
        if (args.target) throw std::invalid_argument("--percell applies to fixed partitions");
        percell = percell_slope_bound(g, *partition);
        warnings.push_back("percell bound uses locally sampled derivative ranges; uncertified");
    }

    Json results = Json::object();
    results.set("estimate", Json::real(result.estimate))
        .set("cells", Json::integer(static_cast<long long>(partition->cells())))
        .set("bound31_gamma", opt_real(result.bound_31_gamma))
        .set("bound31_Gamma", opt_real(result.bound_31_Gamma))
        .set("bound32", opt_real(result.bound_32))
        .set("bound33", opt_real(result.bound_33))
        .set("certified_bound", opt_real(result.certified_bound))
        .set("percell_bound_uncertified", opt_real(percell))
        .set("true_error", opt_real(result.true_error))
        .set("reference", opt_real(reference));
    Json inputs = Json::object();
    inputs.set("f", Json::string(args.f))
        .set("a", Json::real(args.a))
        .set("b", Json::real(args.b))
        .set("n", args.n ? Json::integer(*args.n) : Json::null())
        .set("target", opt_real(args.target))
        .set("nonuniform", args.nonuniform ? Json::string(*args.nonuniform) : Json::null())
        .set("reference", Json::boolean(args.reference));
    std::cout << make_report("integrate", std::move(inputs), std::move(results), warnings).dump()
              << "\n";

    // A certified bound beaten by the true error is an internal soundness
    // failure, never a user error.
    if (result.true_error) {
        const double tol = 1e-9 * (1.0 + std::abs(result.estimate));
        for (const std::optional<double>& bound :
             {result.bound_31_gamma, result.bound_31_Gamma, result.bound_32, result.bound_33,
              result.certified_bound}) {
            if (bound && *result.true_error > *bound + tol) {
                std::cerr << "internal soundness failure: true error " << *result.true_error
                          << " exceeds certified bound " << *bound << "\n";
                return kExitInternal;
            }
        }
    }
    return 0;
}

struct ConvergenceArgs {
    std::string f;
    double a = 0, b = 0;
    std::string n_list;
    bool csv = false;
};

int run_convergence(const ConvergenceArgs& args) {
    const ExprPtr expr = parse(args.f);
    const Integrand g = make_expr_integrand(expr);
    std::vector<int> ns;
    for (double v : parse_real_list(args.n_list)) {
        if (v < 1 || v != static_cast<int>(v))
            throw std::invalid_argument("--n-list entries must be positive integers");
        ns.push_back(static_cast<int>(v));
    }
    const ConvergenceTable table = convergence_study(g, args.a, args.b, ns);
    if (args.csv) {
        std::cout << convergence_csv(table);
        return 0;
    }
    Json rows = Json::array();
    for (const ConvergenceRow& r : table.rows) {
        Json row = Json::object();
        row.set("n", Json::integer(r.n))
            .set("estimate", Json::real(r.estimate))
            .set("true_error", Json::real(r.true_error))
            .set("bound31g", Json::real(r.bound31g))
            .set("bound31G", Json::real(r.bound31G))
            .set("bound32", Json::real(r.bound32))
            .set("bound33", Json::real(r.bound33))
            .set("order", Json::string(r.order));
        rows.push(std::move(row));
    }
    Json results = Json::object();
    results.set("reference", Json::real(table.reference)).set("rows", std::move(rows));
    Json inputs = Json::object();
    inputs.set("f", Json::string(args.f))
        .set("a", Json::real(args.a))
        .set("b", Json::real(args.b))
        .set("n_list", Json::string(args.n_list));
    std::cout << make_report("convergence", std::move(inputs), std::move(results), {}).dump()
              << "\n";
    return 0;
}

struct VerifyArgs {
    std::uint64_t seed = 42;
    int trials = 1000;
    int parallel = 1;
};

int run_verify_cmd(const VerifyArgs& args) {
    const VerifyResult res = run_verify({args.seed, args.trials, args.parallel});
    Json details = Json::array();
    for (const Violation& v : res.violations) {
        Json item = Json::object();
        item.set("trial", Json::integer(v.trial))
            .set("check", Json::string(v.check))
            .set("detail", Json::string(v.detail));
        details.push(std::move(item));
    }
    Json results = Json::object();
    results.set("checks_run", Json::integer(res.checks_run))
        .set("violations", Json::integer(static_cast<long long>(res.violations.size())))
        .set("details", std::move(details));
    Json inputs = Json::object();
    inputs.set("seed", Json::integer(static_cast<long long>(args.seed)))
        .set("trials", Json::integer(args.trials))
        .set("parallel", Json::integer(args.parallel));
    std::cout << make_report("verify", std::move(inputs), std::move(results), {}).dump() << "\n";
    return res.violations.empty() ? 0 : kExitViolation;
}

struct SharpnessArgs {
    std::string eps;
    double x = 0.25;
    bool csv = false;
};

int run_sharpness(const SharpnessArgs& args) {
    if (!(args.x >= 0.25 && args.x <= 0.5))
        throw std::invalid_argument("--x must lie in [0.25, 0.5]");
    const std::vector<double> eps_list = parse_real_list(args.eps);
    std::vector<SharpnessRow> rows;
    for (double eps : eps_list) rows.push_back(sharpness_case(eps, args.x));

    if (args.csv) {
        std::string out = "eps,lhs,rhs,ratio\n";
        char buf[128];
        for (const SharpnessRow& r : rows) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", r.epsilon, r.lhs, r.rhs,
                          r.ratio);
            out += buf;
        }
        std::cout << out;
        return 0;
    }
    Json jrows = Json::array();
    for (const SharpnessRow& r : rows) {
        Json row = Json::object();
        row.set("eps", Json::real(r.epsilon))
            .set("lhs", Json::real(r.lhs))
            .set("rhs", Json::real(r.rhs))
            .set("ratio", Json::real(r.ratio));
        jrows.push(std::move(row));
    }
    Json results = Json::object();
    results.set("x", Json::real(args.x)).set("rows", std::move(jrows));
    Json inputs = Json::object();
    inputs.set("eps", Json::string(args.eps)).set("x", Json::real(args.x));
    std::cout << make_report("sharpness", std::move(inputs), std::move(results), {}).dump()
              << "\n";
    return 0;
}

struct ProbArgs {
    std::string pdf;
    double a = 0, b = 0, x = 0;
    std::optional<double> gamma;
    std::optional<double> Gamma;
};

int run_prob(const ProbArgs& args) {
    const ExprPtr expr = parse(args.pdf);
    const Integrand g = make_expr_integrand(expr);
    const IntervalCtx ctx = make_ctx(args.a, args.b, args.x);
    const DensityCtx d = DensityCtx::make(g, args.a, args.b);

    std::vector<std::string> warnings;
    if (d.normalization_applied()) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "density normalized: raw mass was %.17g", d.raw_mass());
        warnings.push_back(buf);
    }

    double gamma, Gamma;
    if (args.gamma && args.Gamma) {
        gamma = *args.gamma;
        Gamma = *args.Gamma;
    } else if (!args.gamma && !args.Gamma) {
        const auto hi = detail::sampled_max(d.pdf().f, args.a, args.b, 4097, 3);
        const auto lo =
            detail::sampled_max([&d](double t) { return -d.pdf().f(t); }, args.a, args.b, 4097, 3);
        Gamma = hi.value;
        gamma = -lo.value;
    } else {
        throw std::invalid_argument("--gamma and --Gamma must be given together");
    }

    const double l2_pdf =
        std::sqrt(integrate([&d](double t) { const double v = d.pdf().f(t); return v * v; },
                            args.a, args.b, 1e-11)
                      .value);
    const double l2_deriv =
        std::sqrt(integrate([&d](double t) { const double v = d.pdf().df(t); return v * v; },
                            args.a, args.b, 1e-11)
                      .value);

    const double lhs = prob_lhs(d, ctx);
    const Th21Bounds t41 = prob_bound_th41(ctx, gamma, Gamma);

    Json results = Json::object();
    results.set("lhs", Json::real(lhs))
        .set("expectation", Json::real(d.expectation()))
        .set("mass", Json::real(d.raw_mass()))
        .set("normalized", Json::boolean(d.normalization_applied()))
        .set("gamma", Json::real(gamma))
        .set("Gamma", Json::real(Gamma))
        .set("th41_gamma", Json::real(t41.rhs_gamma))
        .set("th41_Gamma", Json::real(t41.rhs_Gamma))
        .set("th42", Json::real(prob_bound_th42(ctx, l2_deriv)))
        .set("th43", Json::real(prob_bound_th43(ctx, l2_pdf)))
        .set("l2_pdf", Json::real(l2_pdf))
        .set("l2_pdf_deriv", Json::real(l2_deriv));
    Json inputs = Json::object();
    inputs.set("pdf", Json::string(args.pdf))
        .set("a", Json::real(args.a))
        .set("b", Json::real(args.b))
        .set("x", Json::real(args.x))
        .set("gamma", opt_real(args.gamma))
        .set("Gamma", opt_real(args.Gamma));
    std::cout << make_report("prob", std::move(inputs), std::move(results), warnings).dump()
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified two-point quadrature bounds"};
    app.require_subcommand(1);

    BoundsArgs bounds_args;
    CLI::App* bounds_cmd = app.add_subcommand("bounds", "evaluate every pointwise bound at x");
    bounds_cmd->add_option("--f", bounds_args.f, "expression in t")->required();
    bounds_cmd->add_option("--a", bounds_args.a)->required();
    bounds_cmd->add_option("--b", bounds_args.b)->required();
    bounds_cmd->add_option("--x", bounds_args.x)->required();
    bounds_cmd->add_option("--p", bounds_args.p, "exponent for the L^p baseline");

    IntegrateArgs int_args;
    std::string nonuniform;
    CLI::App* int_cmd = app.add_subcommand("integrate", "composite rule with remainder bounds");
    int_cmd->add_option("--f", int_args.f)->required();
    int_cmd->add_option("--a", int_args.a)->required();
    int_cmd->add_option("--b", int_args.b)->required();
    int n_cells = 0;
    double target = 0.0;
    CLI::Option* n_opt = int_cmd->add_option("--n", n_cells, "uniform cell count");
    CLI::Option* target_opt =
        int_cmd->add_option("--target", target, "certified error target (adaptive)");
    CLI::Option* nonuni_opt =
        int_cmd->add_option("--nonuniform", nonuniform, "interior breakpoints x1,x2,...");
    int_cmd->add_flag("--reference", int_args.reference, "include oracle true error");
    int_cmd->add_flag("--percell", int_args.percell, "experimental per-cell slope bound");

    ConvergenceArgs conv_args;
    CLI::App* conv_cmd = app.add_subcommand("convergence", "uniform-rule convergence study");
    conv_cmd->add_option("--f", conv_args.f)->required();
    conv_cmd->add_option("--a", conv_args.a)->required();
    conv_cmd->add_option("--b", conv_args.b)->required();
    conv_cmd->add_option("--n-list", conv_args.n_list, "ascending cell counts n1,n2,...")
        ->required();
    conv_cmd->add_flag("--csv", conv_args.csv, "emit CSV instead of JSON");

    VerifyArgs verify_args;
    CLI::App* verify_cmd = app.add_subcommand("verify", "corpus soundness suite");
    verify_cmd->add_option("--seed", verify_args.seed);
    verify_cmd->add_option("--trials", verify_args.trials);
    verify_cmd->add_option("--parallel", verify_args.parallel);

    SharpnessArgs sharp_args;
    CLI::App* sharp_cmd = app.add_subcommand("sharpness", "extremal witness ratio table");
    sharp_cmd->add_option("--eps", sharp_args.eps, "epsilon values e1,e2,...")->required();
    sharp_cmd->add_option("--x", sharp_args.x, "witness point in [0.25, 0.5]")->required();
    sharp_cmd->add_flag("--csv", sharp_args.csv, "emit CSV instead of JSON");

    ProbArgs prob_args;
    double prob_gamma = 0.0, prob_Gamma = 0.0;
    CLI::App* prob_cmd = app.add_subcommand("prob", "distribution-function bounds");
    prob_cmd->add_option("--pdf", prob_args.pdf, "density expression in t")->required();
    prob_cmd->add_option("--a", prob_args.a)->required();
    prob_cmd->add_option("--b", prob_args.b)->required();
    prob_cmd->add_option("--x", prob_args.x)->required();
    CLI::Option* gamma_opt = prob_cmd->add_option("--gamma", prob_gamma, "lower density bound");
    CLI::Option* Gamma_opt = prob_cmd->add_option("--Gamma", prob_Gamma, "upper density bound");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (bounds_cmd->parsed()) return run_bounds(bounds_args);
        if (int_cmd->parsed()) {
            if (n_opt->count()) int_args.n = n_cells;
            if (target_opt->count()) int_args.target = target;
            if (nonuni_opt->count()) int_args.nonuniform = nonuniform;
            return run_integrate(int_args);
        }
        if (conv_cmd->parsed()) return run_convergence(conv_args);
        if (verify_cmd->parsed()) return run_verify_cmd(verify_args);
        if (sharp_cmd->parsed()) return run_sharpness(sharp_args);
        if (prob_cmd->parsed()) {
            if (gamma_opt->count()) prob_args.gamma = prob_gamma;
            if (Gamma_opt->count()) prob_args.Gamma = prob_Gamma;
            return run_prob(prob_args);
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const EvalError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const IntegrationError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
