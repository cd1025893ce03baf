#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "certiquad/bounds.hpp"
#include "certiquad/corpus.hpp"
#include "certiquad/integrate.hpp"
#include "certiquad/kernel.hpp"
#include "certiquad/probability.hpp"
#include "certiquad/quadrature.hpp"
#include "certiquad/stats.hpp"

namespace certiquad {

struct VerifyOptions {
    std::uint64_t seed = 42;
    int trials = 1000;
    int parallel = 1;
};

struct Violation {
    int trial;          // corpus index; density cases use trial index -(i+1)
    std::string check;
    std::string detail;
};

struct VerifyResult {
    long long checks_run = 0;
    std::vector<Violation> violations;
};

namespace detail {

struct TrialOutcome {
    long long checks = 0;
    std::vector<Violation> violations;
};

inline std::string describe(double lhs, double rhs, const std::string& label) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "lhs=%.17g rhs=%.17g ", lhs, rhs);
    return buf + label;
}

class TrialChecker {
  public:
    TrialChecker(int trial, TrialOutcome& out) : trial_(trial), out_(out) {}

    // lhs <= rhs + 1e-7 * (1 + |rhs|), the corpus soundness tolerance.
    void bound_holds(const std::string& check, double lhs, double rhs,
                     const std::string& label) {
        ++out_.checks;
        if (!(lhs <= rhs + 1e-7 * (1.0 + std::abs(rhs))) || std::isnan(lhs) || std::isnan(rhs))
            out_.violations.push_back({trial_, check, describe(lhs, rhs, label)});
    }

    void near(const std::string& check, double got, double want, double tol,
              const std::string& label) {
        ++out_.checks;
        if (!(std::abs(got - want) <= tol) || std::isnan(got))
            out_.violations.push_back({trial_, check, describe(got, want, label)});
    }

    void holds(const std::string& check, bool ok, const std::string& label) {
        ++out_.checks;
        if (!ok) out_.violations.push_back({trial_, check, label});
    }

  private:
    int trial_;
    TrialOutcome& out_;
};

inline void check_function_entry(const CorpusEntry& e, int trial, TrialOutcome& out) {
    TrialChecker chk(trial, out);
    const IntervalCtx& ctx = e.ctx;
    const double a = ctx.a, b = ctx.b, w = ctx.width();

    const DerivativeStats st = widened(estimate_stats(e.f, a, b));
    const double mean = integrate(e.f, a, b, 1e-12).value / w;

    chk.holds("stats_order", st.gamma <= st.S && st.S <= st.Gamma, e.label);
    chk.holds("sigma_nonneg",
              st.sigma_fprime_raw() >= -1e-12 * std::max(1.0, st.l2_fprime * st.l2_fprime),
              e.label);

    // Kernel closed forms against the numeric oracle.
    const double kmean = kernel_mean(ctx);
    chk.holds("kernel_mean_zero", kmean == 0.0, e.label);
    const double splits[2] = {ctx.x, ctx.reflected()};
    const double k2_closed = kernel_l2_sq(ctx);
    const double k2_num =
        integrate([&ctx](double t) { const double k = kernel_eval(ctx, t); return k * k; }, a, b,
                  1e-12, std::span<const double>(splits, 2))
            .value;
    chk.near("kernel_l2_closed_form", k2_closed, k2_num, 1e-10 * (1.0 + std::abs(k2_num)),
             e.label);

    // The integration-by-parts identity behind every pointwise bound.
    const double scale =
        1.0 + std::max({std::abs(e.f.f(a)), std::abs(e.f.f(b)), std::abs(mean)});
    const double kernel_ip =
        integrate([&](double t) { return kernel_eval(ctx, t) * e.f.df(t); }, a, b, 1e-12,
                  std::span<const double>(splits, 2))
            .value /
        w;
    const double companion = 0.5 * (e.f.f(ctx.x) + e.f.f(ctx.reflected())) - mean;
    chk.near("companion_identity", kernel_ip, companion, 1e-8 * scale, e.label);

    // L1 identities for the one-sided derivative deviations.
    const double l1_gamma =
        integrate([&](double t) { return std::abs(e.f.df(t) - st.gamma); }, a, b, 1e-11,
                  std::span<const double>(e.f.kinks))
            .value;
    chk.near("l1_identity_gamma", l1_gamma, (st.S - st.gamma) * w,
             1e-8 * (1.0 + std::abs((st.S - st.gamma) * w)), e.label);
    const double l1_Gamma =
        integrate([&](double t) { return std::abs(e.f.df(t) - st.Gamma); }, a, b, 1e-11,
                  std::span<const double>(e.f.kinks))
            .value;
    chk.near("l1_identity_Gamma", l1_Gamma, (st.Gamma - st.S) * w,
             1e-8 * (1.0 + std::abs((st.Gamma - st.S) * w)), e.label);

    // All pointwise bounds at this context; the Lp baseline cycles through
    // several exponents across the corpus.
    static constexpr double kPChoices[3] = {1.5, 2.0, 3.0};
    const double p = kPChoices[trial % 3];
    const BoundReport rep = best_bound(e.f, ctx, st, mean, p);
    for (const BoundEntry& be : rep.entries) {
        if (!be.applicable) continue;
        chk.bound_holds(std::string(bound_name(be.id)), rep.lhs, be.rhs, e.label);
    }

    // Composite-rule remainders on uniform refinements.
    const double integral = mean * w;
    const double sigma = sigma_fprime(st);
    for (int n : {1, 2, 4, 8, 16, 32, 64}) {
        const Partition P = uniform_partition(a, b, n);
        const double err = std::abs(integral - composite_rule(e.f, P));
        const Th31Remainders t31 = remainder_th31(e.f, P, st.gamma, st.Gamma);
        const std::string label = e.label + " n=" + std::to_string(n);
        chk.bound_holds("th31_gamma", err, t31.rhs_gamma, label);
        chk.bound_holds("th31_Gamma", err, t31.rhs_Gamma, label);
        chk.bound_holds("th32", err, remainder_th32(a, b, n, st.l2_fsecond), label);
        chk.bound_holds("th33", err, remainder_th33(a, b, n, sigma), label);
    }
}

inline void check_density_entry(const DensityEntry& e, int tag, TrialOutcome& out) {
    TrialChecker chk(tag, out);
    const double a = e.a, b = e.b, w = b - a;
    const DensityCtx d = DensityCtx::make(e.pdf, a, b);

    // Expectation via the distribution function vs. the first-moment integral.
    const double first_moment = integrate([&](double t) { return t * e.pdf.f(t); }, a, b,
                                          1e-11)
                                    .value;
    chk.near("expectation_identity", d.expectation(), first_moment,
             1e-8 * (1.0 + std::abs(first_moment)), e.label);

    // Density range (with the sampling margin) and norms.
    const auto hi = detail::sampled_max(d.pdf().f, a, b, 2049, 3);
    const auto lo = detail::sampled_max([&d](double t) { return -d.pdf().f(t); }, a, b, 2049, 3);
    const double Gamma = hi.value + 1e-9 * (1.0 + std::abs(hi.value));
    const double gamma = std::max(0.0, -lo.value - 1e-9 * (1.0 + std::abs(lo.value)));
    const double l2_pdf =
        std::sqrt(integrate([&d](double t) { const double v = d.pdf().f(t); return v * v; }, a, b,
                            1e-11)
                      .value);
    const double l2_deriv =
        std::sqrt(integrate([&d](double t) { const double v = d.pdf().df(t); return v * v; }, a,
                            b, 1e-11)
                      .value);

    for (int i = 0; i < 21; ++i) {
        const IntervalCtx ctx{a, b, a + 0.5 * w * i / 20.0};
        const double lhs = prob_lhs(d, ctx);
        const Th21Bounds t41 = prob_bound_th41(ctx, gamma, Gamma);
        const std::string label = e.label + " x#" + std::to_string(i);
        chk.bound_holds("th41_gamma", lhs, t41.rhs_gamma, label);
        chk.bound_holds("th41_Gamma", lhs, t41.rhs_Gamma, label);
        chk.bound_holds("th42", lhs, prob_bound_th42(ctx, l2_deriv), label);
        chk.bound_holds("th43", lhs, prob_bound_th43(ctx, l2_pdf), label);
    }
}

}  // namespace detail

/// Runs every implemented inequality over the deterministic corpus: the
/// pointwise bounds and identities per entry, the composite remainders on
/// uniform refinements, and the distribution-function bounds on a density
/// corpus (one density per ten trials). Entries are distributed over
/// `parallel` workers and merged by index, so results do not depend on the
/// worker count.
inline VerifyResult run_verify(const VerifyOptions& opt) {
    if (opt.trials < 1) throw std::invalid_argument("trials must be >= 1");
    const int workers = std::max(1, opt.parallel);
    const auto corpus = make_corpus(opt.seed, opt.trials);
    const auto densities = make_density_corpus(opt.seed, std::max(1, opt.trials / 10));

    const int total = static_cast<int>(corpus.size() + densities.size());
    std::vector<detail::TrialOutcome> outcomes(total);

    auto work = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            if (i < static_cast<int>(corpus.size()))
                detail::check_function_entry(corpus[i], i, outcomes[i]);
            else {
                const int k = i - static_cast<int>(corpus.size());
                detail::check_density_entry(densities[k], -(k + 1), outcomes[i]);
            }
        }
    };

    if (workers == 1) {
        work(0, total);
    } else {
        std::vector<std::thread> threads;
        const int chunk = (total + workers - 1) / workers;
        for (int t = 0; t < workers; ++t) {
            const int begin = t * chunk;
            const int end = std::min(total, begin + chunk);
            if (begin < end) threads.emplace_back(work, begin, end);
        }
        for (auto& th : threads) th.join();
    }

    VerifyResult result;
    for (const auto& o : outcomes) {
        result.checks_run += o.checks;
        result.violations.insert(result.violations.end(), o.violations.begin(),
                                 o.violations.end());
    }
    return result;
}

}  // namespace certiquad
