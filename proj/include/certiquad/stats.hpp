#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "certiquad/integrand.hpp"
#include "certiquad/integrate.hpp"

namespace certiquad {

/// Scalar functionals of f' and f'' that the bound evaluations consume.
/// gamma/Gamma come from sampling plus local refinement, so they sit inside
/// the true range; verification widens them before soundness checks (see
/// widened()). Norm fields are NaN when the derivative is unavailable.
struct DerivativeStats {
    double a = 0.0, b = 0.0;
    double S = std::numeric_limits<double>::quiet_NaN();
    double gamma = std::numeric_limits<double>::quiet_NaN();
    double Gamma = std::numeric_limits<double>::quiet_NaN();
    double l2_fprime = std::numeric_limits<double>::quiet_NaN();
    double l2_fsecond = std::numeric_limits<double>::quiet_NaN();
    double l1_fprime = std::numeric_limits<double>::quiet_NaN();
    bool has_fprime = false;
    bool has_fsecond = false;
    bool gamma_refined = false;  // refinement moved past the best grid sample
    bool Gamma_refined = false;
    std::function<double(double)> lp_fprime;  // p -> ||f'||_p on demand

    // ||f'||_2^2 - S^2 (b-a); may go slightly negative from estimation noise.
    double sigma_fprime_raw() const { return l2_fprime * l2_fprime - S * S * (b - a); }
};

namespace detail {

// Golden-section ascent on [lo, hi]; assumes the bracket holds one local
// maximum (the brackets come from adjacent grid samples).
template <typename F>
double golden_max(F&& f, double lo, double hi) {
    constexpr double invphi = 0.6180339887498949;
    double c = hi - invphi * (hi - lo);
    double d = lo + invphi * (hi - lo);
    double fc = f(c), fd = f(d);
    while (hi - lo > 1e-12 * (1.0 + std::abs(lo) + std::abs(hi))) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - invphi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + invphi * (hi - lo);
            fd = f(d);
        }
    }
    return std::max(fc, fd);
}

struct ExtremumEstimate {
    double value;
    bool refined;
};

// Max of g over [a, b]: dense sampling, then golden-section refinement of
// the best few locally-maximal brackets. Declared kinks join the candidate
// pool directly; features narrower than the grid spacing are invisible to
// sampling alone.
template <typename F>
ExtremumEstimate sampled_max(F&& g, double a, double b, int grid_n, int refine_top,
                             std::span<const double> extra_points = {}) {
    std::vector<double> v(grid_n);
    const double h = (b - a) / (grid_n - 1);
    for (int i = 0; i < grid_n; ++i) v[i] = g(a + i * h);

    double best = *std::max_element(v.begin(), v.end());

    struct Candidate {
        double value, lo, hi;
    };
    std::vector<Candidate> candidates;
    for (int i = 0; i < grid_n; ++i) {
        const bool left_ok = i == 0 || v[i] >= v[i - 1];
        const bool right_ok = i == grid_n - 1 || v[i] >= v[i + 1];
        if (left_ok && right_ok)
            candidates.push_back(
                {v[i], a + std::max(0, i - 1) * h, a + std::min(grid_n - 1, i + 1) * h});
    }
    for (double p : extra_points) {
        if (p <= a || p >= b) continue;
        const double value = g(p);
        best = std::max(best, value);
        candidates.push_back({value, std::max(a, p - h), std::min(b, p + h)});
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& x, const Candidate& y) { return x.value > y.value; });
    if (static_cast<int>(candidates.size()) > refine_top) candidates.resize(refine_top);

    bool refined = false;
    for (const Candidate& c : candidates) {
        const double m = golden_max(g, c.lo, c.hi);
        if (m > best) {
            best = m;
            refined = true;
        }
    }
    return {best, refined};
}

}  // namespace detail

/// Estimates every derivative functional the bounds need: S exactly from the
/// endpoint values, gamma/Gamma by 4097-point sampling with golden-section
/// refinement around the 3 best candidates, and the f'/f'' norms by
/// reference integration.
inline DerivativeStats estimate_stats(const Integrand& g, double a, double b,
                                      double rel_tol = 1e-11, int grid_n = 4097,
                                      int refine_top = 3) {
    DerivativeStats s;
    s.a = a;
    s.b = b;
    s.S = (g.f(b) - g.f(a)) / (b - a);

    if (g.has_df()) {
        s.has_fprime = true;
        const auto df = g.df;
        const auto extra = std::span<const double>(g.kinks);
        auto hi = detail::sampled_max(df, a, b, grid_n, refine_top, extra);
        auto lo = detail::sampled_max([&df](double t) { return -df(t); }, a, b, grid_n,
                                      refine_top, extra);
        // The secant slope is an attained value of f', so the estimated
        // range may never exclude it.
        s.Gamma = std::max(hi.value, s.S);
        s.gamma = std::min(-lo.value, s.S);
        s.Gamma_refined = hi.refined;
        s.gamma_refined = lo.refined;

        const auto splits = std::span<const double>(g.kinks);
        s.l2_fprime =
            std::sqrt(integrate([&df](double t) { const double d = df(t); return d * d; },
                                a, b, rel_tol, splits).value);
        s.l1_fprime =
            integrate([&df](double t) { return std::abs(df(t)); }, a, b, rel_tol, splits).value;
        std::vector<double> kinks = g.kinks;
        s.lp_fprime = [df, a, b, rel_tol, kinks](double p) {
            return std::pow(integrate([&df, p](double t) { return std::pow(std::abs(df(t)), p); },
                                      a, b, rel_tol, std::span<const double>(kinks)).value,
                            1.0 / p);
        };
    }
    if (g.has_d2f()) {
        s.has_fsecond = true;
        const auto d2f = g.d2f;
        s.l2_fsecond =
            std::sqrt(integrate([&d2f](double t) { const double d = d2f(t); return d * d; },
                                a, b, rel_tol, std::span<const double>(g.kinks)).value);
    }
    return s;
}

/// Pushes gamma down and Gamma up by margin*(1+|value|). Sampled extrema sit
/// inside the true range, which would make slope-based bounds spuriously
/// small; soundness checks use the widened values.
inline DerivativeStats widened(DerivativeStats s, double margin = 1e-9) {
    if (s.has_fprime) {
        s.gamma -= margin * (1.0 + std::abs(s.gamma));
        s.Gamma += margin * (1.0 + std::abs(s.Gamma));
    }
    return s;
}

}  // namespace certiquad
