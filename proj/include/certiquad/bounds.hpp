#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string_view>

#include "certiquad/integrand.hpp"
#include "certiquad/kernel.hpp"
#include "certiquad/stats.hpp"

namespace certiquad {

// Fixed identifiers for the serialized reports. Enum order doubles as the
// tie-break order of the tightest-bound selector.
enum class BoundId {
    th23,
    th22,
    th21_gamma,
    th21_Gamma,
    alomari,
    dragomir_inf,
    dragomir_p,
    dragomir_1,
};

inline constexpr int kBoundCount = 8;

inline constexpr std::array<std::string_view, kBoundCount> kBoundNames = {
    "th23", "th22", "th21_gamma", "th21_Gamma",
    "alomari", "dragomir_inf", "dragomir_p", "dragomir_1"};

inline std::string_view bound_name(BoundId id) { return kBoundNames[static_cast<int>(id)]; }

namespace detail {

// sqrt((b-a)^2/48 + (x-(3a+b)/4)^2), the x-dependent factor shared by the
// L2-flavoured bounds.
inline double l2_bracket(const IntervalCtx& c) {
    const double w = c.width();
    const double d = c.x - c.quarter_point();
    return std::sqrt(w * w / 48.0 + d * d);
}

}  // namespace detail

struct Th21Bounds {
    double rhs_gamma;
    double rhs_Gamma;
};

/// Slope bounds: [ (b-a)/4 + |x-(3a+b)/4| ] * (S - gamma) and * (Gamma - S).
/// Throws when gamma <= S <= Gamma fails beyond estimation noise.
inline Th21Bounds bound_th21(const IntervalCtx& c, const DerivativeStats& st) {
    const double slack = 1e-9 * (1.0 + std::abs(st.S));
    if (st.gamma > st.S + slack || st.S > st.Gamma + slack)
        throw std::domain_error("derivative bounds violate gamma <= S <= Gamma");
    const double bracket = kernel_max_abs(c);
    return {bracket * (st.S - std::min(st.gamma, st.S)),
            bracket * (std::max(st.Gamma, st.S) - st.S)};
}

/// Curvature bound: (b-a)^{1/2}/pi * l2_bracket * ||f''||_2.
inline double bound_th22(const IntervalCtx& c, const DerivativeStats& st) {
    return std::sqrt(c.width()) / std::numbers::pi * detail::l2_bracket(c) * st.l2_fsecond;
}

/// sigma(f') = ||f'||_2^2 - S^2 (b-a), clamped to zero within estimation
/// noise; genuinely negative values indicate inconsistent norms and throw.
inline double sigma_fprime(const DerivativeStats& st) {
    const double sigma = st.sigma_fprime_raw();
    const double tol = 1e-12 * std::max(1.0, st.l2_fprime * st.l2_fprime);
    if (sigma < -tol) throw std::domain_error("sigma(f') is negative: inconsistent norms");
    return std::max(sigma, 0.0);
}

/// Derivative-variance bound: (b-a)^{-1/2} * l2_bracket * sqrt(sigma(f')).
inline double bound_th23(const IntervalCtx& c, const DerivativeStats& st) {
    return detail::l2_bracket(c) / std::sqrt(c.width()) * std::sqrt(sigma_fprime(st));
}

struct DragomirBounds {
    double rhs_inf;
    double rhs_p;
    double rhs_1;
};

/// The three companion baselines for f' in L^inf, L^p and L^1. The sup norm
/// is taken as max(|gamma|, |Gamma|). Requires p > 1; q is the conjugate
/// exponent.
inline DragomirBounds bound_dragomir(const IntervalCtx& c, const DerivativeStats& st, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("dragomir L^p form requires p > 1");
    const double w = c.width();
    const double rel = (c.x - c.quarter_point()) / w;
    const double sup_norm = std::max(std::abs(st.gamma), std::abs(st.Gamma));
    const double rhs_inf = (0.125 + 2.0 * rel * rel) * w * sup_norm;

    const double q = p / (p - 1.0);
    const double left = (c.x - c.a) / w;
    const double right = (c.midpoint() - c.x) / w;
    const double lp_norm = st.lp_fprime ? st.lp_fprime(p)
                                        : std::numeric_limits<double>::quiet_NaN();
    const double rhs_p = std::pow(2.0, 1.0 / q) / std::pow(q + 1.0, 1.0 / q) *
                         std::pow(std::pow(left, q + 1.0) + std::pow(right, q + 1.0), 1.0 / q) *
                         std::pow(w, 1.0 / q) * lp_norm;

    const double rhs_1 = (0.25 + std::abs(rel)) * st.l1_fprime;
    return {rhs_inf, rhs_p, rhs_1};
}

/// Range bound: [1/16 + ((x-(3a+b)/4)/(b-a))^2] * (b-a) * (Gamma - gamma).
inline double bound_alomari(const IntervalCtx& c, const DerivativeStats& st) {
    const double rel = (c.x - c.quarter_point()) / c.width();
    return (0.0625 + rel * rel) * c.width() * (st.Gamma - st.gamma);
}

struct BoundEntry {
    BoundId id;
    double rhs;
    bool applicable;
};

/// One evaluation of every implemented bound at a context: the common
/// left-hand side, all right-hand sides (inapplicable ones flagged, never
/// dropped), and the tightest applicable bound. Ties resolve by the fixed id
/// order.
struct BoundReport {
    double lhs = 0.0;
    std::array<BoundEntry, kBoundCount> entries;
    BoundId tightest = BoundId::th23;
    IntervalCtx ctx{};
    double p = 2.0;
};

/// Evaluates all bounds for f at ctx. `mean` is (1/(b-a)) * integral of f as
/// supplied by the oracle. Bounds whose norms are unavailable degrade to
/// not-applicable entries.
inline BoundReport best_bound(const Integrand& f, const IntervalCtx& c,
                              const DerivativeStats& st, double mean, double p = 2.0) {
    BoundReport rep;
    rep.ctx = c;
    rep.p = p;
    rep.lhs = companion_lhs(f.f, c, mean);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto set = [&rep](BoundId id, double rhs, bool applicable) {
        rep.entries[static_cast<int>(id)] = {id, applicable ? rhs : 0.0, applicable};
    };

    set(BoundId::th23, st.has_fprime ? bound_th23(c, st) : nan, st.has_fprime);
    set(BoundId::th22, st.has_fsecond ? bound_th22(c, st) : nan, st.has_fsecond);
    if (st.has_fprime) {
        const Th21Bounds t21 = bound_th21(c, st);
        set(BoundId::th21_gamma, t21.rhs_gamma, true);
        set(BoundId::th21_Gamma, t21.rhs_Gamma, true);
        set(BoundId::alomari, bound_alomari(c, st), true);
        const bool p_ok = p > 1.0 && static_cast<bool>(st.lp_fprime);
        const DragomirBounds dr = bound_dragomir(c, st, p_ok ? p : 2.0);
        set(BoundId::dragomir_inf, dr.rhs_inf, true);
        set(BoundId::dragomir_p, dr.rhs_p, p_ok);
        set(BoundId::dragomir_1, dr.rhs_1, true);
    } else {
        for (BoundId id : {BoundId::th21_gamma, BoundId::th21_Gamma, BoundId::alomari,
                           BoundId::dragomir_inf, BoundId::dragomir_p, BoundId::dragomir_1})
            set(id, nan, false);
    }

    bool found = false;
    for (const BoundEntry& e : rep.entries) {
        if (!e.applicable) continue;
        if (!found || e.rhs < rep.entries[static_cast<int>(rep.tightest)].rhs) {
            rep.tightest = e.id;
            found = true;
        }
    }
    return rep;
}

}  // namespace certiquad
