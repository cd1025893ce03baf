#pragma once

#include <stdexcept>

#include "certiquad/bounds.hpp"
#include "certiquad/extremal.hpp"
#include "certiquad/integrate.hpp"
#include "certiquad/kernel.hpp"
#include "certiquad/stats.hpp"

namespace certiquad {

struct SharpnessRow {
    double epsilon;
    double lhs;
    double rhs;
    double ratio;
};

/// Runs the extremal witness through the full pipeline (reference mean,
/// estimated stats, slope bound) and returns LHS/RHS for the lower slope
/// bound. Analytically the ratio is (x - eps/2 - eps^2/2)/x, which tends to
/// 1 as eps -> 0: the 1/4 factor is unimprovable.
inline SharpnessRow sharpness_case(double epsilon, double x) {
    if (!(x >= 0.25 && x <= 0.5))
        throw std::invalid_argument("sharpness witness requires x in [1/4, 1/2]");
    const ExtremalWitness w{epsilon, x};
    if (!w.pieces_ordered()) throw std::invalid_argument("extremal pieces out of order");

    const Integrand g = make_extremal_integrand(w);
    const IntervalCtx ctx = make_ctx(0.0, 1.0, x);
    const double mean = integrate(g, 0.0, 1.0, 1e-13).value;
    const DerivativeStats st = estimate_stats(g, 0.0, 1.0);
    const double lhs = companion_lhs(g.f, ctx, mean);
    const double rhs = bound_th21(ctx, st).rhs_gamma;
    return {epsilon, lhs, rhs, lhs / rhs};
}

inline double sharpness_ratio(double epsilon, double x) {
    return sharpness_case(epsilon, x).ratio;
}

}  // namespace certiquad
