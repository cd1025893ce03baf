#pragma once

#include <array>
#include <stdexcept>
#include <utility>

#include "certiquad/integrand.hpp"

namespace certiquad {

/// Parameters of the five-piece extremal family on [0, 1] witnessing that
/// the 1/4 factor of the slope bounds cannot be lowered. The function is a
/// plateau at -eps^2/2, a quadratic ease-in, a unit-slope ramp, a quadratic
/// ease-out, and a plateau at eps - eps^2/2, with breakpoints at
/// x-eps-eps^2, x-eps, x-eps^2, x. By construction inf f' = 0 and
/// sup f' = 1.
struct ExtremalWitness {
    double epsilon;  // in (0, 1/8)
    double x;        // in [1/4, 1/2]

    std::array<double, 4> breakpoints() const {
        const double e2 = epsilon * epsilon;
        return {x - epsilon - e2, x - epsilon, x - e2, x};
    }

    bool pieces_ordered() const {
        return epsilon > 0.0 && epsilon + epsilon * epsilon < x;
    }
};

/// Exact evaluation of (f, f') for the witness. Throws when t is outside
/// [0, 1] or the pieces are out of order.
inline std::pair<double, double> extremal_eval(const ExtremalWitness& w, double t) {
    if (!w.pieces_ordered()) throw std::invalid_argument("extremal pieces out of order");
    if (t < 0.0 || t > 1.0) throw std::domain_error("extremal argument outside [0, 1]");
    const double eps = w.epsilon;
    const double e2 = eps * eps;
    const auto bp = w.breakpoints();

    if (t <= bp[0]) return {-0.5 * e2, 0.0};
    if (t <= bp[1]) {
        const double u = t - bp[0];
        return {u * u / (2.0 * e2) - 0.5 * e2, u / e2};
    }
    if (t <= bp[2]) return {t - bp[1], 1.0};
    if (t <= bp[3]) {
        const double u = t - w.x;
        return {-u * u / (2.0 * e2) + eps - 0.5 * e2, -u / e2};
    }
    return {eps - 0.5 * e2, 0.0};
}

/// Integrand view of the witness. The second derivative is discontinuous at
/// the breakpoints, so it is not exposed; curvature-based bounds degrade to
/// not-applicable.
inline Integrand make_extremal_integrand(const ExtremalWitness& w) {
    if (!w.pieces_ordered()) throw std::invalid_argument("extremal pieces out of order");
    Integrand g;
    g.f = [w](double t) { return extremal_eval(w, t).first; };
    g.df = [w](double t) { return extremal_eval(w, t).second; };
    const auto bp = w.breakpoints();
    g.kinks.assign(bp.begin(), bp.end());
    return g;
}

}  // namespace certiquad
