#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <vector>

#include "certiquad/integrand.hpp"

namespace certiquad {

/// Reference integration failed to converge (typically a non-integrable
/// singularity in the requested range).
class IntegrationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadResult {
    double value;
    double err_est;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1].
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};

inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename F>
QuadResult gk15(F&& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double k15 = kWgk[7] * fc;
    double g7 = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double pair = f(center - dx) + f(center + dx);
        k15 += kWgk[j] * pair;
        if (j % 2 == 1) g7 += kWg[j / 2] * pair;
    }
    return {k15 * half, std::abs((k15 - g7) * half)};
}

}  // namespace detail

/// Default relative tolerance for reference integration; overridable via the
/// CERTIQUAD_REL_TOL environment variable.
inline double default_rel_tol() {
    static const double tol = [] {
        if (const char* env = std::getenv("CERTIQUAD_REL_TOL")) {
            const double v = std::atof(env);
            if (v >= 1e-13 && v < 1.0) return v;
        }
        return 1e-12;
    }();
    return tol;
}

/// Adaptive bisection with a 15-point Kronrod rule per cell and the embedded
/// 7-point Gauss rule as error estimate. Initial cells are cut at `splits`
/// (interior breakpoints of piecewise-smooth integrands); the worst cell is
/// bisected until the total error estimate drops below
/// max(rel_tol*|value|, abs_floor). Cells driven past depth 60 raise
/// IntegrationError.
template <typename F>
    requires std::is_invocable_r_v<double, F, double>
QuadResult integrate(F&& f, double a, double b, double rel_tol,
                     std::span<const double> splits = {}, double abs_floor = 1e-14) {
    if (!(a < b)) throw std::invalid_argument("integrate requires a < b");
    if (rel_tol < 1e-13) throw std::invalid_argument("rel_tol below supported precision");

    struct Cell {
        double lo, hi, value, err;
        int depth;
    };

    std::vector<double> edges;
    edges.push_back(a);
    for (double s : splits)
        if (s > a && s < b) edges.push_back(s);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::vector<Cell> cells;
    cells.reserve(64);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const auto r = detail::gk15(f, edges[i], edges[i + 1]);
        cells.push_back({edges[i], edges[i + 1], r.value, r.err_est, 0});
    }

    for (;;) {
        double total = 0.0, err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            total += cells[i].value;
            err += cells[i].err;
            if (cells[i].err > cells[worst].err) worst = i;
        }
        if (err <= std::max(rel_tol * std::abs(total), abs_floor)) return {total, err};

        Cell& c = cells[worst];
        if (c.depth >= 60)
            throw IntegrationError("integration did not converge (depth 60 exceeded)");
        const double mid = 0.5 * (c.lo + c.hi);
        const auto left = detail::gk15(f, c.lo, mid);
        const auto right = detail::gk15(f, mid, c.hi);
        const Cell rc{mid, c.hi, right.value, right.err_est, c.depth + 1};
        c = {c.lo, mid, left.value, left.err_est, c.depth + 1};
        cells.push_back(rc);
    }
}

template <typename F>
    requires std::is_invocable_r_v<double, F, double>
QuadResult integrate(F&& f, double a, double b) {
    return integrate(std::forward<F>(f), a, b, default_rel_tol());
}

/// Integrates an Integrand, splitting at its declared kinks.
inline QuadResult integrate(const Integrand& g, double a, double b, double rel_tol) {
    return integrate(g.f, a, b, rel_tol, std::span<const double>(g.kinks));
}

inline QuadResult integrate(const Integrand& g, double a, double b) {
    return integrate(g, a, b, default_rel_tol());
}

}  // namespace certiquad
