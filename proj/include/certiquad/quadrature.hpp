#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "certiquad/integrand.hpp"
#include "certiquad/integrate.hpp"
#include "certiquad/stats.hpp"

namespace certiquad {

/// Ordered breakpoints a = x_0 < x_1 < ... < x_n = b.
struct Partition {
    std::vector<double> points;

    double a() const { return points.front(); }
    double b() const { return points.back(); }
    std::size_t cells() const { return points.size() - 1; }
    double width(std::size_t i) const { return points[i + 1] - points[i]; }
};

inline Partition partition_from_points(std::vector<double> pts) {
    if (pts.size() < 2) throw std::invalid_argument("partition needs at least two points");
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        if (!(pts[i] < pts[i + 1]))
            throw std::invalid_argument("partition breakpoints must be strictly increasing");
    return Partition{std::move(pts)};
}

inline Partition uniform_partition(double a, double b, int n) {
    if (!(a < b) || n < 1) throw std::invalid_argument("uniform partition needs a < b, n >= 1");
    std::vector<double> pts(n + 1);
    for (int i = 0; i <= n; ++i) pts[i] = a + (b - a) * i / n;
    pts[0] = a;
    pts[n] = b;
    return Partition{std::move(pts)};
}

/// Two-point companion rule: each cell is sampled at its 1/4 and 3/4 points,
///   S(f, I_n) = (1/2) sum_i [f((3x_i+x_{i+1})/4) + f((x_i+3x_{i+1})/4)] h_i.
/// Cells are accumulated with compensated summation so the total is
/// independent of evaluation order.
inline double composite_rule(const Integrand& f, const Partition& P) {
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < P.cells(); ++i) {
        const double lo = P.points[i], hi = P.points[i + 1];
        const double q1 = 0.25 * (3.0 * lo + hi);
        const double q3 = 0.25 * (lo + 3.0 * hi);
        const double term = 0.5 * (f.f(q1) + f.f(q3)) * (hi - lo);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

struct Th31Remainders {
    double rhs_gamma;
    double rhs_Gamma;
};

/// Slope-based remainder bounds on an arbitrary partition:
///   |R| <= (1/4) sum (S_i - gamma) h_i^2   and   (1/4) sum (Gamma - S_i) h_i^2,
/// with S_i the secant slope of cell i. Cell slopes outside [gamma, Gamma]
/// beyond estimation noise signal wrong global bounds and throw.
inline Th31Remainders remainder_th31(const Integrand& f, const Partition& P, double gamma,
                                     double Gamma) {
    double sum_gamma = 0.0, sum_Gamma = 0.0;
    for (std::size_t i = 0; i < P.cells(); ++i) {
        const double h = P.width(i);
        const double slope = (f.f(P.points[i + 1]) - f.f(P.points[i])) / h;
        const double slack = 1e-9 * (1.0 + std::abs(slope));
        if (slope < gamma - slack || slope > Gamma + slack)
            throw std::domain_error("cell slope outside [gamma, Gamma]");
        sum_gamma += std::max(slope - gamma, 0.0) * h * h;
        sum_Gamma += std::max(Gamma - slope, 0.0) * h * h;
    }
    return {0.25 * sum_gamma, 0.25 * sum_Gamma};
}

/// Curvature remainder bound for the uniform n-cell rule:
///   |R| <= (b-a)^{5/2} / (4 sqrt(3) pi n^2) * ||f''||_2.
/// Structured so remainder_th32(n) == remainder_th32(1)/n^2 exactly.
inline double remainder_th32(double a, double b, int n, double l2_fsecond) {
    if (n < 1) throw std::invalid_argument("n >= 1 required");
    const double w = b - a;
    const double base = std::pow(w, 2.5) / (4.0 * std::sqrt(3.0) * std::numbers::pi) * l2_fsecond;
    return base / (static_cast<double>(n) * static_cast<double>(n));
}

/// Derivative-variance remainder bound for the uniform n-cell rule:
///   |R| <= (b-a)^{3/2} / (4 sqrt(3) n) * sqrt(sigma(f')).
inline double remainder_th33(double a, double b, int n, double sigma_fprime) {
    if (n < 1) throw std::invalid_argument("n >= 1 required");
    if (sigma_fprime < -1e-12 * (1.0 + std::abs(sigma_fprime)))
        throw std::domain_error("sigma(f') is negative beyond clamping tolerance");
    const double w = b - a;
    const double base =
        std::pow(w, 1.5) / (4.0 * std::sqrt(3.0)) * std::sqrt(std::max(sigma_fprime, 0.0));
    return base / static_cast<double>(n);
}

struct QuadratureResult {
    double estimate = 0.0;
    std::optional<double> bound_31_gamma;
    std::optional<double> bound_31_Gamma;
    std::optional<double> bound_32;  // uniform partitions only
    std::optional<double> bound_33;  // uniform partitions only
    std::optional<double> certified_bound;  // adaptive runs: sum of local bounds
    std::optional<double> true_error;       // oracle reference, when requested
};

struct ConvergenceRow {
    int n;
    double estimate;
    double true_error;
    double bound31g;
    double bound31G;
    double bound32;
    double bound33;
    std::string order;  // empirical order vs the next row; "exact" when error vanishes
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    double reference;
};

/// Runs the uniform rule for each n, with oracle reference error and all
/// four remainder bounds. The order column compares consecutive rows:
/// log(e_i/e_{i+1}) / log(n_{i+1}/n_i).
inline ConvergenceTable convergence_study(const Integrand& f, double a, double b,
                                          const std::vector<int>& n_list) {
    if (n_list.empty()) throw std::invalid_argument("n_list must not be empty");
    for (std::size_t i = 0; i + 1 < n_list.size(); ++i)
        if (n_list[i] >= n_list[i + 1])
            throw std::invalid_argument("n_list must be ascending");

    const double reference = integrate(f, a, b, 1e-12).value;
    const DerivativeStats st = widened(estimate_stats(f, a, b));
    const double sigma = sigma_fprime(st);

    ConvergenceTable table;
    table.reference = reference;
    const double err_floor = 1e-13 * (1.0 + std::abs(reference));
    for (int n : n_list) {
        const Partition P = uniform_partition(a, b, n);
        const double est = composite_rule(f, P);
        const auto t31 = remainder_th31(f, P, st.gamma, st.Gamma);
        table.rows.push_back({n, est, std::abs(reference - est), t31.rhs_gamma, t31.rhs_Gamma,
                              remainder_th32(a, b, n, st.l2_fsecond),
                              remainder_th33(a, b, n, sigma), ""});
    }
    for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
        const double e0 = table.rows[i].true_error, e1 = table.rows[i + 1].true_error;
        if (e0 <= err_floor && e1 <= err_floor) {
            table.rows[i].order = "exact";
        } else if (e0 > 0.0 && e1 > 0.0) {
            const double order = std::log(e0 / e1) /
                                 std::log(static_cast<double>(table.rows[i + 1].n) / table.rows[i].n);
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.6g", order);
            table.rows[i].order = buf;
        }
    }
    return table;
}

/// CSV form of the study; header is fixed.
inline std::string convergence_csv(const ConvergenceTable& table) {
    std::string out = "n,estimate,true_error,bound31g,bound31G,bound32,bound33,order\n";
    char buf[192];
    for (const ConvergenceRow& r : table.rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n", r.n,
                      r.estimate, r.true_error, r.bound31g, r.bound31G, r.bound32, r.bound33,
                      r.order.c_str());
        out += buf;
    }
    return out;
}

namespace detail {

// Certified local error of one cell: h^{5/2}/(4 sqrt(3) pi) * ||f''||_{2,cell}.
inline double local_curvature_bound(const Integrand& f, double lo, double hi) {
    const double norm_sq =
        integrate([&f](double t) { const double d = f.d2f(t); return d * d; }, lo, hi, 1e-10)
            .value;
    const double scale = 4.0 * std::sqrt(3.0) * std::numbers::pi;
    return std::pow(hi - lo, 2.5) / scale * std::sqrt(std::max(norm_sq, 0.0));
}

}  // namespace detail

struct AdaptiveResult {
    Partition partition;
    QuadratureResult result;
};

/// Greedy certified refinement: starting from a single cell, bisect the cell
/// with the largest local curvature bound until the sum of local bounds is
/// at most `target`. The returned certified bound dominates the true error
/// by the per-cell curvature estimate. Throws when the target needs more
/// than 2^20 cells.
inline AdaptiveResult adaptive_partition(const Integrand& f, double a, double b, double target) {
    if (!(target > 0.0)) throw std::invalid_argument("target must be positive");
    if (!f.has_d2f()) throw std::invalid_argument("adaptive refinement requires f''");

    struct Cell {
        double lo, hi, bound;
    };
    std::vector<Cell> cells{{a, b, detail::local_curvature_bound(f, a, b)}};
    double total = cells[0].bound;

    while (total > target) {
        if (cells.size() >= (1u << 20))
            throw std::runtime_error("adaptive refinement exceeded 2^20 cells");
        std::size_t worst = 0;
        for (std::size_t i = 1; i < cells.size(); ++i)
            if (cells[i].bound > cells[worst].bound) worst = i;
        const Cell c = cells[worst];
        const double mid = 0.5 * (c.lo + c.hi);
        const Cell left{c.lo, mid, detail::local_curvature_bound(f, c.lo, mid)};
        const Cell right{mid, c.hi, detail::local_curvature_bound(f, mid, c.hi)};
        total += left.bound + right.bound - c.bound;
        cells[worst] = left;
        cells.push_back(right);
    }

    std::vector<double> pts;
    pts.reserve(cells.size() + 1);
    for (const Cell& c : cells) pts.push_back(c.lo);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());

    AdaptiveResult out{partition_from_points(std::move(pts)), {}};
    out.result.estimate = composite_rule(f, out.partition);
    out.result.certified_bound = total;
    return out;
}

}  // namespace certiquad
