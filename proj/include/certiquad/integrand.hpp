#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "certiquad/expr.hpp"

namespace certiquad {

/// A function on an interval together with whatever exact derivatives it can
/// supply. `df`/`d2f` are empty when unavailable; consumers that need a
/// missing derivative report the corresponding bound as not applicable.
/// `kinks` lists interior points where the function is not smooth, so the
/// oracle can split integration cells there.
struct Integrand {
    std::function<double(double)> f;
    std::function<double(double)> df;
    std::function<double(double)> d2f;
    std::vector<double> kinks;

    bool has_df() const { return static_cast<bool>(df); }
    bool has_d2f() const { return static_cast<bool>(d2f); }
};

/// Wraps a parsed expression; derivatives come from forward AD and are
/// value-consistent with plain evaluation.
inline Integrand make_expr_integrand(ExprPtr e) {
    Integrand g;
    g.f = [e](double t) { return eval(e, t); };
    g.df = [e](double t) { return eval_jet(e, t).d1; };
    g.d2f = [e](double t) { return eval_jet(e, t).d2; };
    return g;
}

inline Integrand make_native_integrand(std::function<double(double)> f,
                                       std::function<double(double)> df = {},
                                       std::function<double(double)> d2f = {},
                                       std::vector<double> kinks = {}) {
    return Integrand{std::move(f), std::move(df), std::move(d2f), std::move(kinks)};
}

}  // namespace certiquad
