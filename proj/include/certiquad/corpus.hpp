#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "certiquad/integrand.hpp"
#include "certiquad/integrate.hpp"
#include "certiquad/kernel.hpp"

namespace certiquad {

/// splitmix64 stream. Used instead of <random> distributions so corpora are
/// bit-identical across platforms and standard libraries.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // inclusive on both ends
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

/// Polynomial with exact Horner derivatives up to second order.
inline Integrand make_polynomial_integrand(std::vector<double> coeffs) {
    auto horner = [](const std::vector<double>& c, double t) {
        double acc = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
        return acc;
    };
    std::vector<double> d1, d2;
    for (std::size_t k = 1; k < coeffs.size(); ++k) d1.push_back(k * coeffs[k]);
    for (std::size_t k = 1; k < d1.size(); ++k) d2.push_back(k * d1[k]);
    Integrand g;
    g.f = [coeffs, horner](double t) { return horner(coeffs, t); };
    g.df = [d1, horner](double t) { return horner(d1, t); };
    g.d2f = [d2, horner](double t) { return horner(d2, t); };
    return g;
}

/// c1*sin(c2*t) + c3*exp(c4*t) with closed-form derivatives.
inline Integrand make_sinexp_integrand(double c1, double c2, double c3, double c4) {
    Integrand g;
    g.f = [=](double t) { return c1 * std::sin(c2 * t) + c3 * std::exp(c4 * t); };
    g.df = [=](double t) { return c1 * c2 * std::cos(c2 * t) + c3 * c4 * std::exp(c4 * t); };
    g.d2f = [=](double t) {
        return -c1 * c2 * c2 * std::sin(c2 * t) + c3 * c4 * c4 * std::exp(c4 * t);
    };
    return g;
}

struct CorpusEntry {
    Integrand f;
    IntervalCtx ctx;
    std::string label;
};

/// Deterministic pseudo-random test corpus: polynomials of degree <= 8 with
/// coefficients in [-3, 3], and sin/exp mixtures, over intervals with
/// a in [-2, 2], b-a in [0.5, 4], x uniform in [a, (a+b)/2].
inline std::vector<CorpusEntry> make_corpus(std::uint64_t seed, int count) {
    if (count < 1) throw std::invalid_argument("corpus requires count >= 1");
    std::vector<CorpusEntry> out;
    out.reserve(count);
    Rng rng(seed);
    for (int i = 0; i < count; ++i) {
        const double a = rng.uniform(-2.0, 2.0);
        const double b = a + rng.uniform(0.5, 4.0);
        const double x = rng.uniform(a, 0.5 * (a + b));
        CorpusEntry e{Integrand{}, IntervalCtx{a, b, x}, {}};
        if (rng.next_u64() & 1) {
            const int degree = rng.uniform_int(0, 8);
            std::vector<double> coeffs(degree + 1);
            for (double& c : coeffs) c = rng.uniform(-3.0, 3.0);
            e.f = make_polynomial_integrand(std::move(coeffs));
            e.label = "poly" + std::to_string(degree) + "#" + std::to_string(i);
        } else {
            const double c1 = rng.uniform(-3.0, 3.0), c2 = rng.uniform(-3.0, 3.0);
            const double c3 = rng.uniform(-3.0, 3.0), c4 = rng.uniform(-3.0, 3.0);
            e.f = make_sinexp_integrand(c1, c2, c3, c4);
            e.label = "sinexp#" + std::to_string(i);
        }
        out.push_back(std::move(e));
    }
    return out;
}

struct DensityEntry {
    Integrand pdf;  // pre-scaled to unit mass
    double a, b;
    std::string label;
};

/// Density corpus for the distribution-function bounds: squared polynomials
/// shifted positive and truncated exponentials, each pre-scaled to unit mass
/// with the reference integrator.
inline std::vector<DensityEntry> make_density_corpus(std::uint64_t seed, int count) {
    if (count < 1) throw std::invalid_argument("corpus requires count >= 1");
    std::vector<DensityEntry> out;
    out.reserve(count);
    Rng rng(seed ^ 0xd1f3a5c96b7e2481ull);
    for (int i = 0; i < count; ++i) {
        const double a = rng.uniform(-1.0, 1.0);
        const double b = a + rng.uniform(0.5, 3.0);
        Integrand shape;
        std::string label;
        if (rng.next_u64() & 1) {
            const int degree = rng.uniform_int(0, 3);
            std::vector<double> p(degree + 1);
            for (double& c : p) c = rng.uniform(-1.0, 1.0);
            // (p(t))^2 + 0.05: positive polynomial
            const Integrand base = make_polynomial_integrand(std::move(p));
            shape.f = [base](double t) {
                const double v = base.f(t);
                return v * v + 0.05;
            };
            shape.df = [base](double t) { return 2.0 * base.f(t) * base.df(t); };
            shape.d2f = [base](double t) {
                const double d = base.df(t);
                return 2.0 * (d * d + base.f(t) * base.d2f(t));
            };
            label = "posqpoly" + std::to_string(degree) + "#" + std::to_string(i);
        } else {
            const double lambda = rng.uniform(-2.0, 2.0);
            shape.f = [lambda](double t) { return std::exp(lambda * t); };
            shape.df = [lambda](double t) { return lambda * std::exp(lambda * t); };
            shape.d2f = [lambda](double t) { return lambda * lambda * std::exp(lambda * t); };
            label = "truncexp#" + std::to_string(i);
        }
        const double mass = integrate(shape.f, a, b, 1e-12).value;
        Integrand pdf;
        const double inv = 1.0 / mass;
        pdf.f = [shape, inv](double t) { return shape.f(t) * inv; };
        pdf.df = [shape, inv](double t) { return shape.df(t) * inv; };
        pdf.d2f = [shape, inv](double t) { return shape.d2f(t) * inv; };
        out.push_back({std::move(pdf), a, b, std::move(label)});
    }
    return out;
}

}  // namespace certiquad
