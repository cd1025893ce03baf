#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "certiquad/bounds.hpp"
#include "certiquad/integrand.hpp"
#include "certiquad/integrate.hpp"
#include "certiquad/kernel.hpp"

namespace certiquad {

/// A validated probability density on [a, b] with its distribution function
/// and expectation. Construction scans for negativity, checks the total
/// mass, and normalizes shapes whose mass lies in [0.5, 2] (reported via
/// normalization_applied). F is computed on demand by reference integration
/// from a and memoized per evaluation point.
class DensityCtx {
  public:
    static DensityCtx make(Integrand pdf, double a, double b) {
        if (!(a < b)) throw std::invalid_argument("density interval requires a < b");
        constexpr int kScanPoints = 4097;
        for (int i = 0; i < kScanPoints; ++i) {
            const double t = a + (b - a) * i / (kScanPoints - 1);
            if (pdf.f(t) < 0.0)
                throw std::domain_error("density is negative at t = " + std::to_string(t));
        }
        const double mass = integrate(pdf, a, b, 1e-12).value;
        DensityCtx d;
        d.a_ = a;
        d.b_ = b;
        d.raw_mass_ = mass;
        if (std::abs(mass - 1.0) <= 1e-8) {
            d.pdf_ = std::move(pdf);
            d.normalized_ = false;
        } else if (mass >= 0.5 && mass <= 2.0) {
            const double inv = 1.0 / mass;
            Integrand scaled;
            scaled.f = [pdf, inv](double t) { return pdf.f(t) * inv; };
            if (pdf.has_df()) scaled.df = [pdf, inv](double t) { return pdf.df(t) * inv; };
            if (pdf.has_d2f()) scaled.d2f = [pdf, inv](double t) { return pdf.d2f(t) * inv; };
            scaled.kinks = pdf.kinks;
            d.pdf_ = std::move(scaled);
            d.normalized_ = true;
        } else {
            throw std::domain_error("density mass " + std::to_string(mass) +
                                    " outside the accepted range [0.5, 2]");
        }
        d.memo_ = std::make_shared<Memo>();
        d.expectation_ = b - integrate([&d](double t) { return d.cdf(t); }, a, b, 1e-9,
                                       std::span<const double>{}, 1e-12)
                                 .value;
        return d;
    }

    double a() const { return a_; }
    double b() const { return b_; }
    const Integrand& pdf() const { return pdf_; }
    bool normalization_applied() const { return normalized_; }
    double raw_mass() const { return raw_mass_; }
    double expectation() const { return expectation_; }

    /// F(x) = integral of the density from a to x; memoized.
    double cdf(double x) const {
        if (x <= a_) return 0.0;
        std::lock_guard<std::mutex> lock(memo_->mu);
        auto it = memo_->values.find(x);
        if (it != memo_->values.end()) return it->second;
        const double v = integrate(pdf_, a_, std::min(x, b_), 1e-10).value;
        memo_->values.emplace(x, v);
        return v;
    }

  private:
    struct Memo {
        std::mutex mu;
        std::map<double, double> values;
    };

    DensityCtx() = default;

    Integrand pdf_;
    double a_ = 0.0, b_ = 0.0;
    double raw_mass_ = 0.0;
    bool normalized_ = false;
    double expectation_ = 0.0;
    std::shared_ptr<Memo> memo_;
};

/// |(F(x)+F(a+b-x))/2 - (b-E(X))/(b-a)|, the companion residual of the
/// distribution function.
inline double prob_lhs(const DensityCtx& d, const IntervalCtx& c) {
    const double mean_F = (d.b() - d.expectation()) / (d.b() - d.a());
    return std::abs(0.5 * (d.cdf(c.x) + d.cdf(c.reflected())) - mean_F);
}

/// Density-range bounds: bracket * (1/(b-a) - gamma) and
/// bracket * (Gamma - 1/(b-a)), for gamma <= f <= Gamma on [a, b].
inline Th21Bounds prob_bound_th41(const IntervalCtx& c, double gamma, double Gamma) {
    const double mean_slope = 1.0 / c.width();
    const double slack = 1e-9 * (1.0 + mean_slope);
    if (gamma > mean_slope + slack || Gamma < mean_slope - slack)
        throw std::domain_error("density bounds must straddle 1/(b-a)");
    const double bracket = kernel_max_abs(c);
    return {bracket * (mean_slope - std::min(gamma, mean_slope)),
            bracket * (std::max(Gamma, mean_slope) - mean_slope)};
}

/// Density-slope bound: (b-a)^{1/2}/pi * l2_bracket * ||f'||_2.
inline double prob_bound_th42(const IntervalCtx& c, double l2_pdf_deriv) {
    return std::sqrt(c.width()) / std::numbers::pi * detail::l2_bracket(c) * l2_pdf_deriv;
}

/// Density-variance bound with sigma(f) = ||f||_2^2 - 1/(b-a):
/// (b-a)^{-1/2} * l2_bracket * sqrt(sigma(f)).
inline double prob_bound_th43(const IntervalCtx& c, double l2_pdf) {
    const double sigma = l2_pdf * l2_pdf - 1.0 / c.width();
    const double tol = 1e-12 * std::max(1.0, l2_pdf * l2_pdf);
    if (sigma < -tol) throw std::domain_error("sigma(f) is negative: inconsistent norms");
    return detail::l2_bracket(c) / std::sqrt(c.width()) * std::sqrt(std::max(sigma, 0.0));
}

}  // namespace certiquad
