#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rosenthal3/quadrature.hpp"

namespace rosenthal3 {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;  // 1/sqrt(2 pi)
inline constexpr double kSqrtHalf = 0.70710678118654752440084436210485;    // 1/sqrt(2)
inline constexpr double kSqrt2OverPi = 0.79788456080286535587989211986876; // sqrt(2/pi)

// The law sigma*Z + c for standard normal Z. sigma = 0 is the point mass at c.
struct GaussianAffine {
    double scale = 1.0;
    double shift = 0.0;

    GaussianAffine() = default;
    GaussianAffine(double sigma, double c) : scale(sigma), shift(c) {
        if (!(std::isfinite(sigma) && std::isfinite(c)))
            throw std::invalid_argument("GaussianAffine: parameters must be finite");
        if (sigma < 0.0)
            throw std::invalid_argument("GaussianAffine: scale must be nonnegative");
    }
};

inline double std_normal_pdf(double t) {
    if (!std::isfinite(t))
        throw std::invalid_argument("std_normal_pdf: argument must be finite");
    return kInvSqrt2Pi * std::exp(-0.5 * t * t);
}

// Phi(t) = erfc(-t/sqrt 2)/2: no 1 - (small) cancellation in either tail.
inline double std_normal_cdf(double t) {
    if (!std::isfinite(t))
        throw std::invalid_argument("std_normal_cdf: argument must be finite");
    return 0.5 * std::erfc(-t * kSqrtHalf);
}

// Q(t) = 1 - Phi(t), full relative accuracy in the right tail.
inline double std_normal_cdf_c(double t) {
    if (!std::isfinite(t))
        throw std::invalid_argument("std_normal_cdf_c: argument must be finite");
    return 0.5 * std::erfc(t * kSqrtHalf);
}

namespace detail {

// E (Z - u)_+^alpha by adaptive quadrature, alpha >= 0. Reference route for
// the closed forms below and the only route for fractional exponents.
inline double partial_moment_plus_quad(double u, double alpha) {
    // phi underflows to exactly 0 beyond |z| ~ 39, so the integrand's support
    // in double precision is [max(u, -41), 41 + max(u, 0)].
    const double lo = std::max(u, -41.0);
    const double hi = 41.0 + std::max(u, 0.0);
    if (lo >= hi) return 0.0;
    const auto integrand = [u, alpha](double z) {
        const double w = z - u;
        if (w <= 0.0) return 0.0;
        return std::pow(w, alpha) * kInvSqrt2Pi * std::exp(-0.5 * z * z);
    };
    return std::max(0.0, integrate_adaptive(integrand, lo, hi, 1e-13).value);
}

}  // namespace detail

// E (Z - t)_+^k for k in {0,1,2,3}, closed forms with Q(t) = 1 - Phi(t):
//   k=0: Q(t)
//   k=1: phi(t) - t Q(t)
//   k=2: (1 + t^2) Q(t) - t phi(t)
//   k=3: (t^2 + 2) phi(t) - (t^3 + 3t) Q(t)
// Both phi and Q decay together in the right tail, so the subtractions lose
// at most a few digits near t ~ 8 (relative error stays ~1e-12 there).
inline double partial_moment_plus(double t, int k) {
    if (!std::isfinite(t))
        throw std::invalid_argument("partial_moment_plus: t must be finite");
    const double q = std_normal_cdf_c(t);
    const double d = std_normal_pdf(t);
    double v = 0.0;
    switch (k) {
        case 0: v = q; break;
        case 1: v = d - t * q; break;
        case 2: v = (1.0 + t * t) * q - t * d; break;
        case 3: v = (t * t + 2.0) * d - (t * t * t + 3.0 * t) * q; break;
        default:
            throw std::invalid_argument("partial_moment_plus: order must be 0, 1, 2 or 3");
    }
    return v < 0.0 ? 0.0 : v;  // clip far-tail cancellation dust
}

// E |Z - x|^3 = E (Z - x)_+^3 + E (x - Z)_+^3; the second term is
// E (Z - (-x))_+^3 by symmetry of Z, so the function is even by construction.
inline double abs_moment3(double x) {
    return partial_moment_plus(x, 3) + partial_moment_plus(-x, 3);
}

// E (sigma Z + c - t)_+^alpha, alpha >= 3. alpha = 3 goes through the closed
// form; fractional alpha through quadrature at relative target 1e-13.
inline double expect_hinge(const GaussianAffine& ga, double t, double alpha) {
    if (!(std::isfinite(t) && std::isfinite(alpha)))
        throw std::invalid_argument("expect_hinge: t and alpha must be finite");
    if (alpha < 3.0)
        throw std::invalid_argument("expect_hinge: exponent must be at least 3");
    if (ga.scale == 0.0) return std::pow(std::max(ga.shift - t, 0.0), alpha);
    const double u = (t - ga.shift) / ga.scale;
    if (alpha == 3.0) {
        if (u >= 40.0) return 0.0;  // kink is 40 sigma above the mean
        if (u <= -40.0) {
            // kink is 40 sigma below: the positive part never binds, so this
            // is the plain third moment w^3 + 3 sigma^2 w, w = c - t. Avoids
            // overflow of u^3 for tiny scales.
            const double w = ga.shift - t;
            return w * w * w + 3.0 * ga.scale * ga.scale * w;
        }
        const double s3 = ga.scale * ga.scale * ga.scale;
        return s3 * partial_moment_plus(u, 3);
    }
    return std::pow(ga.scale, alpha) * detail::partial_moment_plus_quad(u, alpha);
}

// E exp(lambda (sigma Z + c)) = exp(lambda c + lambda^2 sigma^2 / 2).
// Overflow is reported as IEEE +infinity, which is the documented flag.
inline double expect_exp(const GaussianAffine& ga, double lambda) {
    if (!std::isfinite(lambda) || lambda < 0.0)
        throw std::invalid_argument("expect_exp: rate must be finite and nonnegative");
    return std::exp(lambda * ga.shift + 0.5 * lambda * lambda * ga.scale * ga.scale);
}

}  // namespace rosenthal3
