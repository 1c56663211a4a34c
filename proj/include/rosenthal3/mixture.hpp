#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "rosenthal3/bounds.hpp"
#include "rosenthal3/function_class.hpp"

namespace rosenthal3 {

// Parameters of the Gaussian-Poisson companion law: with N ~ Poisson(theta),
// theta = beta / y^3, the bound compares S against
//   sqrt(1 - beta/y) Z + y N - beta / y^2.
// Derived fields satisfy theta = beta / y^3 and drift = -theta * y exactly.
struct MixtureParams {
    double beta = 0.0;
    double y = 1.0;
    double theta = 0.0;
    double scale = 1.0;
    double drift = 0.0;

    MixtureParams(double beta_, double y_) : beta(beta_), y(y_) {
        if (!(std::isfinite(beta_) && beta_ >= 0.0))
            throw std::invalid_argument("MixtureParams: beta must be finite and nonnegative");
        if (!(std::isfinite(y_) && y_ > 0.0))
            throw std::invalid_argument("MixtureParams: y must be positive");
        if (!(y_ > beta_))
            throw std::invalid_argument("MixtureParams: requires y > beta");
        theta = beta / (y * y * y);
        scale = std::sqrt(1.0 - beta / y);
        drift = -theta * y;
    }
};

struct ProfilePoint {
    double y = 0.0;
    double mixture_value = 0.0;
    double theorem_value = 0.0;
    double gap = 0.0;  // mixture_value - theorem_value
};

namespace detail {

inline constexpr std::size_t kMixtureMaxTerms = 1000000;

// log-space Poisson weight, exact at the extremes (underflow to 0 is fine).
inline double poisson_weight(std::size_t j, double theta) {
    if (theta == 0.0) return j == 0 ? 1.0 : 0.0;
    return std::exp(-theta + double(j) * std::log(theta) -
                    std::lgamma(double(j) + 1.0));
}

// Per-term majorant of |E f(scale Z + y j + drift)| as a sum of components
// whose consecutive-term ratios are exact and nonincreasing in j:
//   monomial: C (u + s)^d with u = y j, C, s >= 0, d >= 0
//   exponential: exp(logK + lambda u)
// Monomials come from |a + b m| <= (|a| + b|drift|) + b u and from
//   E (scale Z + m - t)_+^alpha <= E (scale|Z| + u + |drift - t|)^alpha,
// expanded exactly for alpha = 3 (E|Z| = sqrt(2/pi), E|Z|^3 = 2 sqrt(2/pi))
// and bounded by 2^(alpha-1) (scale^alpha E|Z|^alpha + w^alpha) otherwise,
// with E|Z|^alpha = 2^(alpha/2) Gamma((alpha+1)/2) / sqrt(pi).
struct SeriesMajorant {
    struct Monomial {
        double coeff, shift, degree;
    };
    struct Exponential {
        double log_coeff, rate;
    };
    std::vector<Monomial> monomials;
    std::vector<Exponential> exponentials;
    double y = 1.0;

    SeriesMajorant(const F3Function& f, const MixtureParams& mp) : y(mp.y) {
        const double s = mp.scale;
        const double adrift = std::abs(mp.drift);
        if (f.intercept() != 0.0 || f.slope() > 0.0) {
            monomials.push_back({std::abs(f.intercept()) + f.slope() * adrift, 0.0, 0.0});
            if (f.slope() > 0.0) monomials.push_back({f.slope(), 0.0, 1.0});
        }
        for (const HingeTerm& h : f.hinges()) {
            const double st = std::abs(mp.drift - h.threshold);
            if (h.exponent == 3.0) {
                monomials.push_back({h.coeff, st, 3.0});
                monomials.push_back({3.0 * h.coeff * kSqrt2OverPi * s, st, 2.0});
                monomials.push_back({3.0 * h.coeff * s * s, st, 1.0});
                monomials.push_back({2.0 * h.coeff * kSqrt2OverPi * s * s * s, st, 0.0});
            } else {
                constexpr double kLog2 = 0.69314718055994530941723212145818;
                constexpr double kLogPi = 1.1447298858494001741434273513531;
                const double split = std::pow(2.0, h.exponent - 1.0);
                const double abs_mom = std::exp(0.5 * h.exponent * kLog2 +
                                                std::lgamma(0.5 * (h.exponent + 1.0)) -
                                                0.5 * kLogPi);
                monomials.push_back({h.coeff * split, st, h.exponent});
                monomials.push_back(
                    {h.coeff * split * std::pow(s, h.exponent) * abs_mom, 0.0, 0.0});
            }
        }
        for (const ExpTerm& e : f.exps()) {
            exponentials.push_back({std::log(e.coeff) + e.rate * mp.drift +
                                        0.5 * e.rate * e.rate * s * s,
                                    e.rate});
        }
    }

    double value(std::size_t j) const {
        const double u = y * double(j);
        double m = 0.0;
        for (const Monomial& mono : monomials)
            m += mono.coeff * std::pow(u + mono.shift, mono.degree);
        for (const Exponential& e : exponentials)
            m += std::exp(e.log_coeff + e.rate * u);
        return m;
    }

    // Upper bound on value(j+1) / value(j), nonincreasing in j. Valid for
    // j >= 1 (u > 0 keeps every monomial base positive).
    double step_ratio(std::size_t j) const {
        const double u0 = y * double(j);
        const double u1 = y * double(j + 1);
        double r = 0.0;
        for (const Monomial& mono : monomials) {
            const double ratio =
                mono.degree == 0.0
                    ? 1.0
                    : std::pow((u1 + mono.shift) / (u0 + mono.shift), mono.degree);
            r = std::max(r, ratio);
        }
        for (const Exponential& e : exponentials)
            r = std::max(r, std::exp(e.rate * y));
        return r;
    }
};

struct SeriesRun {
    double partial = 0.0;
    std::size_t truncation_index = 0;
    double tail_bound = 0.0;
    double abs_partial = 0.0;
};

// Sum j = 0..J of pois(j; theta) E f(scale Z + y j + drift), stopping at the
// smallest J whose certified geometric tail bound is <= eps: with
//   rho(j) = theta / (j + 1) * step_ratio(j)   (nonincreasing),
// once rho(J+1) <= 1/2 the tail beyond J is at most
//   U(J+1) / (1 - rho(J+1)),  U(j) = pois(j) * majorant(j).
inline SeriesRun mixture_series(const F3Function& f, const MixtureParams& mp,
                                double eps) {
    if (!(std::isfinite(eps) && eps > 0.0))
        throw std::invalid_argument("mixture_series: eps must be positive");
    SeriesRun run;
    if (f.is_constant()) {    // the weights sum to one, the series is exact
        run.partial = f.intercept();
        run.abs_partial = std::abs(f.intercept());
        return run;
    }
    if (mp.theta == 0.0) {    // single atom at j = 0
        run.partial = expect_gaussian_affine(f, GaussianAffine(mp.scale, mp.drift));
        run.abs_partial = std::abs(run.partial);
        return run;
    }
    const SeriesMajorant major(f, mp);
    for (std::size_t j = 0; j <= kMixtureMaxTerms; ++j) {
        const double term =
            poisson_weight(j, mp.theta) *
            expect_gaussian_affine(f, GaussianAffine(mp.scale, mp.y * double(j) + mp.drift));
        run.partial += term;
        run.abs_partial += std::abs(term);
        const double rho = mp.theta / double(j + 2) * major.step_ratio(j + 1);
        if (rho <= 0.5) {
            const double tail =
                poisson_weight(j + 1, mp.theta) * major.value(j + 1) / (1.0 - rho);
            if (tail <= eps) {
                run.truncation_index = j;
                run.tail_bound = tail;
                return run;
            }
        }
    }
    throw std::runtime_error(
        "mixture_series: eps target unreachable within 1000000 terms");
}

}  // namespace detail

// Certified evaluation of E f(scale Z + y N + drift), N ~ Poisson(theta).
// The reported value is partial sum + tail bound, so it always sits on or
// above the infinite sum; the infinite sum lies within [value - 2 *
// error_budget, value], and error_budget <= eps. Quadrature slack from
// fractional hinge exponents is folded into the budget as well.
inline BoundResult mixture_expectation(const F3Function& f, const MixtureParams& mp,
                                       double eps = 1e-9) {
    const detail::SeriesRun run = detail::mixture_series(f, mp, eps);
    BoundResult r;
    r.inequality_id = Inequality::mixture;
    double slack = run.tail_bound;
    bool fractional = false;
    for (const HingeTerm& h : f.hinges()) fractional |= h.exponent != 3.0;
    if (fractional) slack += 1e-12 * run.abs_partial;
    r.value = run.partial + slack;
    r.error_budget = slack;
    r.parameters["beta"] = mp.beta;
    r.parameters["y"] = mp.y;
    r.parameters["theta"] = mp.theta;
    r.parameters["scale"] = mp.scale;
    r.parameters["drift"] = mp.drift;
    r.parameters["eps"] = eps;
    r.parameters["truncation_index"] = double(run.truncation_index);
    if (mp.beta == 0.0) r.note = "beta = 0 taken as the continuous extension";
    return r;
}

// Index of the last term the certified truncation includes.
inline std::size_t truncation_index(const F3Function& f, const MixtureParams& mp,
                                    double eps = 1e-9) {
    return detail::mixture_series(f, mp, eps).truncation_index;
}

// Gap between the companion bound at finite y and the y -> infinity limit
// E f(Z) + f'''(inf-) beta / 6, over a grid of y values. Requires finite
// f''' so the limit exists.
inline std::vector<ProfilePoint> convergence_profile(const F3Function& f, double beta,
                                                     const std::vector<double>& y_grid) {
    const ExtendedReal f3 = third_derivative_at_infinity(f);
    if (!f3.is_finite())
        throw std::invalid_argument("convergence_profile: f''' must be finite at infinity");
    const double limit = expect_gaussian_affine(f, GaussianAffine(1.0, 0.0)) +
                         f3.value() / 6.0 * beta;
    std::vector<ProfilePoint> out;
    out.reserve(y_grid.size());
    for (double y : y_grid) {
        const MixtureParams mp(beta, y);  // validates y > beta
        const BoundResult b = mixture_expectation(f, mp, 1e-10);
        out.push_back({y, b.value, limit, b.value - limit});
    }
    return out;
}

}  // namespace rosenthal3
