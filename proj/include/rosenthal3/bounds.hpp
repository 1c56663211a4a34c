#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "rosenthal3/function_class.hpp"
#include "rosenthal3/normal.hpp"

namespace rosenthal3 {

enum class Inequality { theorem, cube_plus, abs_cube, corollary, mean_plus, mixture };

inline const char* inequality_name(Inequality id) {
    switch (id) {
        case Inequality::theorem: return "theorem";
        case Inequality::cube_plus: return "cube_plus";
        case Inequality::abs_cube: return "abs_cube";
        case Inequality::corollary: return "corollary";
        case Inequality::mean_plus: return "mean_plus";
        case Inequality::mixture: return "mixture";
    }
    return "unknown";
}

// The hypotheses on X_1..X_n: E X_i <= 0, sum E X_i^2 <= 1, sum E (X_i)_+^3
// <= beta. beta = 0 is accepted as the continuous extension of the beta > 0
// statements; bound results carry a note when that extension is in play.
// abs_cube additionally requires exact zero means.
struct Constraints {
    double beta;
    double variance_budget = 1.0;
    bool means_nonpositive = true;
    bool zero_means = false;

    explicit Constraints(double beta_, bool zero_means_ = false)
        : beta(beta_), zero_means(zero_means_) {
        if (!std::isfinite(beta_) || beta_ < 0.0)
            throw std::invalid_argument("Constraints: beta must be finite and nonnegative");
    }
};

struct BoundResult {
    double value = 0.0;
    Inequality inequality_id = Inequality::theorem;
    std::map<std::string, double> parameters;
    double error_budget = 0.0;  // certified slack already included in value
    std::string note;
};

namespace detail {

inline void note_beta_extension(BoundResult& r, const Constraints& c) {
    if (c.beta == 0.0) {
        if (!r.note.empty()) r.note += "; ";
        r.note += "beta = 0 taken as the continuous extension";
    }
}

}  // namespace detail

// E f(S) <= E f(Z) + f'''(inf-) beta / 6. Infinite third derivative makes the
// right side trivially +infinity; that is reported, not rejected.
inline BoundResult theorem_bound(const F3Function& f, const Constraints& c) {
    BoundResult r;
    r.inequality_id = Inequality::theorem;
    r.parameters["beta"] = c.beta;
    const ExtendedReal f3 = third_derivative_at_infinity(f);
    r.parameters["f3_at_infinity"] = f3.value();
    if (!f3.is_finite()) {
        r.value = std::numeric_limits<double>::infinity();
        r.note = "f''' is unbounded, the bound is trivial";
        return r;
    }
    r.value = expect_gaussian_affine(f, GaussianAffine(1.0, 0.0)) +
              f3.value() / 6.0 * c.beta;
    detail::note_beta_extension(r, c);
    return r;
}

// E (S - x)_+^3 <= E (Z - x)_+^3 + beta (the hinge at x has f''' = 6).
inline BoundResult cube_plus_bound(double x, const Constraints& c) {
    if (!std::isfinite(x))
        throw std::invalid_argument("cube_plus_bound: x must be finite");
    BoundResult r;
    r.inequality_id = Inequality::cube_plus;
    r.value = partial_moment_plus(x, 3) + c.beta;
    r.parameters["x"] = x;
    r.parameters["beta"] = c.beta;
    detail::note_beta_extension(r, c);
    return r;
}

// Zero-mean refinement: E |S - x|^3 <= E |Z - x|^3 + sum E |X_i|^3. The caller
// supplies the summed absolute third moments of its variables.
inline BoundResult abs_cube_bound(double x, double sum_abs_third, const Constraints& c) {
    if (!std::isfinite(x))
        throw std::invalid_argument("abs_cube_bound: x must be finite");
    if (!std::isfinite(sum_abs_third) || sum_abs_third < 0.0)
        throw std::invalid_argument("abs_cube_bound: sum of absolute third moments must be nonnegative");
    if (!c.zero_means)
        throw std::invalid_argument("abs_cube_bound: requires the zero-means hypothesis");
    BoundResult r;
    r.inequality_id = Inequality::abs_cube;
    r.value = abs_moment3(x) + sum_abs_third;
    r.parameters["x"] = x;
    r.parameters["sum_abs_third"] = sum_abs_third;
    r.parameters["beta"] = c.beta;
    return r;
}

// sup_{u >= 0} u^p / (u + a)^3 = p^p (3-p)^(3-p) / (27 a^(3-p)), 0 < p < 3,
// attained at u = a p / (3 - p).
inline double sup_ratio(double p, double a) {
    if (!(std::isfinite(p) && p > 0.0 && p < 3.0))
        throw std::invalid_argument("sup_ratio: p must lie in (0, 3)");
    if (!(std::isfinite(a) && a > 0.0))
        throw std::invalid_argument("sup_ratio: a must be positive");
    return std::pow(p, p) * std::pow(3.0 - p, 3.0 - p) / (27.0 * std::pow(a, 3.0 - p));
}

// E S_+^p <= sup_ratio(p, a) * (E (Z + a)_+^3 + beta): chain S_+^p <=
// sup_ratio * (S + a)_+^3 pointwise, then bound the cubed hinge at -a.
inline BoundResult corollary_bound(double p, double a, const Constraints& c) {
    BoundResult r;
    r.inequality_id = Inequality::corollary;
    const double ratio = sup_ratio(p, a);
    const double base = partial_moment_plus(-a, 3);
    r.value = ratio * (base + c.beta);
    r.parameters["p"] = p;
    r.parameters["a"] = a;
    r.parameters["beta"] = c.beta;
    r.parameters["coefficient"] = ratio;        // multiplies beta
    r.parameters["constant"] = ratio * base;    // the beta = 0 part
    detail::note_beta_extension(r, c);
    return r;
}

namespace detail {

// Golden-section on ell = log a with automatic downhill bracket expansion.
// Stops when the bracket maps to an interval of width <= a_tol in a itself.
template <class F>
double minimize_log_bracketed(F&& g, double ell0, double a_tol) {
    double lo = ell0 - 1.0, mid = ell0, hi = ell0 + 1.0;
    double glo = g(lo), gmid = g(mid), ghi = g(hi);
    for (int i = 0; i < 200 && glo <= gmid; ++i) {
        hi = mid; ghi = gmid;
        mid = lo; gmid = glo;
        lo -= 1.0 + 0.5 * i;
        glo = g(lo);
    }
    for (int i = 0; i < 200 && ghi <= gmid; ++i) {
        lo = mid; glo = gmid;
        mid = hi; gmid = ghi;
        hi += 1.0 + 0.5 * i;
        ghi = g(hi);
    }
    if (glo <= gmid || ghi <= gmid)
        throw std::runtime_error("minimize_log_bracketed: failed to bracket a minimum");

    constexpr double kInvPhi = 0.61803398874989484820;
    double c = hi - kInvPhi * (hi - lo);
    double d = lo + kInvPhi * (hi - lo);
    double gc = g(c), gd = g(d);
    for (int i = 0; i < 500 && std::exp(hi) - std::exp(lo) > a_tol; ++i) {
        if (gc < gd) {
            hi = d; d = c; gd = gc;
            c = hi - kInvPhi * (hi - lo);
            gc = g(c);
        } else {
            lo = c; c = d; gc = gd;
            d = lo + kInvPhi * (hi - lo);
            gd = g(d);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

struct OptimizedCorollary {
    double a_star = 0.0;
    BoundResult bound;
};

// Minimize a -> corollary_bound(p, a, c) over a > 0. The objective is smooth
// and unimodal in log a; the bracket is found by expanding downhill from a = 1
// and the golden section stops at absolute width 1e-6 in a.
inline OptimizedCorollary optimize_corollary(double p, const Constraints& c) {
    if (!(std::isfinite(p) && p > 0.0 && p < 3.0))
        throw std::invalid_argument("optimize_corollary: p must lie in (0, 3)");
    const auto objective = [&](double ell) {
        const double a = std::exp(ell);
        return sup_ratio(p, a) * (partial_moment_plus(-a, 3) + c.beta);
    };
    const double ell_star = detail::minimize_log_bracketed(objective, 0.0, 1e-6);
    OptimizedCorollary out;
    out.a_star = std::exp(ell_star);
    out.bound = corollary_bound(p, out.a_star, c);
    out.bound.parameters["optimized"] = 1.0;
    return out;
}

// E S_+ <= 1/2, from 4 u_+ <= (u + 1)^2 and the first two moment budgets.
// Attained by P(S = 1) = P(S = -1) = 1/2, so no beta term appears.
inline BoundResult mean_plus_bound(const Constraints& c) {
    BoundResult r;
    r.inequality_id = Inequality::mean_plus;
    r.value = 0.5;
    r.parameters["beta"] = c.beta;
    r.note = "attained by P(S = 1) = P(S = -1) = 1/2";
    return r;
}

}  // namespace rosenthal3
