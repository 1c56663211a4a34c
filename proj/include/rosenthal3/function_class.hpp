#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rosenthal3/normal.hpp"

namespace rosenthal3 {

// Value in [0, +inf]; carries the limit of f''' at +infinity, which is
// finite only when every curved term is a hinge of exponent exactly 3.
class ExtendedReal {
  public:
    explicit ExtendedReal(double v) : value_(v) {
        if (std::isnan(v) || v < 0.0)
            throw std::invalid_argument("ExtendedReal: value must be in [0, +inf]");
    }
    static ExtendedReal infinity() {
        return ExtendedReal(std::numeric_limits<double>::infinity());
    }
    bool is_finite() const { return std::isfinite(value_); }
    double value() const { return value_; }

  private:
    double value_;
};

struct HingeTerm {
    double coeff;      // c >= 0
    double threshold;  // t, any real
    double exponent;   // alpha >= 3
};

struct ExpTerm {
    double coeff;  // c >= 0
    double rate;   // lambda >= 0
};

// The cone generated by a + b x (b >= 0), c (x - t)_+^alpha (c >= 0,
// alpha >= 3) and c e^(lambda x) (c >= 0, lambda >= 0): every member has
// f, f', f'', f''' nondecreasing. Construction normalizes: zero-coefficient
// terms are dropped and rate-0 exponentials fold into the intercept.
class F3Function {
  public:
    F3Function() = default;  // the zero function

    F3Function(double intercept, double slope, std::vector<HingeTerm> hinges,
               std::vector<ExpTerm> exps)
        : intercept_(intercept), slope_(slope) {
        if (!(std::isfinite(intercept) && std::isfinite(slope)))
            throw std::invalid_argument("F3Function: affine part must be finite");
        if (slope < 0.0)
            throw std::invalid_argument("F3Function: slope must be nonnegative");
        for (const HingeTerm& h : hinges) {
            if (!(std::isfinite(h.coeff) && std::isfinite(h.threshold) &&
                  std::isfinite(h.exponent)))
                throw std::invalid_argument("F3Function: hinge parameters must be finite");
            if (h.coeff < 0.0)
                throw std::invalid_argument("F3Function: hinge coefficient must be nonnegative");
            if (h.exponent < 3.0)
                throw std::invalid_argument("F3Function: hinge exponent must be at least 3");
            if (h.coeff > 0.0) hinges_.push_back(h);
        }
        for (const ExpTerm& e : exps) {
            if (!(std::isfinite(e.coeff) && std::isfinite(e.rate)))
                throw std::invalid_argument("F3Function: exp parameters must be finite");
            if (e.coeff < 0.0)
                throw std::invalid_argument("F3Function: exp coefficient must be nonnegative");
            if (e.rate < 0.0)
                throw std::invalid_argument("F3Function: exp rate must be nonnegative");
            if (e.coeff == 0.0) continue;
            if (e.rate == 0.0)
                intercept_ += e.coeff;  // constant in disguise
            else
                exps_.push_back(e);
        }
    }

    static F3Function affine(double a, double b) { return F3Function(a, b, {}, {}); }
    static F3Function hinge(double c, double t, double alpha) {
        return F3Function(0.0, 0.0, {{c, t, alpha}}, {});
    }
    static F3Function exponential(double c, double lambda) {
        return F3Function(0.0, 0.0, {}, {{c, lambda}});
    }

    double intercept() const { return intercept_; }
    double slope() const { return slope_; }
    const std::vector<HingeTerm>& hinges() const { return hinges_; }
    const std::vector<ExpTerm>& exps() const { return exps_; }

    bool is_constant() const {
        return slope_ == 0.0 && hinges_.empty() && exps_.empty();
    }

    friend F3Function operator+(const F3Function& lhs, const F3Function& rhs) {
        std::vector<HingeTerm> h = lhs.hinges_;
        h.insert(h.end(), rhs.hinges_.begin(), rhs.hinges_.end());
        std::vector<ExpTerm> e = lhs.exps_;
        e.insert(e.end(), rhs.exps_.begin(), rhs.exps_.end());
        return F3Function(lhs.intercept_ + rhs.intercept_, lhs.slope_ + rhs.slope_,
                          std::move(h), std::move(e));
    }

  private:
    double intercept_ = 0.0;
    double slope_ = 0.0;
    std::vector<HingeTerm> hinges_;
    std::vector<ExpTerm> exps_;
};

// Pointwise value. Exponential terms may overflow; the IEEE +inf result is
// the documented flag for that.
inline double evaluate(const F3Function& f, double x) {
    if (!std::isfinite(x))
        throw std::invalid_argument("evaluate: argument must be finite");
    double v = f.intercept() + f.slope() * x;
    for (const HingeTerm& h : f.hinges()) {
        const double w = x - h.threshold;
        if (w <= 0.0) continue;
        v += (h.exponent == 3.0) ? h.coeff * w * w * w
                                 : h.coeff * std::pow(w, h.exponent);
    }
    for (const ExpTerm& e : f.exps()) v += e.coeff * std::exp(e.rate * x);
    return v;
}

// lim f'''(x) as x -> +inf. A hinge of exponent exactly 3 contributes 6c;
// any steeper hinge or any true exponential pushes the limit to +infinity.
// The classification is exact on the stored exponent.
inline ExtendedReal third_derivative_at_infinity(const F3Function& f) {
    double total = 0.0;
    for (const HingeTerm& h : f.hinges()) {
        if (h.exponent != 3.0) return ExtendedReal::infinity();
        total += 6.0 * h.coeff;
    }
    if (!f.exps().empty()) return ExtendedReal::infinity();
    return ExtendedReal(total);
}

// E f(sigma Z + c), term by term through the closed-form kernels.
inline double expect_gaussian_affine(const F3Function& f, const GaussianAffine& ga) {
    double v = f.intercept() + f.slope() * ga.shift;
    for (const HingeTerm& h : f.hinges())
        v += h.coeff * expect_hinge(ga, h.threshold, h.exponent);
    for (const ExpTerm& e : f.exps()) v += e.coeff * expect_exp(ga, e.rate);
    return v;
}

}  // namespace rosenthal3
