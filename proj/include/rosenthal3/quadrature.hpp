#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rosenthal3 {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  // accumulated local error estimates (upper-ish bound)
};

namespace detail {

// Gauss-Kronrod 15(7) nodes and weights on [-1, 1]; the Gauss subset sits at
// the odd-indexed Kronrod nodes. The difference between the two rules is the
// local error estimate.
inline constexpr double kGK15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};

inline constexpr double kGK15KronrodW[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};

inline constexpr double kGK15GaussW[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <class F>
QuadratureResult gk15(F&& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double kronrod = 0.0;
    double gauss = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dx = half * kGK15Nodes[i];
        const double fl = f(mid - dx);
        const double fr = f(mid + dx);
        const double pair = (i == 7) ? fl : fl + fr;  // center node counted once
        kronrod += kGK15KronrodW[i] * pair;
        if (i % 2 == 1) gauss += kGK15GaussW[i / 2] * pair;  // G7 = odd Kronrod nodes
    }
    // |K - G| tracks the error of the 7-point rule, which dominates the error
    // of the 15-point value we return, so it is a conservative estimate.
    return {kronrod * half, std::abs(kronrod - gauss) * std::abs(half)};
}

}  // namespace detail

// Adaptive bisection on top of the 15(7) pair. Each subinterval must meet its
// share of the global tolerance; the recursion is an explicit stack so the
// traversal (and therefore the rounding) is deterministic.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b,
                                    double rel_tol = 1e-12,
                                    double abs_tol = 1e-300,
                                    std::size_t max_intervals = 4096) {
    if (!(std::isfinite(a) && std::isfinite(b)))
        throw std::invalid_argument("integrate_adaptive: endpoints must be finite");
    if (a == b) return {0.0, 0.0};

    const QuadratureResult whole = detail::gk15(f, a, b);
    double target = std::max(abs_tol, rel_tol * std::abs(whole.value));
    if (whole.error <= target) return whole;

    struct Piece {
        double lo, hi, tol;
    };
    std::vector<Piece> stack;
    stack.push_back({a, b, target});
    QuadratureResult total;
    std::size_t used = 0;
    const double min_width = std::abs(b - a) * 1e-14;
    while (!stack.empty()) {
        const Piece p = stack.back();
        stack.pop_back();
        const QuadratureResult r = detail::gk15(f, p.lo, p.hi);
        const double width = p.hi - p.lo;
        if (r.error <= p.tol || width <= min_width || ++used >= max_intervals) {
            total.value += r.value;
            total.error += r.error;
            continue;
        }
        const double mid = 0.5 * (p.lo + p.hi);
        // push right first so the left half is processed next (left-to-right sum)
        stack.push_back({mid, p.hi, 0.5 * p.tol});
        stack.push_back({p.lo, mid, 0.5 * p.tol});
    }
    return total;
}

}  // namespace rosenthal3
