#pragma once

// Acceptance suite: ten deterministic criteria covering the closed forms, the
// soundness sweeps, the mixture machinery and the Monte Carlo harness. Each
// criterion prints one pass/fail line; run_acceptance returns false if any
// criterion (or its runtime budget, where one is stated) fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rosenthal3/bounds.hpp"
#include "rosenthal3/function_class.hpp"
#include "rosenthal3/mixture.hpp"
#include "rosenthal3/normal.hpp"
#include "rosenthal3/verification.hpp"

namespace rosenthal3 {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
};

namespace detail {

inline std::string fmt(double v, int digits = 10) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

template <class Body>
CriterionResult run_criterion(int id, const std::string& name, double budget_seconds,
                              Body&& body) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
        ok = false;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && budget_seconds > 0.0 && r.seconds >= budget_seconds) {
        ok = false;
        detail += " [runtime budget " + fmt(budget_seconds, 3) + " s exceeded]";
    }
    r.pass = ok;
    r.detail = detail;
    return r;
}

// Shared sweep fixtures for criteria 4, 5 and 6.
inline const std::vector<GeneratedSpec>& sweep_specs() {
    static const std::vector<GeneratedSpec> specs = [] {
        std::vector<GeneratedSpec> out;
        out.reserve(200);
        for (std::uint64_t k = 0; k < 200; ++k) {
            const std::uint64_t seed = 2000 + k;
            const std::size_t n_vars =
                1 + std::size_t(uniform01(seed, 0xBEEF, 1) * 12.0) % 12;
            const double beta_target =
                std::pow(10.0, -3.0 + 3.0 * uniform01(seed, 0xBEEF, 2));
            out.push_back(random_valid_spec(seed, n_vars, beta_target));
        }
        return out;
    }();
    return specs;
}

inline const double kSweepThresholds[5] = {-2.0, -1.0, 0.0, 1.0, 2.0};

}  // namespace detail

inline CriterionResult criterion_rounded_constants() {
    return detail::run_criterion(1, "rounded constants for p = 1 and p = 2", 1.0,
                                 [](std::string& detail) {
        const BoundResult b1 = corollary_bound(1.0, 1.746, Constraints(0.0));
        const double r1 = sup_ratio(1.0, 1.746);
        const BoundResult b2 = corollary_bound(2.0, 0.639, Constraints(0.0));
        const double r2 = sup_ratio(2.0, 0.639);
        detail = "p=1: " + detail::fmt(b1.value) + " / coeff " + detail::fmt(r1) +
                 "; p=2: " + detail::fmt(b2.value) + " / coeff " + detail::fmt(r2);
        return std::abs(b1.value - 0.514) <= 1e-3 && std::abs(r1 - 0.0486) <= 5e-5 &&
               std::abs(b2.value - 0.555) <= 1e-3 && std::abs(r2 - 0.232) <= 5e-4;
    });
}

inline CriterionResult criterion_sup_ratio_grid() {
    return detail::run_criterion(2, "sup-ratio closed form vs 1e6-point grid", 30.0,
                                 [](std::string& detail) {
        constexpr std::size_t kGrid = 1000000;
        static std::vector<double> us;  // shared grid: {0} handled separately
        const double lo = std::log(1e-4), hi = std::log(1e4);
        if (us.empty()) {
            us.resize(kGrid);
            for (std::size_t i = 0; i < kGrid; ++i)
                us[i] = std::exp(lo + (hi - lo) * double(i) / double(kGrid - 1));
        }
        double worst = 0.0;
        for (std::uint64_t k = 0; k < 50; ++k) {
            const double p = 0.1 + 2.8 * detail::uniform01(1000 + k, 1, 1);
            const double a =
                std::exp(std::log(0.05) +
                         (std::log(20.0) - std::log(0.05)) * detail::uniform01(1000 + k, 1, 2));
            const double closed = sup_ratio(p, a);
            double grid_max = 0.0;  // the u = 0 grid point contributes 0
            for (std::size_t i = 0; i < kGrid; ++i) {
                const double lnu = lo + (hi - lo) * double(i) / double(kGrid - 1);
                const double base = us[i] + a;
                const double v = std::exp(p * lnu) / (base * base * base);
                if (v > grid_max) grid_max = v;
            }
            worst = std::max(worst, std::abs(closed - grid_max) / closed);
            if (closed < grid_max - 1e-15) {
                detail = "grid exceeded the closed form at p=" + detail::fmt(p);
                return false;
            }
        }
        detail = "50 pairs, worst relative gap " + detail::fmt(worst, 3);
        return worst <= 1e-6;
    });
}

inline CriterionResult criterion_partial_moments() {
    return detail::run_criterion(3, "partial-moment closed forms vs quadrature", 30.0,
                                 [](std::string& detail) {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double t = -8.0 + 16.0 * double(i) / 999.0;
            for (int k = 0; k <= 3; ++k) {
                const double closed = partial_moment_plus(t, k);
                const double quad = detail::partial_moment_plus_quad(t, double(k));
                const double err = std::abs(closed - quad) / (1.0 + std::abs(quad));
                worst = std::max(worst, err);
            }
        }
        detail = "4000 comparisons, worst scaled error " + detail::fmt(worst, 3);
        return worst <= 1e-10;
    });
}

inline CriterionResult criterion_cube_plus_sweep() {
    return detail::run_criterion(4, "cube-plus soundness on 200 random specs", 60.0,
                                 [](std::string& detail) {
        std::size_t violations = 0;
        double min_margin = std::numeric_limits<double>::infinity();
        for (const GeneratedSpec& g : detail::sweep_specs()) {
            const std::vector<Atom> dist = sum_distribution(g.spec);
            for (double x : detail::kSweepThresholds) {
                double exact = 0.0;
                for (const Atom& a : dist) {
                    const double w = std::max(a.value - x, 0.0);
                    exact += a.prob * w * w * w;
                }
                const double bound = partial_moment_plus(x, 3) + g.achieved_beta;
                min_margin = std::min(min_margin, bound - exact);
                if (exact > bound + 1e-12) ++violations;
            }
        }
        detail = "1000 checks, min margin " + detail::fmt(min_margin, 4) +
                 ", violations " + std::to_string(violations);
        return violations == 0;
    });
}

inline CriterionResult criterion_abs_cube_sweep() {
    return detail::run_criterion(5, "abs-cube soundness on 200 zero-mean specs", 60.0,
                                 [](std::string& detail) {
        std::size_t violations = 0;
        double min_margin = std::numeric_limits<double>::infinity();
        for (const GeneratedSpec& g : detail::sweep_specs()) {
            const DistributionSpec centered = center_spec(g.spec);
            const ConstraintReport rep = check_conditions(centered, 1e18);
            const std::vector<Atom> dist = sum_distribution(centered);
            for (double x : detail::kSweepThresholds) {
                double exact = 0.0;
                for (const Atom& a : dist) {
                    const double w = std::abs(a.value - x);
                    exact += a.prob * w * w * w;
                }
                const double bound = abs_moment3(x) + rep.abs_third_total;
                min_margin = std::min(min_margin, bound - exact);
                if (exact > bound + 1e-12) ++violations;
            }
        }
        detail = "1000 checks, min margin " + detail::fmt(min_margin, 4) +
                 ", violations " + std::to_string(violations);
        return violations == 0;
    });
}

inline CriterionResult criterion_mean_plus_sharpness() {
    return detail::run_criterion(6, "mean-plus bound sharp at the two-point law", 0.0,
                                 [](std::string& detail) {
        DistributionSpec attaining;
        attaining.variables.emplace_back(std::vector<Atom>{{-1.0, 0.5}, {1.0, 0.5}});
        const double exact = exact_expectation_fn(attaining, [](double s) {
            return std::max(s, 0.0);
        });
        const double bound = mean_plus_bound(Constraints(1.0)).value;
        if (std::abs(exact - 0.5) > 1e-12 || std::abs(0.5 - bound) > 1e-12) {
            detail = "attaining spec gives " + detail::fmt(exact, 17);
            return false;
        }
        std::size_t violations = 0;
        double worst = 0.0;
        for (const GeneratedSpec& g : detail::sweep_specs()) {
            const double v = exact_expectation_fn(g.spec, [](double s) {
                return std::max(s, 0.0);
            });
            worst = std::max(worst, v);
            if (v > 0.5 + 1e-12) ++violations;
        }
        detail = "attained 0.5 exactly; sweep max E S_+ = " + detail::fmt(worst, 6) +
                 ", violations " + std::to_string(violations);
        return violations == 0;
    });
}

inline CriterionResult criterion_mixture_domination() {
    return detail::run_criterion(7, "mixture dominates truncated expectations", 120.0,
                                 [](std::string& detail) {
        const F3Function f = F3Function::hinge(1.0, 0.0, 3.0);
        std::size_t checks = 0, violations = 0;
        double min_margin = std::numeric_limits<double>::infinity();
        for (std::uint64_t k = 0; k < 100; ++k) {
            const std::uint64_t seed = 5000 + k;
            const std::size_t n_vars =
                1 + std::size_t(detail::uniform01(seed, 0xBEEF, 1) * 8.0) % 8;
            const double beta_target =
                std::pow(10.0, -3.0 + 2.7 * detail::uniform01(seed, 0xBEEF, 2));
            const GeneratedSpec g = random_valid_spec(seed, n_vars, beta_target);
            for (double y : {2.0, 5.0, 10.0}) {
                const DistributionSpec tspec = truncate_spec(g.spec, y);
                const double beta_y = check_conditions(tspec, 1e18).beta_total;
                const BoundResult mix =
                    mixture_expectation(f, MixtureParams(beta_y, y), 1e-10);
                const double exact = exact_expectation(tspec, f);
                ++checks;
                min_margin = std::min(min_margin, mix.value - exact);
                if (exact > mix.value + 1e-9) ++violations;
            }
        }
        detail = std::to_string(checks) + " checks, min margin " +
                 detail::fmt(min_margin, 4) + ", violations " + std::to_string(violations);
        return violations == 0;
    });
}

inline CriterionResult criterion_mixture_convergence() {
    return detail::run_criterion(8, "mixture gap shrinks toward the theorem bound", 0.0,
                                 [](std::string& detail) {
        const F3Function f = F3Function::hinge(1.0, 0.0, 3.0);
        const std::vector<ProfilePoint> prof =
            convergence_profile(f, 0.2, {10.0, 100.0, 1000.0});
        const double g0 = std::abs(prof[0].gap);
        const double g1 = std::abs(prof[1].gap);
        const double g2 = std::abs(prof[2].gap);
        detail = "|gaps| = " + detail::fmt(g0, 6) + " > " + detail::fmt(g1, 6) +
                 " > " + detail::fmt(g2, 6);
        return g0 > g1 && g1 > g2 && g2 < 1e-2;
    });
}

inline CriterionResult criterion_extremal_approach() {
    return detail::run_criterion(9, "extremal spike specs approach the cube-plus bound", 0.0,
                                 [](std::string& detail) {
        std::vector<double> exact_values;
        double last_ratio = 0.0;
        for (std::size_t n_spikes : {2, 8, 32}) {
            const ExtremalSpec ex = extremal_spec(0.2, 2.0, n_spikes, 128, 1.0);
            const ConstraintReport rep = check_conditions(ex.spec, ex.effective_beta);
            if (!rep.satisfies) {
                detail = "extremal spec violates the hypotheses";
                return false;
            }
            const double exact = exact_expectation_fn(ex.spec, [](double s) {
                const double w = std::max(s, 0.0);
                return w * w * w;
            });
            const BoundResult bound = cube_plus_bound(0.0, Constraints(ex.effective_beta));
            if (exact > bound.value + 1e-12) {
                detail = "domination failed at n_spikes " + std::to_string(n_spikes);
                return false;
            }
            exact_values.push_back(exact);
            last_ratio = exact / bound.value;
        }
        for (std::size_t i = 1; i < exact_values.size(); ++i)
            if (exact_values[i] < exact_values[i - 1] - 1e-3) {
                detail = "sequence decreased beyond slack at step " + std::to_string(i);
                return false;
            }
        detail = "E(S+)^3 = " + detail::fmt(exact_values[0], 6) + ", " +
                 detail::fmt(exact_values[1], 6) + ", " + detail::fmt(exact_values[2], 6) +
                 "; final ratio " + detail::fmt(last_ratio, 4) + " (reported)";
        return true;
    });
}

inline CriterionResult criterion_monte_carlo() {
    return detail::run_criterion(10, "Monte Carlo agrees with exact expectations", 120.0,
                                 [](std::string& detail) {
        const F3Function f_even = F3Function::hinge(1.0, 0.0, 3.0);
        const F3Function f_odd = F3Function::hinge(0.5, -0.5, 3.0) +
                                 F3Function::affine(0.2, 0.1);
        std::size_t ok = 0;
        double worst_pull = 0.0;
        for (std::uint64_t k = 0; k < 50; ++k) {
            const std::uint64_t seed = 9000 + k;
            const std::size_t n_vars =
                1 + std::size_t(detail::uniform01(seed, 0xBEEF, 1) * 6.0) % 6;
            const double beta_target =
                std::pow(10.0, -3.0 + 2.85 * detail::uniform01(seed, 0xBEEF, 2));
            const GeneratedSpec g = random_valid_spec(seed, n_vars, beta_target);
            const F3Function& f = (k % 2 == 0) ? f_even : f_odd;
            const double exact = exact_expectation(g.spec, f);
            const MonteCarloEstimate mc =
                monte_carlo_expectation(g.spec, f, 1000000, seed);
            const double dev = std::abs(mc.estimate - exact);
            if (mc.std_error > 0.0) worst_pull = std::max(worst_pull, dev / mc.std_error);
            if (dev <= 4.0 * mc.std_error) ++ok;
        }
        detail = std::to_string(ok) + "/50 within 4 standard errors, worst pull " +
                 detail::fmt(worst_pull, 3);
        return ok >= 48;  // at least 95%
    });
}

inline std::vector<CriterionResult> run_acceptance_criteria() {
    return {criterion_rounded_constants(), criterion_sup_ratio_grid(),
            criterion_partial_moments(),   criterion_cube_plus_sweep(),
            criterion_abs_cube_sweep(),    criterion_mean_plus_sharpness(),
            criterion_mixture_domination(), criterion_mixture_convergence(),
            criterion_extremal_approach(), criterion_monte_carlo()};
}

inline bool run_acceptance(std::ostream& out) {
    bool all = true;
    for (const CriterionResult& r : run_acceptance_criteria()) {
        all &= r.pass;
        out << (r.pass ? "[PASS]" : "[FAIL]") << " criterion " << r.id << ": " << r.name
            << " (" << detail::fmt(r.seconds, 3) << " s) - " << r.detail << "\n";
    }
    out << (all ? "acceptance: all criteria passed" : "acceptance: FAILURES present")
        << "\n";
    return all;
}

}  // namespace rosenthal3
