#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "oracle.hpp"
#include "rosenthal3/bounds.hpp"
#include "rosenthal3/mixture.hpp"
#include "rosenthal3/verification.hpp"

using Catch::Approx;
using Catch::Matchers::ContainsSubstring;
using namespace rosenthal3;

namespace {

AtomicVariable fair_pm1() {
    return AtomicVariable({{-1.0, 0.5}, {1.0, 0.5}});
}

double plus_cube(double s) {
    const double p = std::max(s, 0.0);
    return p * p * p;
}

}  // namespace

TEST_CASE("atomic variables validate their support") {
    REQUIRE(fair_pm1().mean() == 0.0);
    REQUIRE(fair_pm1().second_moment() == 1.0);
    REQUIRE(fair_pm1().plus_third_moment() == 0.5);
    REQUIRE(fair_pm1().abs_third_moment() == 1.0);

    REQUIRE_THROWS_AS(AtomicVariable({}), std::invalid_argument);
    REQUIRE_THROWS_AS(AtomicVariable({{0.0, 0.6}, {1.0, 0.6}}), std::invalid_argument);
    REQUIRE_THROWS_AS(AtomicVariable({{0.0, 1.0}, {1.0, 0.0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(AtomicVariable({{0.0, 0.5}, {0.0, 0.5}}), std::invalid_argument);
    REQUIRE_THROWS_AS(
        AtomicVariable({{std::numeric_limits<double>::infinity(), 1.0}}),
        std::invalid_argument);

    SECTION("a tiny probability drift within tolerance is accepted") {
        REQUIRE_NOTHROW(AtomicVariable({{0.0, 0.5}, {1.0, 0.5 + 5e-13}}));
    }
}

TEST_CASE("constraint checking") {
    DistributionSpec spec;
    spec.variables.push_back(AtomicVariable({{-0.6, 0.5}, {0.4, 0.5}}));
    spec.variables.push_back(AtomicVariable({{-0.2, 0.8}, {0.5, 0.2}}));

    const ConstraintReport rep = check_conditions(spec, 0.2);
    REQUIRE(rep.means.size() == 2);
    REQUIRE(rep.means[0] == Approx(-0.1).margin(1e-15));
    REQUIRE(rep.means[1] == Approx(-0.06).margin(1e-15));
    REQUIRE(rep.means_nonpositive);
    REQUIRE(rep.variance_total ==
            Approx(0.5 * 0.36 + 0.5 * 0.16 + 0.8 * 0.04 + 0.2 * 0.25).epsilon(1e-14));
    REQUIRE(rep.beta_total == Approx(0.5 * 0.064 + 0.2 * 0.125).epsilon(1e-14));
    REQUIRE(rep.abs_third_total ==
            Approx(0.5 * 0.216 + 0.5 * 0.064 + 0.8 * 0.008 + 0.2 * 0.125)
                .epsilon(1e-14));
    REQUIRE(rep.variance_ok);
    REQUIRE(rep.beta_ok);
    REQUIRE(rep.satisfies);
    REQUIRE_FALSE(rep.zero_means);

    SECTION("beta budget violations are reported") {
        const ConstraintReport tight = check_conditions(spec, 0.02);
        REQUIRE_FALSE(tight.beta_ok);
        REQUIRE_FALSE(tight.satisfies);
    }

    SECTION("positive means are reported") {
        DistributionSpec bad;
        bad.variables.push_back(AtomicVariable({{-0.1, 0.4}, {0.2, 0.6}}));
        const ConstraintReport r = check_conditions(bad, 1.0);
        REQUIRE_FALSE(r.means_nonpositive);
        REQUIRE_FALSE(r.satisfies);
    }

    SECTION("variance over budget is reported") {
        DistributionSpec big;
        big.variables.push_back(AtomicVariable({{-1.5, 0.5}, {1.5, 0.5}}));
        const ConstraintReport r = check_conditions(big, 10.0);
        REQUIRE_FALSE(r.variance_ok);
        REQUIRE_FALSE(r.satisfies);
    }
}

TEST_CASE("exact convolution") {
    SECTION("two fair coins") {
        DistributionSpec spec;
        spec.variables.push_back(fair_pm1());
        spec.variables.push_back(fair_pm1());
        const std::vector<Atom> sum = sum_distribution(spec);
        REQUIRE(sum.size() == 3);
        REQUIRE(sum[0].value == -2.0);
        REQUIRE(sum[0].prob == 0.25);
        REQUIRE(sum[1].value == 0.0);
        REQUIRE(sum[1].prob == 0.5);
        REQUIRE(sum[2].value == 2.0);
        REQUIRE(sum[2].prob == 0.25);
    }

    SECTION("i.i.d. grouping matches the naive odometer on mixed specs") {
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            const GeneratedSpec base = random_valid_spec(seed, 3, 0.2);
            DistributionSpec spec;
            for (const AtomicVariable& v : base.spec.variables) {
                const std::size_t copies =
                    1 + std::size_t(3.0 * detail::uniform01(seed, 0x90, 1)) % 3;
                for (std::size_t c = 0; c < copies; ++c) spec.variables.push_back(v);
            }
            const F3Function f = F3Function::hinge(1.0, -0.3, 3.0);
            const double grouped = exact_expectation(spec, f);
            const double naive = oracle::naive_expectation(
                spec, [&](double s) { return evaluate(f, s); });
            REQUIRE(std::abs(grouped - naive) <= 1e-12 * (1.0 + std::abs(naive)));

            const double mass = exact_expectation_fn(spec, [](double) { return 1.0; });
            REQUIRE(mass == Approx(1.0).epsilon(1e-13));
        }
    }

    SECTION("moments of a large i.i.d. block stay accurate") {
        // 100 fair +-0.1 coins: E S^2 = 1, computed through binomial weights.
        DistributionSpec spec;
        for (int i = 0; i < 100; ++i)
            spec.variables.push_back(AtomicVariable({{-0.1, 0.5}, {0.1, 0.5}}));
        const double second =
            exact_expectation_fn(spec, [](double s) { return s * s; });
        REQUIRE(second == Approx(1.0).epsilon(1e-12));
    }

    SECTION("support explosion is rejected up front") {
        DistributionSpec spec;
        for (int i = 0; i < 25; ++i) {
            const double v = 0.1 + 0.001 * i;
            spec.variables.push_back(AtomicVariable({{-v, 0.5}, {v, 0.5}}));
        }
        REQUIRE_THROWS_AS(sum_distribution(spec), std::invalid_argument);
        REQUIRE_THROWS_WITH(sum_distribution(spec),
                            ContainsSubstring("exceeds the limit of 10000000"));
    }
}

TEST_CASE("truncation of specs") {
    DistributionSpec spec;
    spec.variables.push_back(AtomicVariable({{-1.0, 0.7}, {5.0, 0.3}}));

    SECTION("no-op when y clears the support") {
        const DistributionSpec same = truncate_spec(spec, 10.0);
        REQUIRE(same.variables[0].atoms()[1].value == 5.0);
        REQUIRE(same.variables[0].atoms()[1].prob == 0.3);
    }

    SECTION("values clip at y and probability is conserved") {
        const DistributionSpec cut = truncate_spec(spec, 1.0);
        REQUIRE(cut.variables[0].atoms().back().value == 1.0);
        REQUIRE(cut.variables[0].atoms().back().prob == 0.3);
        double total = 0.0;
        for (const Atom& a : cut.variables[0].atoms()) total += a.prob;
        REQUIRE(total == Approx(1.0).epsilon(1e-14));
    }

    SECTION("clipped atoms merge with existing ones") {
        DistributionSpec merge;
        merge.variables.push_back(AtomicVariable({{-1.0, 0.2}, {1.0, 0.5}, {3.0, 0.3}}));
        const DistributionSpec cut = truncate_spec(merge, 1.0);
        REQUIRE(cut.variables[0].atoms().size() == 2);
        REQUIRE(cut.variables[0].atoms()[1].value == 1.0);
        REQUIRE(cut.variables[0].atoms()[1].prob == 0.8);
    }

    SECTION("truncation shrinks the positive third moment monotonically") {
        double prev = 0.0;
        for (double y : {0.5, 1.0, 2.0, 5.0}) {
            const double b = check_conditions(truncate_spec(spec, y), 1e18).beta_total;
            REQUIRE(b >= prev - 1e-15);
            prev = b;
        }
        REQUIRE(prev == Approx(check_conditions(spec, 1e18).beta_total).epsilon(1e-14));
    }
}

TEST_CASE("monte carlo sampling") {
    DistributionSpec spec;
    spec.variables.push_back(fair_pm1());

    SECTION("same seed reproduces bitwise, different seeds differ") {
        const MonteCarloEstimate a =
            monte_carlo_expectation(spec, F3Function::hinge(1.0, 0.0, 3.0), 20000, 7);
        const MonteCarloEstimate b =
            monte_carlo_expectation(spec, F3Function::hinge(1.0, 0.0, 3.0), 20000, 7);
        const MonteCarloEstimate c =
            monte_carlo_expectation(spec, F3Function::hinge(1.0, 0.0, 3.0), 20000, 8);
        REQUIRE(a.estimate == b.estimate);
        REQUIRE(a.std_error == b.std_error);
        REQUIRE(a.estimate != c.estimate);
        REQUIRE(a.samples == 20000);
    }

    SECTION("estimate and standard error are calibrated") {
        // f(S) is Bernoulli(1/2) here, so sd = 0.5 and the standard error at
        // one million samples is almost exactly 0.0005.
        const MonteCarloEstimate e =
            monte_carlo_expectation(spec, F3Function::hinge(1.0, 0.0, 3.0), 1000000, 3);
        REQUIRE(e.std_error > 4e-4);
        REQUIRE(e.std_error < 6e-4);
        REQUIRE(std::abs(e.estimate - 0.5) <= 5.0 * e.std_error);
    }

    SECTION("degenerate variables have zero spread") {
        DistributionSpec point;
        point.variables.push_back(AtomicVariable({{-0.3, 1.0}}));
        const MonteCarloEstimate e =
            monte_carlo_expectation(point, F3Function::affine(0.0, 1.0), 500, 0);
        REQUIRE(e.estimate == -0.3);
        REQUIRE(e.std_error == 0.0);
    }

    SECTION("sample-size floor") {
        REQUIRE_THROWS_AS(
            monte_carlo_expectation(spec, F3Function::affine(0.0, 1.0), 99, 0),
            std::invalid_argument);
    }
}

TEST_CASE("random specs satisfy the hypotheses") {
    double min_beta = std::numeric_limits<double>::infinity();
    double max_beta = 0.0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const std::size_t n_vars =
            1 + std::size_t(12.0 * detail::uniform01(seed, 3, 1)) % 12;
        const double target =
            std::pow(10.0, -3.0 + 3.0 * detail::uniform01(seed, 3, 2));
        const GeneratedSpec g = random_valid_spec(seed, n_vars, target);
        REQUIRE(g.achieved_beta > 0.0);
        const ConstraintReport rep = check_conditions(g.spec, g.achieved_beta);
        REQUIRE(rep.satisfies);
        min_beta = std::min(min_beta, g.achieved_beta);
        max_beta = std::max(max_beta, g.achieved_beta);
    }
    REQUIRE(min_beta <= 2e-3);
    REQUIRE(max_beta >= 0.5);

    SECTION("explicit targets are honored from above") {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const double target = 0.001 * std::pow(2000.0, detail::uniform01(seed, 5, 5));
            const std::size_t n_vars =
                1 + std::size_t(12.0 * detail::uniform01(seed, 5, 6)) % 12;
            const GeneratedSpec g = random_valid_spec(seed, n_vars, target);
            REQUIRE(g.achieved_beta <= target * (1.0 + 1e-9));
            REQUIRE(check_conditions(g.spec, target * (1.0 + 1e-9)).satisfies);
        }
    }

    SECTION("determinism and argument validation") {
        const GeneratedSpec a = random_valid_spec(42, 5, 0.3);
        const GeneratedSpec b = random_valid_spec(42, 5, 0.3);
        REQUIRE(a.achieved_beta == b.achieved_beta);
        REQUIRE(a.spec.variables.size() == b.spec.variables.size());
        REQUIRE(a.spec.variables.size() == 5);
        REQUIRE_THROWS_AS(random_valid_spec(0, 13, 0.3), std::invalid_argument);
        REQUIRE_THROWS_AS(random_valid_spec(0, 5, -1.0), std::invalid_argument);
    }
}

TEST_CASE("extremal specs") {
    const ExtremalSpec ex = extremal_spec(0.2, 2.0, 4, 16, 1.0);

    SECTION("spike bookkeeping") {
        // q = beta / (n_spikes y^3) = 0.2 / 32.
        REQUIRE(ex.spike_prob == 0.00625);
        REQUIRE(ex.effective_beta ==
                Approx(ex.spike_beta + ex.filler_beta).epsilon(1e-12));
        REQUIRE(ex.spike_beta == Approx(4.0 * 8.0 * 0.00625).epsilon(1e-12));
        REQUIRE(ex.spec.variables.size() == 20);
    }

    SECTION("hypotheses hold exactly") {
        const ConstraintReport rep =
            check_conditions(ex.spec, ex.effective_beta * (1.0 + 1e-12));
        REQUIRE(rep.satisfies);
        for (double m : rep.means) REQUIRE(std::abs(m) <= 1e-15);
        REQUIRE(rep.variance_total <= 1.0 + 1e-12);
        REQUIRE(rep.variance_total >= 0.9);
    }

    SECTION("infeasible geometry throws") {
        REQUIRE_THROWS_AS(extremal_spec(0.5, 0.6, 3, 16, 1.0), std::invalid_argument);
    }

    SECTION("the bound dominates the exact value") {
        const double exact = exact_expectation_fn(ex.spec, plus_cube);
        const double bound =
            cube_plus_bound(0.0, Constraints(ex.effective_beta)).value;
        REQUIRE(exact <= bound + 1e-12);
    }
}

TEST_CASE("centering a spec") {
    const GeneratedSpec g = random_valid_spec(11, 4, 0.4);
    const DistributionSpec centered = center_spec(g.spec);
    const ConstraintReport rep = check_conditions(centered, 1e18);
    REQUIRE(rep.zero_means);
    for (double m : rep.means) REQUIRE(std::abs(m) <= 1e-12);
    REQUIRE(rep.variance_total <=
            check_conditions(g.spec, 1e18).variance_total + 1e-12);
}

TEST_CASE("inequality verification harness") {
    SECTION("the attaining two-point law meets the mean bound with zero margin") {
        DistributionSpec spec;
        spec.variables.push_back(fair_pm1());
        const VerifyOutcome out =
            verify_inequality(spec, F3Function(), mean_plus_bound(Constraints(0.5)));
        REQUIRE(out.exact == 0.5);
        REQUIRE(out.bound_value == 0.5);
        REQUIRE(out.margin == 0.0);
        REQUIRE(out.pass);
    }

    SECTION("cube-plus margins are nonnegative on generated specs") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const GeneratedSpec g = random_valid_spec(seed, 5, 0.3);
            const VerifyOutcome out =
                verify_inequality(g.spec, F3Function(),
                                  cube_plus_bound(-0.5, Constraints(g.achieved_beta)));
            REQUIRE(out.pass);
            REQUIRE(out.margin >= -1e-12);
        }
    }

    SECTION("hypothesis violations throw instead of reporting") {
        DistributionSpec wild;
        wild.variables.push_back(AtomicVariable({{-1.5, 0.5}, {1.5, 0.5}}));
        REQUIRE_THROWS_AS(
            verify_inequality(wild, F3Function(), cube_plus_bound(0.0, Constraints(1.0))),
            std::invalid_argument);
    }

    SECTION("the absolute-cube check demands centered specs") {
        DistributionSpec off;
        off.variables.push_back(AtomicVariable({{-0.8, 0.4}, {0.2, 0.6}}));
        const ConstraintReport rep = check_conditions(off, 1.0);
        REQUIRE_FALSE(rep.zero_means);
        REQUIRE_THROWS_AS(
            verify_inequality(off, F3Function(),
                              abs_cube_bound(0.0, rep.abs_third_total,
                                             Constraints(rep.beta_total, true))),
            std::invalid_argument);
    }

    SECTION("mixture comparisons truncate the spec at y") {
        DistributionSpec spec;
        spec.variables.push_back(AtomicVariable({{-0.05, 0.99}, {4.95, 0.01}}));
        const double y = 2.0;
        const double beta_y =
            check_conditions(truncate_spec(spec, y), 1e18).beta_total;
        REQUIRE(beta_y < y);
        const BoundResult bound = mixture_expectation(
            F3Function::hinge(1.0, 0.0, 3.0), MixtureParams(beta_y, y), 1e-10);
        const VerifyOutcome out =
            verify_inequality(spec, F3Function::hinge(1.0, 0.0, 3.0), bound);
        REQUIRE(out.pass);
        REQUIRE(out.margin >= -1e-12);
        REQUIRE(out.exact ==
                Approx(exact_expectation(truncate_spec(spec, y),
                                         F3Function::hinge(1.0, 0.0, 3.0)))
                    .epsilon(1e-15));
    }

    SECTION("bounds lacking their parameters are rejected") {
        BoundResult stripped = cube_plus_bound(0.0, Constraints(0.1));
        stripped.parameters.erase("beta");
        DistributionSpec spec;
        spec.variables.push_back(fair_pm1());
        REQUIRE_THROWS_AS(verify_inequality(spec, F3Function(), stripped),
                          std::invalid_argument);
    }
}
