#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "oracle.hpp"
#include "rosenthal3/function_class.hpp"
#include "rosenthal3/verification.hpp"  // detail::uniform01 for seeded sweeps

using Catch::Approx;
using namespace rosenthal3;

namespace {

// Deterministic seeded draw in [lo, hi).
double draw(std::uint64_t seed, std::uint64_t slot, double lo, double hi) {
    return lo + (hi - lo) * detail::uniform01(seed, 0x17E57, slot);
}

F3Function random_member(std::uint64_t seed) {
    F3Function f = F3Function::affine(draw(seed, 1, -1.0, 1.0), draw(seed, 2, 0.0, 1.0));
    f = f + F3Function::hinge(draw(seed, 3, 0.0, 1.0), draw(seed, 4, -3.0, 3.0),
                              draw(seed, 5, 3.0, 4.0));
    if (draw(seed, 6, 0.0, 1.0) < 0.5)
        f = f + F3Function::exponential(draw(seed, 7, 0.0, 0.5), draw(seed, 8, 0.0, 0.8));
    return f;
}

}  // namespace

TEST_CASE("extended reals") {
    REQUIRE(ExtendedReal(6.0).is_finite());
    REQUIRE(ExtendedReal(6.0).value() == 6.0);
    REQUIRE_FALSE(ExtendedReal::infinity().is_finite());
    REQUIRE_THROWS_AS(ExtendedReal(-1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(ExtendedReal(std::numeric_limits<double>::quiet_NaN()),
                      std::invalid_argument);
}

TEST_CASE("construction, validation, and normalization") {
    REQUIRE_THROWS_AS(F3Function::affine(0.0, -1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(F3Function::hinge(-1.0, 0.0, 3.0), std::invalid_argument);
    REQUIRE_THROWS_AS(F3Function::hinge(1.0, 0.0, 2.9), std::invalid_argument);
    REQUIRE_THROWS_AS(F3Function::exponential(1.0, -0.1), std::invalid_argument);

    SECTION("zero-coefficient terms are dropped") {
        const F3Function f = F3Function::hinge(0.0, 1.0, 3.0);
        REQUIRE(f.hinges().empty());
        REQUIRE(f.is_constant());
    }

    SECTION("rate-zero exponentials fold into the intercept") {
        const F3Function f = F3Function::exponential(2.5, 0.0);
        REQUIRE(f.exps().empty());
        REQUIRE(f.intercept() == 2.5);
        REQUIRE(f.is_constant());
        REQUIRE(evaluate(f, 123.0) == 2.5);
    }

    SECTION("sum concatenates terms") {
        const F3Function f =
            F3Function::hinge(2.0, -1.0, 3.0) + F3Function::hinge(0.5, 7.0, 3.0);
        REQUIRE(f.hinges().size() == 2);
        REQUIRE(evaluate(f, 0.0) == 2.0);
    }
}

TEST_CASE("pointwise evaluation") {
    REQUIRE(evaluate(F3Function::hinge(1.0, 0.0, 3.0), 2.0) == 8.0);
    REQUIRE(evaluate(F3Function::hinge(1.0, 0.0, 3.0), -2.0) == 0.0);
    REQUIRE(evaluate(F3Function::affine(1.5, 2.0), 3.0) == 7.5);
    REQUIRE(evaluate(F3Function::exponential(2.0, 1.0), 1.0) ==
            Approx(2.0 * std::exp(1.0)).epsilon(1e-15));
    REQUIRE(evaluate(F3Function::hinge(1.0, 0.5, 3.5), 1.5) == 1.0);
    REQUIRE(std::isinf(evaluate(F3Function::exponential(1.0, 2.0), 1e6)));
    REQUIRE_THROWS_AS(
        evaluate(F3Function::affine(0.0, 1.0), std::numeric_limits<double>::infinity()),
        std::invalid_argument);
}

TEST_CASE("asymptotic third derivative") {
    REQUIRE(third_derivative_at_infinity(F3Function::hinge(1.0, 0.0, 3.0)).value() ==
            6.0);
    const F3Function two =
        F3Function::hinge(2.0, -1.0, 3.0) + F3Function::hinge(0.5, 7.0, 3.0);
    REQUIRE(third_derivative_at_infinity(two).value() == 15.0);
    REQUIRE(third_derivative_at_infinity(F3Function::affine(4.0, 2.0)).value() == 0.0);
    REQUIRE_FALSE(
        third_derivative_at_infinity(F3Function::hinge(1.0, 0.0, 3.5)).is_finite());
    REQUIRE_FALSE(
        third_derivative_at_infinity(F3Function::exponential(1.0, 0.1)).is_finite());

    SECTION("matches the cubic growth rate") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            F3Function f = F3Function::affine(draw(seed, 10, -2.0, 2.0),
                                              draw(seed, 11, 0.0, 2.0)) +
                           F3Function::hinge(draw(seed, 12, 0.1, 2.0),
                                             draw(seed, 13, -3.0, 3.0), 3.0);
            if (seed % 2 == 0)
                f = f + F3Function::hinge(draw(seed, 14, 0.1, 1.0),
                                          draw(seed, 15, -2.0, 2.0), 3.0);
            const double limit = third_derivative_at_infinity(f).value() / 6.0;
            for (double x : {1e3, 1e4, 1e5}) {
                const double ratio = evaluate(f, x) / (x * x * x);
                REQUIRE(std::abs(ratio - limit) <= limit * 10.0 / x);
            }
        }
    }
}

TEST_CASE("members have nondecreasing first three derivatives") {
    // Finite-difference probe. The slack absorbs the O(h^2) truncation error of
    // the central stencils plus cancellation at the 1e-3 step.
    const double h = 1e-3;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const F3Function f = random_member(seed);
        const auto d1 = [&](double x) {
            return (evaluate(f, x + h) - evaluate(f, x - h)) / (2.0 * h);
        };
        const auto d2 = [&](double x) {
            return (evaluate(f, x + h) - 2.0 * evaluate(f, x) + evaluate(f, x - h)) /
                   (h * h);
        };
        double x1 = draw(seed, 20, -3.0, 2.5);
        double x2 = x1 + 0.1 + draw(seed, 21, 0.0, 2.0);
        const double slack =
            1e-7 * (1.0 + std::abs(evaluate(f, x1)) + std::abs(evaluate(f, x2))) + 1e-5;
        REQUIRE(evaluate(f, x2) >= evaluate(f, x1) - slack);
        REQUIRE(d1(x2) >= d1(x1) - slack);
        REQUIRE(d2(x2) >= d2(x1) - slack);
    }
}

TEST_CASE("expectations under an affine Gaussian") {
    SECTION("frozen reference values") {
        REQUIRE(expect_gaussian_affine(F3Function::hinge(1.0, 0.0, 3.0),
                                       GaussianAffine(1.0, 0.0)) ==
                Approx(0.7978845608028654).epsilon(1e-14));
        REQUIRE(expect_gaussian_affine(F3Function::exponential(1.0, 1.0),
                                       GaussianAffine(1.0, 0.0)) ==
                Approx(std::exp(0.5)).epsilon(1e-14));
        REQUIRE(expect_gaussian_affine(F3Function::affine(2.0, 3.0),
                                       GaussianAffine(1.0, 0.5)) ==
                Approx(3.5).epsilon(1e-14));
    }

    SECTION("linearity across term types") {
        const GaussianAffine ga(1.3, -0.4);
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const F3Function a = random_member(seed);
            const F3Function b = random_member(seed + 1000);
            const double split =
                expect_gaussian_affine(a, ga) + expect_gaussian_affine(b, ga);
            const double joint = expect_gaussian_affine(a + b, ga);
            REQUIRE(joint == Approx(split).epsilon(1e-12));
        }
    }

    SECTION("against direct integration") {
        const F3Function f = F3Function::affine(0.3, 0.7) +
                             F3Function::hinge(1.2, 0.4, 3.0) +
                             F3Function::exponential(0.5, 0.6);
        const GaussianAffine ga(0.8, -0.3);
        const double ref = oracle::integrate(
            [&](double z) { return evaluate(f, 0.8 * z - 0.3) * oracle::phi(z); },
            -41.0, 41.0);
        REQUIRE(expect_gaussian_affine(f, ga) == Approx(ref).epsilon(1e-11));
    }
}
