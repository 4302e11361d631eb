#include "levypos/errors.hpp"
#include "levypos/quadrature.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace levypos;
using Catch::Matchers::WithinRel;
using Catch::Matchers::WithinAbs;

TEST_CASE("log-cell quadrature on a finite interval", "[quadrature]") {
    const auto r = quad::integrate_log([](double y) { return std::pow(y, -0.5); }, 1e-8, 1.0);
    CHECK_THAT(r.value, WithinRel(2.0 * (1.0 - 1e-4), 1e-12));

    const auto e = quad::integrate_log([](double y) { return std::exp(-y); }, 0.5, 3.0);
    CHECK_THAT(e.value, WithinRel(std::exp(-0.5) - std::exp(-3.0), 1e-12));
}

TEST_CASE("improper integrals towards zero", "[quadrature]") {
    SECTION("power integrand is summed geometrically") {
        for (double p : {-0.9, -0.5, 0.0, 0.5, 1.5}) {
            const auto r = quad::integrate_to_zero([p](double y) { return std::pow(y, p); }, 0.7);
            CHECK_THAT(r.value, WithinRel(std::pow(0.7, p + 1.0) / (p + 1.0), 1e-10));
        }
    }
    SECTION("nearly critical exponent still converges") {
        const auto r = quad::integrate_to_zero([](double y) { return std::pow(y, -0.99); }, 1.0);
        CHECK_THAT(r.value, WithinRel(100.0, 1e-8));
    }
    SECTION("divergent integrand throws") {
        CHECK_THROWS_AS(quad::integrate_to_zero([](double y) { return 1.0 / y; }, 1.0), NumericError);
        CHECK_THROWS_AS(quad::integrate_to_zero([](double y) { return std::pow(y, -1.5); }, 1.0),
                        NumericError);
    }
    SECTION("identically zero integrand") {
        CHECK(quad::integrate_to_zero([](double) { return 0.0; }, 1.0).value == 0.0);
    }
}

TEST_CASE("improper integrals towards infinity", "[quadrature]") {
    const auto r = quad::integrate_to_infinity([](double y) { return std::exp(-2.0 * y); }, 0.3);
    CHECK_THAT(r.value, WithinRel(0.5 * std::exp(-0.6), 1e-11));
    const auto p = quad::integrate_to_infinity([](double y) { return std::pow(y, -3.0); }, 2.0);
    CHECK_THAT(p.value, WithinRel(0.125, 1e-9));
    CHECK_THROWS_AS(quad::integrate_to_infinity([](double y) { return 1.0 / y; }, 1.0), NumericError);
}

TEST_CASE("breakpoints handle a jump in the integrand", "[quadrature]") {
    auto step = [](double y) { return y < 0.3 ? 2.0 : 1.0; };
    const auto r = quad::integrate_log(step, 0.1, 1.0, {}, {0.3});
    CHECK_THAT(r.value, WithinAbs(0.4 + 0.7, 1e-12));
}

TEST_CASE("linear quadrature", "[quadrature]") {
    const auto r = quad::integrate_linear([](double y) { return y * y; }, -1.0, 2.0);
    CHECK_THAT(r.value, WithinRel(3.0, 1e-13));
}
