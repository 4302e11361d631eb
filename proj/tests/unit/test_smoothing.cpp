#include "levypos/catalog.hpp"
#include "levypos/smoothing.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace levypos;
using Catch::Matchers::WithinRel;

TEST_CASE("smoothed tail matches the density-convolution oracle", "[smoothing]") {
    const auto m = catalog::by_label("asym_a1.5");
    const oracle::PowerModel o{0.0, 0.0, 1.5, 1.0, 2.0};
    for (int n : {10, 1000}) {
        for (double x : {0.5, 1.3, 3.0}) {
            INFO("n=" << n << " x=" << x);
            CHECK_THAT(smoothed_tail(m, n, x, Side::Plus), WithinRel(oracle::smoothed_tail(o, n, x, true), 1e-6));
            CHECK_THAT(smoothed_tail(m, n, x, Side::Minus), WithinRel(oracle::smoothed_tail(o, n, x, false), 1e-6));
        }
    }
}

TEST_CASE("smoothed tail approaches the original at continuity points", "[smoothing]") {
    const auto m = catalog::by_label("symmetric_a1");
    for (double x : {0.5, 2.0}) {
        double prev = 1e300;
        for (int n : {10, 100, 1000}) {
            const double gap = std::abs(smoothed_tail(m, n, x, Side::Plus) - m.tail_plus(x));
            CHECK(gap < prev);
            prev = gap;
        }
    }
}

TEST_CASE("smoothing removes atoms", "[smoothing]") {
    LevyModel m;
    m.label = "atom";
    const double x0 = 0.4;
    m.tail_plus = TailFunction([x0](double x) { return std::pow(x, -0.5) + (x < x0 ? 1.0 : 0.0); })
                      .with_breakpoints({x0, 1.0});
    for (int n : {10, 100, 1000}) {
        const double below = smoothed_tail(m, n, x0 * (1.0 - 1e-7), Side::Plus);
        const double above = smoothed_tail(m, n, x0 * (1.0 + 1e-7), Side::Plus);
        CHECK(std::abs(below - above) < 1e-4);
    }
}

TEST_CASE("smoothing preserves infinite activity", "[smoothing]") {
    const auto m = catalog::by_label("asym_a1.5");
    const double x_min = 1e-6;
    for (int n : {10, 100}) {
        CHECK(smoothed_tail(m, n, x_min, Side::Plus) > 1e5);
    }
}

TEST_CASE("smooth_measure yields a table-backed model", "[smoothing]") {
    const auto m = catalog::by_label("symmetric_a1");
    const auto grid = std::vector<double>{0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 4.0};
    const auto s = smooth_measure(m, 100, grid);
    CHECK(s.label == "symmetric_a1_smoothed_n100");
    for (double x : grid) {
        CHECK(s.tail_plus(x) > 0.0);
        CHECK(s.tail_minus(x) > 0.0);
        CHECK_THAT(s.tail_plus(x), WithinRel(smoothed_tail(m, 100, x, Side::Plus), 1e-12));
    }
    CHECK(s.tail_plus(0.07) < s.tail_plus(0.06));
}
