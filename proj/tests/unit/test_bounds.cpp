#include "levypos/bounds.hpp"
#include "levypos/catalog.hpp"
#include "levypos/errors.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace levypos;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SimConfig config(std::size_t n, std::uint64_t seed = 3) {
    SimConfig c;
    c.n_samples = n;
    c.master_seed = seed;
    return c;
}

}  // namespace

TEST_CASE("normal cdf", "[bounds][normal]") {
    for (const double x : {-6.0, -2.0, -0.1, 0.0, 0.7, 3.0}) {
        CHECK_THAT(normal_cdf(x), WithinRel(oracle::normal_cdf(x), 1e-12));
    }
    CHECK_THAT(normal_cdf(-2.0), WithinAbs(0.0227501, 1e-7));
}

TEST_CASE("winsor constant", "[bounds][winsor]") {
    CHECK_THAT(winsor_constant(2.0, 1.0), WithinRel(oracle::winsor_constant(2.0, 1.0), 1e-12));
    CHECK_THAT(winsor_constant(2.0, 1.0), WithinAbs(351.65, 0.01));
    CHECK_THAT(winsor_constant(1e-9, 1.0), WithinAbs(9.2376, 1e-4));
    CHECK_THAT(winsor_constant(1.3, 2.0), WithinRel(2.0 * winsor_constant(1.3, 1.0), 1e-14));
    CHECK_THROWS_AS(winsor_constant(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(winsor_constant(1.0, -1.0), DomainError);
}

TEST_CASE("poisson tail", "[bounds][poisson]") {
    CHECK_THAT(poisson_tail(1.0, 2), WithinAbs(1.0 - 2.0 * std::exp(-1.0), 1e-12));
    CHECK_THAT(poisson_tail(1.0, 3), WithinAbs(1.0 - 2.5 * std::exp(-1.0), 1e-12));
    CHECK(poisson_tail(0.0, 0) == 1.0);
    CHECK(poisson_tail(3.7, 0) == 1.0);
    CHECK(poisson_tail(0.0, 4) == 0.0);
    CHECK(poisson_tail(2.0, 3) > poisson_tail(1.0, 3));
    for (int k = 0; k <= 20; ++k) {
        double prev = 0.0;
        for (int i = 1; i <= 100; ++i) {
            const double mu = 0.1 * i;
            const double v = poisson_tail(mu, k);
            REQUIRE(v >= prev);
            REQUIRE_THAT(v, WithinRel(oracle::poisson_tail(mu, k), 1e-10));
            prev = v;
        }
    }
    CHECK_THAT(poisson_tail(30.0, 27), WithinRel(oracle::poisson_tail(30.0, 27), 1e-10));
}

TEST_CASE("band moments and the Berry-Esseen bound", "[bounds][berry]") {
    const LevyModel m = catalog::by_label("spec_pos_a0.5");
    const double h = 0.2;
    const BandMoments b = band_moments(m, 0.0, h);
    // Power-law integration of y^k * 0.5 y^-1.5.
    CHECK_THAT(b.m2, WithinRel(std::pow(h, 1.5) / 3.0, 1e-9));
    CHECK_THAT(b.m3, WithinRel(std::pow(h, 2.5) / 5.0, 1e-9));

    const double t = 1e-2;
    const double expected = std::pow(3.0, 1.5) / 5.0 * std::pow(h, 0.25) / std::sqrt(t);
    CHECK_THAT(berry_esseen_bound(m, 0.0, h, t, 0.0), WithinRel(expected, 1e-8));
    CHECK_THAT(expected * std::sqrt(t) / std::pow(h, 0.25), WithinAbs(1.0392, 1e-4));
    CHECK_THAT(berry_esseen_bound(m, 0.0, h / 2, t, 0.0),
               WithinRel(std::pow(2.0, -0.25) * berry_esseen_bound(m, 0.0, h, t, 0.0), 1e-8));
    CHECK_THAT(berry_esseen_bound(m, 0.0, h, t, 9.0),
               WithinRel(berry_esseen_bound(m, 0.0, h, t, 0.0) / 1000.0, 1e-12));
    CHECK_THAT(berry_esseen_bound(m, 0.0, h, t, 0.0, 3.0),
               WithinRel(3.0 * berry_esseen_bound(m, 0.0, h, t, 0.0), 1e-12));

    try {
        (void)berry_esseen_bound(m, 0.3, 0.0, t, 0.0);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("degenerate band") != std::string::npos);
    }
}

TEST_CASE("small-jump bound check", "[bounds][small]") {
    const LevyModel m = catalog::by_label("spec_pos_a0.5");
    const double t = 1e-3;
    const SmallJumpCheck r = small_jump_bound_check(m, Side::Plus, 0.1, 2.0, 0.5, t,
                                                    config(100000));
    CHECK_THAT(r.target, WithinAbs(0.011375, 1e-6));
    CHECK_THAT(r.K, WithinRel(winsor_constant(2.0, 0.5), 1e-14));
    CHECK_THAT(r.threshold,
               WithinRel(r.K * 0.1 - 2.0 * std::sqrt(t * oracle::V_side(1.0, 0.5, 0.1)), 1e-9));
    CHECK(r.passed);
    CHECK(r.estimate.p_hat >= r.target);

    const SmallJumpCheck none = small_jump_bound_check(m, Side::Minus, 0.1, 2.0, 1.0, t,
                                                       config(1000));
    CHECK(none.estimate.p_hat == 1.0);
    CHECK(none.passed);

    const SmallJumpCheck wide = small_jump_bound_check(m, Side::Plus, 0.1, 0.1, 1.0, t,
                                                       config(1000));
    CHECK_THAT(wide.target, WithinAbs(0.23009, 1e-5));
}

TEST_CASE("composite bound values", "[bounds][composite]") {
    const LevyModel m = catalog::by_label("symmetric_a0.5");
    BoundConfig cfg;
    cfg.kappa_plus = cfg.kappa_minus = 2.0;
    cfg.c_plus = 1.0;
    cfg.c_minus = 1.0;
    const double t = 1e-2;
    const double d_plus = 1e-4;   // t * 1e-4^-0.5 = 1 <= c_plus
    const double d_minus = 1e-4;  // t * tail = 1 >= c_minus
    const CompositeBound b = composite_lower_bound(m, t, d_plus, d_minus, cfg);
    CHECK(b.variant == BoundVariant::TwoSided);
    const double phi = oracle::normal_cdf(-2.0);
    const long jumps = static_cast<long>(std::ceil(b.K_minus));
    CHECK_THAT(b.rhs, WithinRel(std::exp(-1.0) * phi * phi * oracle::poisson_tail(1.0, jumps) / 8.0,
                                1e-10));
    // Reference value at K_- + L = 3.
    CHECK_THAT(std::exp(-1.0) * phi * phi * oracle::poisson_tail(1.0, 3) / 8.0,
               WithinRel(1.9112e-6, 1e-4));

    const double threshold = -t * oracle::nu_side(1.0, 0.5, d_plus) +
                             t * oracle::nu_side(1.0, 0.5, d_minus) + b.K_plus * d_plus -
                             2.0 * std::sqrt(t * oracle::V_side(1.0, 0.5, d_plus)) -
                             2.0 * std::sqrt(t * oracle::V_side(1.0, 0.5, d_minus));
    CHECK_THAT(b.threshold, WithinRel(threshold, 1e-8));
}

TEST_CASE("composite bound variants", "[bounds][composite]") {
    BoundConfig cfg;
    cfg.kappa_plus = cfg.kappa_minus = 2.0;

    const LevyModel sub = catalog::by_label("spec_pos_a0.5");
    CHECK(select_variant(sub) == BoundVariant::FiniteNegativeSide);
    const CompositeBound b3 = composite_lower_bound(sub, 1e-2, 1e-4, 0.0, cfg);
    CHECK_THAT(b3.rhs, WithinRel(std::exp(-1.0) * oracle::normal_cdf(-2.0) / 4.0, 1e-12));
    CHECK_THAT(b3.rhs, WithinRel(2.0924e-3, 1e-4));

    const LevyModel neg = catalog::by_label("spec_neg_a1.5");
    CHECK(select_variant(neg) == BoundVariant::NoPositiveJumps);
    const double t = 1e-2;
    BoundConfig many = cfg;
    many.c_minus = 300.0;
    const double d_minus = 0.99 * std::pow(t / 300.0, 1.0 / 1.5);  // t * tail just above 300
    const CompositeBound bn = composite_lower_bound(neg, t, 0.0, d_minus, many);
    const double expected = t * oracle::nu_side(1.0, 1.5, d_minus) -
                            2.0 * std::sqrt(t * oracle::V_side(1.0, 1.5, d_minus));
    CHECK_THAT(bn.threshold, WithinRel(expected, 1e-8));
    const double phi = oracle::normal_cdf(-2.0);
    const long jumps = static_cast<long>(std::ceil(bn.K_minus));
    CHECK_THAT(bn.rhs, WithinRel(phi * phi * oracle::poisson_tail(300.0, jumps) / 8.0, 1e-9));
    CHECK(bn.rhs > 0.0);
    // With c_minus = 1 the Poisson factor underflows: the bound is vacuous, not an error.
    CHECK(composite_lower_bound(neg, t, 0.0, 0.99 * std::pow(t, 1.0 / 1.5), cfg).rhs < 1e-300);

    CHECK(select_variant(catalog::by_label("asym_a1.5")) == BoundVariant::TwoSided);
}

TEST_CASE("composite bound tail conditions name the side", "[bounds][composite]") {
    const LevyModel m = catalog::by_label("symmetric_a0.5");
    BoundConfig cfg;
    try {
        (void)composite_lower_bound(m, 1e-2, 1e-6, 1e-4, cfg);
        FAIL("expected PreconditionError");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("plus side") != std::string::npos);
    }
    try {
        (void)composite_lower_bound(m, 1e-2, 1e-4, 0.5, cfg);
        FAIL("expected PreconditionError");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("minus side") != std::string::npos);
    }
    cfg.C = 0.0;
    CHECK_THROWS_AS(composite_lower_bound(m, 1e-2, 1e-4, 1e-4, cfg), PreconditionError);
}

TEST_CASE("composite bound verification", "[bounds][verify]") {
    const LevyModel m = catalog::by_label("spec_pos_a0.5");
    BoundConfig cfg;
    const double t = 1e-2;
    const CompositeCheck c = verify_composite_bound(m, t, 1e-4, 0.0, cfg, config(2000));
    CHECK(c.outcome == CheckOutcome::Pass);
    CHECK(c.ci_width < c.bound.rhs / 2);
    CHECK(c.estimate.p_hat >= c.bound.rhs);

    VerifyOptions tiny;
    tiny.max_samples = 200;
    BoundConfig strict;
    strict.kappa_plus = strict.kappa_minus = 4.0;
    const LevyModel two = catalog::by_label("asym_a1.5");
    const double d = 0.99 * std::pow(2.0 * t / 30.0, 1.0 / 1.5);
    strict.c_minus = 30.0;
    strict.c_plus = 100.0;
    const CompositeCheck ins = verify_composite_bound(two, t, d, d, strict, config(200), tiny);
    CHECK(ins.outcome == CheckOutcome::Insufficient);
    CHECK(!ins.note.empty());
}

TEST_CASE("Kolmogorov distance", "[bounds][ks]") {
    CHECK_THAT(kolmogorov_distance({0.0}), WithinAbs(0.5, 1e-15));
    std::vector<double> q;
    for (int i = 1; i < 1000; ++i) {
        // Normal quantiles by bisection on the oracle cdf.
        double lo = -10.0;
        double hi = 10.0;
        for (int k = 0; k < 100; ++k) {
            const double mid = 0.5 * (lo + hi);
            (oracle::normal_cdf(mid) < i / 1000.0 ? lo : hi) = mid;
        }
        q.push_back(lo);
    }
    CHECK(kolmogorov_distance(q) <= 1.0 / 999.0 + 1e-9);
    std::vector<double> shifted = q;
    for (double& x : shifted) {
        x += 1.0;
    }
    CHECK_THAT(kolmogorov_distance(shifted), WithinAbs(2.0 * oracle::normal_cdf(0.5) - 1.0, 2e-3));
}

TEST_CASE("Berry-Esseen scaling of the small jumps", "[bounds][berry]") {
    const LevyModel m = catalog::by_label("spec_pos_a0.5");
    const std::vector<double> hs{0.2, 0.1, 0.05};
    const auto pts = berry_esseen_scaling(m, Side::Plus, hs, 1e-2, config(20000));
    REQUIRE(pts.size() == 3);
    double lo = 1e300;
    double hi = 0.0;
    for (const auto& p : pts) {
        CHECK_THAT(p.scale, WithinRel(p.h / std::sqrt(1e-2 * oracle::V_side(1.0, 0.5, p.h)), 1e-9));
        lo = std::min(lo, p.c_hat);
        hi = std::max(hi, p.c_hat);
    }
    CHECK(hi / lo < 2.0);
    CHECK(pts[0].distance > pts[2].distance);
}
