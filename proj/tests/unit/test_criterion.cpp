#include "levypos/catalog.hpp"
#include "levypos/criterion.hpp"
#include "levypos/errors.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace levypos;
using Catch::Approx;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("ratio_table examples", "[criterion][ratio]") {
    const std::vector<double> g{0.01};
    const auto drift = ratio_table(catalog::by_label("drift_pos_a0.5"), g);
    CHECK_THAT(drift[0].ratio_minus, WithinRel(1.0 / std::sqrt(8.0 / 3.0 * 1e-3 * 10.0), 1e-9));
    CHECK_THAT(drift[0].ratio_minus, WithinRel(6.1237, 1e-4));

    for (const auto& r : ratio_table(catalog::by_label("symmetric_a1"), dyadic_grid(4, 40))) {
        CHECK(r.ratio_minus == Approx(0.0).margin(1e-12));
    }

    const std::vector<double> g4{1e-4};
    const auto neg = ratio_table(catalog::by_label("spec_neg_a1.5"), g4);
    CHECK_THAT(neg[0].ratio_minus, WithinRel(197.0 / 200.0, 1e-9));
    // No positive jumps: the plus ratio is the +inf sentinel because A > 0 there.
    CHECK(neg[0].ratio_plus == std::numeric_limits<double>::infinity());
}

TEST_CASE("guarded ratio sentinels", "[criterion][ratio]") {
    CHECK(guarded_ratio(1.0, 0.0) == std::numeric_limits<double>::infinity());
    CHECK(guarded_ratio(-1.0, 0.0) == -std::numeric_limits<double>::infinity());
    CHECK(std::isnan(guarded_ratio(0.0, 0.0)));
    CHECK(guarded_ratio(1.0, 4.0) == 0.25);
}

TEST_CASE("ratio_table rejects an increasing grid", "[criterion][ratio]") {
    const std::vector<double> g{0.1, 0.2};
    CHECK_THROWS_AS(ratio_table(catalog::by_label("symmetric_a1"), g), DomainError);
}

TEST_CASE("mirror maps the minus ratio onto the plus ratio", "[criterion][ratio]") {
    const auto g = dyadic_grid(2, 30);
    for (const auto& m : catalog::standard()) {
        const auto a = ratio_table(m, g);
        const auto b = ratio_table(mirror(m), g);
        for (std::size_t i = 0; i < g.size(); ++i) {
            INFO(m.label << " x=" << g[i]);
            if (std::isfinite(a[i].ratio_minus)) {
                CHECK(std::abs(b[i].ratio_plus + a[i].ratio_minus) <= 1e-10 * (1.0 + std::abs(a[i].ratio_minus)));
            } else {
                CHECK((std::isnan(a[i].ratio_minus) ? std::isnan(b[i].ratio_plus)
                                                    : b[i].ratio_plus == -a[i].ratio_minus));
            }
        }
    }
}

TEST_CASE("classify agrees with the expected catalog verdicts", "[criterion][classify]") {
    const std::vector<std::pair<std::string, Verdict>> expected{
        {"symmetric_a1", Verdict::StaysTwoSided},
        {"symmetric_a0.5", Verdict::StaysTwoSided},
        {"drift_pos_a0.5", Verdict::TendsPositive},
        {"drift_neg_a0.5", Verdict::StaysNonPositiveSide},
        {"spec_neg_a1.5", Verdict::StaysTwoSided},
        {"spec_neg_a1.5_strict", Verdict::StaysTwoSided},
        {"subordinator_a0.5", Verdict::SpectrallyPositiveSubordinator},
        {"spec_pos_a0.5", Verdict::StaysNonPositiveSide},
        {"asym_a1.5", Verdict::StaysTwoSided},
        {"asym_a0.5", Verdict::TendsPositive},
    };
    for (const auto& [label, verdict] : expected) {
        INFO(label);
        const auto rep = classify(catalog::by_label(label));
        CHECK(rep.verdict == verdict);
        REQUIRE(rep.oracle_verdict.has_value());
        CHECK(*rep.oracle_verdict == verdict);
        CHECK(rep.oracle_agrees);
        if (rep.verdict == Verdict::TendsPositive) {
            CHECK(rep.flags.limsup_inf == true);
        }
        CHECK_FALSE(rep.notes.empty());
    }
}

TEST_CASE("spectrally negative ratio tends to one", "[criterion][classify]") {
    const auto m = catalog::by_label("spec_neg_a1.5");
    const std::vector<double> g{1e-6};
    CHECK_THAT(ratio_table(m, g)[0].ratio_minus, WithinAbs(1.0, 0.02));
    const auto rep = classify(m);
    REQUIRE(rep.negative_subordinator.has_value());
    CHECK_FALSE(rep.negative_subordinator->is_subordinator);
    CHECK_FALSE(rep.negative_subordinator->bv);
}

TEST_CASE("classify reports a short grid as inconclusive", "[criterion][classify]") {
    ClassifyConfig cfg;
    cfg.j_min = 4;
    cfg.j_max = 6;
    const auto rep = classify(catalog::by_label("drift_pos_a0.5"), cfg);
    CHECK(rep.verdict == Verdict::Inconclusive);
    CHECK_THAT(rep.notes.back(), Catch::Matchers::ContainsSubstring("grid too short"));
}

TEST_CASE("Gaussian component rules out positive verdicts", "[criterion][classify]") {
    const auto m = catalog::power_tails("drift_gauss", 1.0, 0.5, 0.5, 1.0, 1.0);
    const auto rep = classify(m);
    CHECK(rep.verdict == Verdict::StaysTwoSided);
    CHECK(rep.flags.limsup_inf == false);
    const auto b = classify(catalog::brownian());
    CHECK(b.verdict == Verdict::StaysTwoSided);
}

TEST_CASE("oracle disagreement downgrades to inconclusive", "[criterion][classify]") {
    // alpha = 1 with c- > c+: A grows like log(1/x), far too slowly for the slope rule.
    const auto m = catalog::power_tails("log_growth", 0.0, 0.0, 1.0, 1.0, 2.0);
    const auto rep = classify(m);
    REQUIRE(rep.oracle_verdict.has_value());
    CHECK(*rep.oracle_verdict == Verdict::TendsPositive);
    CHECK(rep.heuristic_verdict != Verdict::TendsPositive);
    CHECK_FALSE(rep.oracle_agrees);
    CHECK(rep.verdict == Verdict::Inconclusive);
}

TEST_CASE("verdict mapping", "[criterion][classify]") {
    ConditionFlags f;
    CHECK(verdict_from_flags(false, false, f) == Verdict::StaysTwoSided);
    CHECK(verdict_from_flags(false, true, f) == Verdict::StaysNonPositiveSide);
    CHECK(verdict_from_flags(false, std::nullopt, f) == Verdict::StaysNonPositiveSide);
    CHECK(verdict_from_flags(std::nullopt, false, f) == Verdict::StaysNonNegativeSide);
    CHECK(verdict_from_flags(std::nullopt, true, f) == Verdict::Inconclusive);
    CHECK(verdict_from_flags(true, false, f) == Verdict::SubsequencePositive);
    f.limsup_shifted_inf = true;
    CHECK(verdict_from_flags(true, false, f) == Verdict::LinearSubsequenceDivergence);
    f.limit_inf = true;
    CHECK(verdict_from_flags(true, false, f) == Verdict::TendsPositive);
}

TEST_CASE("subordinator_check examples", "[criterion][subordinator]") {
    const auto sub = subordinator_check(catalog::by_label("subordinator_a0.5"));
    CHECK(sub.is_subordinator);
    CHECK_THAT(sub.drift, WithinAbs(0.0, 1e-9));
    CHECK(sub.A_nonneg);
    CHECK(sub.bv);
    for (double x : {1e-6, 0.01, 0.25}) {
        CHECK_THAT(winsorised_mean(catalog::by_label("subordinator_a0.5"), x), WithinRel(2.0 * std::sqrt(x), 1e-9));
    }

    const auto neg = subordinator_check(catalog::by_label("spec_pos_a0.5"));
    CHECK_FALSE(neg.is_subordinator);
    CHECK_FALSE(neg.A_nonneg);
    CHECK_THAT(neg.drift, WithinAbs(-1.0, 1e-9));

    const auto heavy = subordinator_check(catalog::power_tails("one_sided_a1.5", 0.0, 0.0, 1.5, 1.0, 0.0));
    CHECK_FALSE(heavy.bv);
    CHECK_FALSE(heavy.is_subordinator);

    CHECK_THROWS_AS(subordinator_check(catalog::by_label("symmetric_a1")), PreconditionError);
}

TEST_CASE("A(0+) extrapolation", "[criterion]") {
    const auto g = dyadic_grid(4, 40);
    const auto sub = estimate_A0(catalog::by_label("subordinator_a0.5"), g);
    CHECK(sub.converged);
    CHECK_THAT(sub.value, WithinAbs(0.0, 1e-9));
    CHECK(sub.band < 1e-6);
    const auto drift = estimate_A0(catalog::by_label("drift_pos_a0.5"), g);
    CHECK_THAT(drift.value, WithinRel(1.0, 1e-12));
    const auto neg = estimate_A0(catalog::by_label("asym_a1.5"), g);
    CHECK_FALSE(neg.converged);
}

TEST_CASE("witness sequence closed forms", "[criterion][witness]") {
    const auto m = catalog::by_label("drift_pos_a0.5");
    const std::vector<double> x{1e-4};
    const auto w = witness_sequence(m, x);
    CHECK_THAT(w.s[0], WithinRel(std::sqrt(8.0 / 3.0) * 1e-4, 1e-9));
    CHECK_THAT(w.t[0], WithinRel(std::pow(8.0 / 3.0, 0.25) * 1e-3, 1e-9));
    CHECK_THAT(w.t[0], WithinRel(1.27789e-3, 1e-5));
    CHECK_THAT(w.t_tail_minus[0], WithinRel(0.12779, 1e-4));
    CHECK_THAT(w.ta_over_x[0], WithinRel(12.779, 1e-4));
}

TEST_CASE("witness sequence trends", "[criterion][witness]") {
    const auto m = catalog::by_label("drift_pos_a0.5");
    std::vector<double> x;
    for (int k = 1; k <= 10; ++k) {
        x.push_back(std::pow(4.0, -k));
    }
    const auto w = witness_sequence(m, x);
    CHECK(w.trends_hold);
    for (std::size_t k = 1; k < x.size(); ++k) {
        CHECK(w.t_tail_minus[k] < w.t_tail_minus[k - 1]);
        CHECK(w.ta_over_x[k] > w.ta_over_x[k - 1]);
        CHECK(w.u_over_ta2[k] < w.u_over_ta2[k - 1]);
    }
    const auto asym = witness_sequence(catalog::by_label("asym_a0.5"), std::vector<double>(x.begin() + 2, x.end()));
    CHECK(asym.trends_hold);
}

TEST_CASE("witness sequence names the offending index", "[criterion][witness]") {
    const std::vector<double> x{0.1, 0.01};
    CHECK_THROWS_WITH(witness_sequence(catalog::by_label("symmetric_a1"), x),
                      Catch::Matchers::ContainsSubstring("A(x_0)"));
    const std::vector<double> y{0.5, 0.2};
    // A(x) = 1 - 2 sqrt(x) turns negative at x > 1/4.
    CHECK_THROWS_WITH(witness_sequence(catalog::by_label("asym_a0.5"), y),
                      Catch::Matchers::ContainsSubstring("A(x_0)"));
}
