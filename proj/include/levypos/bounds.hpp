#pragma once

#include "levypos/levy_model.hpp"
#include "levypos/simulator.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace levypos {

[[nodiscard]] double normal_cdf(double x);

// 4C max(kappa / Phi(-kappa), 1 / (Phi(-kappa) sqrt(1 - Phi(-kappa)/2))).
[[nodiscard]] double winsor_constant(double kappa, double C = 1.0);

// P(N(mu) >= k) for a Poisson variable N(mu).
[[nodiscard]] double poisson_tail(double mu, long k);

struct BandMoments {
    double m2 = 0.0;
    double m3 = 0.0;
};

// Absolute moments int |y|^k Pi(dy), k = 2, 3, over the band [-h_minus, 0) u (0, h_plus].
// A zero level leaves that side out.
[[nodiscard]] BandMoments band_moments(const LevyModel& m, double h_minus, double h_plus);

// C m3 / (sqrt(t) (sigma2 + m2)^(3/2) (1 + |x|)^3) for the band (-h_minus, h_plus].
[[nodiscard]] double berry_esseen_bound(const LevyModel& m, double h_minus, double h_plus,
                                        double t, double x, double C = 1.0);

struct SmallJumpCheck {
    double K = 0.0;
    double threshold = 0.0;
    double target = 0.0;
    Estimate estimate;
    bool passed = false;
};

// Frequency of {compensated jumps of `side` in (0, d] <= K d - kappa sqrt(t V_side(d))}
// against Phi(-kappa)/2. Passes when the Wilson upper end reaches the target.
[[nodiscard]] SmallJumpCheck small_jump_bound_check(const LevyModel& m, Side side, double d,
                                                    double kappa, double C, double t,
                                                    const SimConfig& cfg);

struct BoundConfig {
    double kappa_plus = 1.0;
    double kappa_minus = 1.0;
    double C = 1.0;
    double c_plus = 1.0;
    double c_minus = 1.0;
    double L = 0.0;

    void validate() const;
};

enum class BoundVariant {
    TwoSided,            // both sides present, negative side sampled through d_minus
    NoPositiveJumps,     // positive side absent: all positive-side terms vanish
    FiniteNegativeSide,  // infinite positive activity, finite negative activity
};

[[nodiscard]] std::string_view to_string(BoundVariant v);

// Variant implied by the model's activity on each side.
[[nodiscard]] BoundVariant select_variant(const LevyModel& m);

struct CompositeBound {
    BoundVariant variant = BoundVariant::TwoSided;
    double K_plus = 0.0;
    double K_minus = 0.0;
    double threshold = 0.0;
    double rhs = 0.0;
    double t_tail_plus = 0.0;
    double t_tail_minus = 0.0;
};

// Threshold and probability lower bound for X_t. Throws PreconditionError naming the side
// whose tail condition on d_plus / d_minus fails.
[[nodiscard]] CompositeBound composite_lower_bound(const LevyModel& m, double t, double d_plus,
                                                   double d_minus, const BoundConfig& cfg);
[[nodiscard]] CompositeBound composite_lower_bound(const LevyModel& m, double t, double d_plus,
                                                   double d_minus, const BoundConfig& cfg,
                                                   BoundVariant variant);

enum class CheckOutcome { Pass, Fail, Insufficient };

[[nodiscard]] std::string_view to_string(CheckOutcome o);

struct CompositeCheck {
    CompositeBound bound;
    Estimate estimate;
    double ci_width = 0.0;
    CheckOutcome outcome = CheckOutcome::Insufficient;
    std::string note;
};

struct VerifyOptions {
    // Sample counts are raised until the interval width drops below rhs / 2, up to max_samples.
    std::size_t max_samples = 2000000;
    double width_fraction = 0.5;
    double slack_widths = 3.0;
};

// Simulated P(X_t <= threshold) against rhs, starting from sim.n_samples.
[[nodiscard]] CompositeCheck verify_composite_bound(const LevyModel& m, double t, double d_plus,
                                                    double d_minus, const BoundConfig& cfg,
                                                    const SimConfig& sim,
                                                    const VerifyOptions& opt = {});

// sup_x |F_n(x) - Phi(x)| for the empirical distribution of `values`.
[[nodiscard]] double kolmogorov_distance(std::vector<double> values);

struct ScalingPoint {
    double h = 0.0;
    double distance = 0.0;
    // h / sqrt(t V_side(h)).
    double scale = 0.0;
    double c_hat = 0.0;
};

// Kolmogorov distance of the standardised compensated small jumps of `side` in (0, h].
[[nodiscard]] std::vector<ScalingPoint> berry_esseen_scaling(const LevyModel& m, Side side,
                                                             std::span<const double> hs, double t,
                                                             const SimConfig& cfg);

}  // namespace levypos
