#pragma once

#include "levypos/tail.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace levypos {

enum class Side { Plus, Minus };

[[nodiscard]] constexpr std::string_view to_string(Side s) {
    return s == Side::Plus ? "plus" : "minus";
}

// Parameters of the power-tail catalog family, kept so the classifier can consult the
// closed-form asymptotes and the sampler can invert the tail exactly.
struct PowerTailParams {
    double alpha = 1.0;
    double c_plus = 0.0;
    double c_minus = 0.0;
};

struct LevyModel {
    std::string label;
    double gamma = 0.0;
    double sigma2 = 0.0;
    TailFunction tail_plus;
    TailFunction tail_minus;
    std::optional<PowerTailParams> power;

    [[nodiscard]] const TailFunction& tail(Side s) const {
        return s == Side::Plus ? tail_plus : tail_minus;
    }
    [[nodiscard]] double tail_sum(double x) const { return tail_plus(x) + tail_minus(x); }
    [[nodiscard]] bool jump_free() const { return tail_plus.is_zero() && tail_minus.is_zero(); }
};

// Same process reflected through 0: tails swapped, gamma negated.
[[nodiscard]] LevyModel mirror(const LevyModel& m);

enum class Activity { Zero, Finite, Infinite };

// Behaviour of one tail at 0+, judged at x_min against the activity threshold.
[[nodiscard]] Activity activity(const LevyModel& m, Side s, double x_min = 1e-100,
                                double threshold = 1e6);

struct ValidationOptions {
    double x_min = 1e-100;
    double x_max = 1e3;
    int grid_points = 401;
    double activity_threshold = 1e6;
};

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

enum class ValidationStatus { Pass, AnalyticOnly, Reject };

struct ValidationReport {
    ValidationStatus status = ValidationStatus::Reject;
    std::vector<ValidationCheck> checks;

    [[nodiscard]] bool ok() const { return status == ValidationStatus::Pass; }
    [[nodiscard]] std::string summary() const;
};

[[nodiscard]] ValidationReport validate_model(const LevyModel& m, const ValidationOptions& opt = {});

// Throws ValidationError unless the model passes (or is analytic-only and that is allowed).
void require_valid(const LevyModel& m, bool allow_analytic_only = false);

struct Functionals {
    double x = 0.0;
    double tail_plus = 0.0;
    double tail_minus = 0.0;
    double nu = 0.0;
    double A = 0.0;
    double V = 0.0;
    double V_plus = 0.0;
    double V_minus = 0.0;
    double U = 0.0;
};

[[nodiscard]] Functionals functionals(const LevyModel& m, double x);

struct NuPair {
    double plus = 0.0;
    double minus = 0.0;
};

// Truncated first moments over (h, 1] of each side. Requires 0 < h <= 1.
[[nodiscard]] NuPair nu_pm(const LevyModel& m, double h);

// Signed band moment over (lo, hi] for one side, in tail form. Negative when lo > hi.
[[nodiscard]] double band_first_moment(const TailFunction& tail, double lo, double hi);

// 2*int_0^x y tail(y) dy - x^2 tail(x): second moment of the side's jumps in (0, x].
[[nodiscard]] double side_second_moment(const TailFunction& tail, double x);

// int_a^b tail(y) dy, oriented.
[[nodiscard]] double tail_integral(const TailFunction& tail, double a, double b);

// int_0^x tail(y) dy; throws NumericError on divergence.
[[nodiscard]] double tail_integral_from_zero(const TailFunction& tail, double x);

[[nodiscard]] double winsorised_mean(const LevyModel& m, double x);
[[nodiscard]] double winsorised_second_moment(const LevyModel& m, double x);

struct FunctionalTable {
    std::vector<Functionals> rows;
};

[[nodiscard]] FunctionalTable functional_table(const LevyModel& m, std::span<const double> grid);

// Decreasing grid 2^-j for j = j_min..j_max.
[[nodiscard]] std::vector<double> dyadic_grid(int j_min, int j_max);
// Decreasing geometric grid of n points from hi to lo.
[[nodiscard]] std::vector<double> geometric_grid(double hi, double lo, int n);

// Density-based evaluation of nu, V, V+, V-; empty when a side lacks a density.
struct DensityFunctionals {
    double nu = 0.0;
    double V = 0.0;
    double V_plus = 0.0;
    double V_minus = 0.0;
};
[[nodiscard]] std::optional<DensityFunctionals> density_functionals(const LevyModel& m, double x);

// inf{x > 0 : tail(x) <= 1/(lambda t)}.
[[nodiscard]] double tail_quantile(const LevyModel& m, double t, Side side, double lambda = 1.0);

}  // namespace levypos
