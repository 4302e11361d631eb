#pragma once

#include "levypos/levy_model.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace levypos {

struct RatioSample {
    double x = 0.0;
    double ratio_minus = 0.0;
    double ratio_plus = 0.0;
    double ratio_minus_shifted = 0.0;
};

// A/sqrt(U*tail) with the sentinel convention: +-inf when the denominator is 0 and
// A != 0, NaN when both vanish.
[[nodiscard]] double guarded_ratio(double A, double denominator);

[[nodiscard]] std::vector<RatioSample> ratio_table(const LevyModel& m, std::span<const double> x_grid);

enum class Verdict {
    TendsPositive,
    SubsequencePositive,
    LinearSubsequenceDivergence,
    StaysTwoSided,
    StaysNonNegativeSide,
    StaysNonPositiveSide,
    SpectrallyPositiveSubordinator,
    Inconclusive,
};

[[nodiscard]] std::string_view to_string(Verdict v);

// Per-condition flags. Empty optional: not applicable or not decidable on the grid.
struct ConditionFlags {
    std::optional<bool> limit_inf;
    std::optional<bool> limsup_inf;
    std::optional<bool> limsup_shifted_inf;
    std::optional<bool> liminf_plus_finite;
    std::optional<bool> limsup_minus_finite;
};

// Log-log slopes of |ratio| (and of the running envelopes) over the tail half of the grid.
struct SlopeDiagnostics {
    double ratio_minus = 0.0;
    double ratio_minus_envelope = 0.0;
    double ratio_plus = 0.0;
    double ratio_plus_envelope = 0.0;
    double ratio_minus_shifted = 0.0;
    double ratio_minus_shifted_envelope = 0.0;
};

struct SubordinatorCheck {
    bool is_subordinator = false;
    double drift = 0.0;
    bool drift_nonneg = false;
    bool A_nonneg = false;
    bool bv = false;
    bool sigma_zero = false;
};

struct LimitEstimate {
    double value = 0.0;
    double band = 0.0;
    bool converged = false;
};

struct ClassifyConfig {
    int j_min = 4;
    int j_max = 40;
    double r_max = 1e3;
    double s_min = 0.05;
    int min_points = 8;
    bool consult_oracle = true;
};

struct CriterionReport {
    std::string label;
    Verdict verdict = Verdict::Inconclusive;
    Verdict heuristic_verdict = Verdict::Inconclusive;
    std::optional<Verdict> oracle_verdict;
    bool oracle_agrees = true;
    ConditionFlags flags;
    std::optional<ConditionFlags> oracle_flags;
    SlopeDiagnostics slopes;
    std::vector<RatioSample> ratios;
    std::optional<SubordinatorCheck> subordinator;
    std::optional<SubordinatorCheck> negative_subordinator;
    LimitEstimate A0;
    ClassifyConfig config;
    std::vector<std::string> notes;
};

[[nodiscard]] CriterionReport classify(const LevyModel& m, const ClassifyConfig& cfg = {});

// Maps the positivity and negativity conditions onto a verdict. `positive` is the
// subsequence condition on the minus ratio, `negative` its mirror on the plus ratio.
[[nodiscard]] Verdict verdict_from_flags(std::optional<bool> positive, std::optional<bool> negative,
                                         const ConditionFlags& flags);

// Requires the negative tail to vanish identically.
[[nodiscard]] SubordinatorCheck subordinator_check(const LevyModel& m, std::span<const double> grid);
[[nodiscard]] SubordinatorCheck subordinator_check(const LevyModel& m);

// Closed-form asymptotes for power-tail models. Empty for models without power parameters.
struct OracleResult {
    ConditionFlags flags;
    bool positive = false;
    bool negative = false;
    Verdict verdict = Verdict::Inconclusive;
    double A0 = 0.0;
    std::string reason;
};
[[nodiscard]] std::optional<OracleResult> analytic_oracle(const LevyModel& m);

// Richardson-style estimate of A(0+) from the tail of a decreasing grid.
[[nodiscard]] LimitEstimate estimate_A0(const LevyModel& m, std::span<const double> grid);

struct WitnessSequence {
    std::vector<double> x;
    std::vector<double> s;
    std::vector<double> t;
    std::vector<double> A;
    std::vector<double> t_tail_minus;
    std::vector<double> u_over_ta2;
    std::vector<double> ta_over_x;
    bool trends_hold = false;
    bool A_increasing = false;
};

// Times t_k built from x_k (decreasing). Throws PreconditionError naming k when
// A(x_k) <= 0 or the negative tail vanishes at x_k.
[[nodiscard]] WitnessSequence witness_sequence(const LevyModel& m, std::span<const double> x_k);

}  // namespace levypos
