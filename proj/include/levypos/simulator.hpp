#pragma once

#include "levypos/levy_model.hpp"
#include "levypos/random.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace levypos {

inline constexpr std::uint64_t kDefaultSeed = 1;
inline constexpr double kWilsonZ = 1.959963984540054;

struct SimConfig {
    double h_plus = 0.5;
    double h_minus = 0.5;
    // Small-jump cutoff; 0 selects it automatically from surrogate_target.
    double epsilon = 0.0;
    bool gaussian_surrogate = true;
    std::size_t n_samples = 10000;
    std::uint64_t master_seed = kDefaultSeed;
    std::vector<double> t_values;
    // Automatic epsilon: largest cutoff with eps / sqrt(t (sigma2 + V(eps))) <= target.
    double surrogate_target = 0.05;
    // Cap on the expected number of band jumps per side and sample; raises epsilon.
    double max_band_rate = 5000.0;
    // Largest Poisson mean accepted for any jump count.
    double max_poisson_mean = 1e7;
    // 0: LEVYPOS_WORKERS if set, otherwise the hardware concurrency.
    unsigned workers = 0;

    // Throws PreconditionError on a violated invariant.
    void validate() const;
};

struct IncrementSample {
    double x_t = 0.0;
    double max_jump_plus = 0.0;
    double max_jump_minus = 0.0;
};

struct Estimate {
    double p_hat = 0.0;
    std::size_t n = 0;
    std::size_t successes = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

enum class SubCutoff { None, Gaussian, Dropped };

[[nodiscard]] std::string_view to_string(SubCutoff s);

struct SidePlan {
    bool active = false;
    double h = 0.0;
    double tail_eps = 0.0;
    double tail_h = 0.0;
    double band_rate = 0.0;
    double big_rate = 0.0;
    // Standard deviation of the sub-epsilon compensated activity, sqrt(t V(eps)).
    double sub_sd = 0.0;
    bool bounded_variation = false;
    SubCutoff sub_cutoff = SubCutoff::None;
};

// Everything sample_increment needs for one (model, t, cfg) triple.
struct SamplerPlan {
    double t = 0.0;
    double epsilon = 0.0;
    double drift = 0.0;
    double gauss_sd = 0.0;
    double surrogate_ratio = 0.0;
    bool surrogate_target_met = true;
    bool analytic_gaussian = false;
    std::array<SidePlan, 2> sides;

    [[nodiscard]] const SidePlan& side(Side s) const {
        return sides[s == Side::Plus ? 0 : 1];
    }
};

[[nodiscard]] SamplerPlan make_plan(const LevyModel& m, double t, const SimConfig& cfg);

[[nodiscard]] IncrementSample sample_increment(const LevyModel& m, const SamplerPlan& plan,
                                               RandomStream& stream);
[[nodiscard]] IncrementSample sample_increment(const LevyModel& m, double t,
                                               const SimConfig& cfg, RandomStream& stream);

struct SampleBatch {
    SamplerPlan plan;
    std::vector<IncrementSample> samples;
};

[[nodiscard]] unsigned resolve_workers(const SimConfig& cfg);

// n_samples increments; sample i uses make_stream(master_seed, i).
[[nodiscard]] SampleBatch simulate_batch(const LevyModel& m, double t, const SimConfig& cfg);

// Compensated jumps of one side with magnitude in (0, d], oriented so jumps are positive.
// Sub-epsilon activity follows the same rule as in sample_increment.
[[nodiscard]] std::vector<double> simulate_small_jumps(const LevyModel& m, Side side, double d,
                                                       double t, const SimConfig& cfg);

[[nodiscard]] Estimate wilson_estimate(std::size_t successes, std::size_t n, double z = kWilsonZ);

[[nodiscard]] Estimate positive_fraction(std::span<const IncrementSample> samples);
// Fraction with x_t > M * max(max_jump_minus, epsilon); M = 0 counts x_t >= 0.
[[nodiscard]] Estimate ratio_fraction(std::span<const IncrementSample> samples, double M,
                                      double epsilon);
// Fraction with x_t > M * t.
[[nodiscard]] Estimate linear_fraction(std::span<const IncrementSample> samples, double M,
                                       double t);

[[nodiscard]] Estimate estimate_positive_prob(const LevyModel& m, double t, const SimConfig& cfg);
[[nodiscard]] Estimate estimate_ratio_divergence(const LevyModel& m, double t, double M,
                                                 const SimConfig& cfg);
[[nodiscard]] Estimate estimate_linear_divergence(const LevyModel& m, double t, double M,
                                                  const SimConfig& cfg);

}  // namespace levypos
