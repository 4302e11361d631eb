#pragma once

#include "levypos/levy_model.hpp"
#include "levypos/simulator.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace levypos {

inline constexpr int kCriterionCount = 11;

struct SuiteOptions {
    std::uint64_t seed = kDefaultSeed;
    // Directory for report files written by the simulation criteria.
    std::filesystem::path scratch;
    unsigned workers = 0;
};

struct CriterionOutcome {
    int id = 0;
    std::string title;
    bool passed = false;
    double seconds = 0.0;
    std::vector<std::string> details;
};

[[nodiscard]] CriterionOutcome run_criterion(int id, const SuiteOptions& opt);
[[nodiscard]] std::vector<CriterionOutcome> run_suite(const SuiteOptions& opt,
                                                      const std::vector<int>& only = {});

// "PASS 3 classifier agreement [0.4 s]: detail; detail"
[[nodiscard]] std::string format_outcome(const CriterionOutcome& c);

// Witness times for x_k = 10^-k, k = 2..6.
[[nodiscard]] std::vector<double> witness_times(const LevyModel& m);

// Directory-level comparison used by the determinism criterion: true when both
// directories hold the same file names with identical bytes.
[[nodiscard]] bool same_files(const std::filesystem::path& a, const std::filesystem::path& b,
                              std::string& difference);

struct ModelCheckOptions {
    std::uint64_t seed = kDefaultSeed;
    std::vector<double> t_values;
    std::size_t n_samples = 20000;
    std::pair<int, int> grid{4, 40};
};

// Checks on a single user model: validation, identities, quantiles, classification and
// simulation consistent with the verdict, and the composite bound at the smallest t.
[[nodiscard]] std::vector<CriterionOutcome> verify_model(const LevyModel& m,
                                                         const ModelCheckOptions& opt);

}  // namespace levypos
