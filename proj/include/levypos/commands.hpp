#pragma once

#include "levypos/levy_model.hpp"
#include "levypos/reports.hpp"
#include "levypos/simulator.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace levypos {

enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitInput = 2,
    kExitValidation = 3,
    kExitAcceptance = 4,
};

struct RunOptions {
    std::string command;
    std::filesystem::path spec;
    std::filesystem::path out;
    std::uint64_t seed = kDefaultSeed;
    std::optional<std::pair<int, int>> grid;
    std::vector<double> t;
    std::optional<std::size_t> n;
    std::optional<double> M;
    // verify without a spec: restrict the suite to these criteria.
    std::vector<int> only;
};

struct SimulationRow {
    double t = 0.0;
    std::string estimator;
    double M = 0.0;
    Estimate estimate;
    double epsilon = 0.0;
    double surrogate_ratio = 0.0;
    bool surrogate_target_met = true;
};

inline constexpr double kDefaultRatioM = 10.0;
inline constexpr double kDefaultLinearM = 0.5;

// One batch per t, shared by the positive, linear and (when the negative tail is present)
// ratio estimators.
[[nodiscard]] std::vector<SimulationRow> simulate_rows(const LevyModel& m,
                                                       const std::vector<double>& t_values,
                                                       const SimConfig& cfg, double M_ratio,
                                                       double M_linear);

// Writes simulation.json and simulation.csv into `dir`.
void write_simulation_report(const std::filesystem::path& dir, const LevyModel& m,
                             const SimConfig& cfg, double M_ratio, double M_linear,
                             const std::vector<SimulationRow>& rows);

// Runs one command; returns its exit code. Throws InputError / ValidationError on bad input.
[[nodiscard]] int run_command(const RunOptions& opt, std::ostream& out);

// Command-line entry point with exception-to-exit-code mapping.
[[nodiscard]] int cli_main(int argc, char** argv);

}  // namespace levypos
