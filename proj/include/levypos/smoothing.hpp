#pragma once

#include "levypos/levy_model.hpp"

#include <span>

namespace levypos {

// Density of the smoothed measure at y != 0 (y < 0 gives the negative side).
// The measure y^2/(1+y^2) Pi(dy) is convolved with N(0, 1/n) and then unweighted;
// the normalising constant cancels, so it only has to be finite.
[[nodiscard]] double smoothed_density(const LevyModel& m, int n, double y);

// Tail of the smoothed measure beyond x > 0 on the given side.
[[nodiscard]] double smoothed_tail(const LevyModel& m, int n, double x, Side side);

struct SmoothingOptions {
    bool both_sides = true;
};

// Model whose tails interpolate the smoothed tails on the grid (log-log, power-law
// extrapolation outside). With both_sides = false the negative tail is copied unchanged.
[[nodiscard]] LevyModel smooth_measure(const LevyModel& m, int n, std::span<const double> grid,
                                       SmoothingOptions opt = {});

}  // namespace levypos
