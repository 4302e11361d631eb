#pragma once

#include "levypos/levy_model.hpp"

#include <string_view>
#include <vector>

namespace levypos::catalog {

// Power tails c+- x^-alpha on (0,1] with the exponential cap above 1.
[[nodiscard]] LevyModel power_tails(std::string label, double gamma, double sigma2, double alpha,
                                    double c_plus, double c_minus);

// sigma2 > 0, no jumps. Validation flags it analytic-only.
[[nodiscard]] LevyModel brownian(double sigma2 = 1.0, double gamma = 0.0);

// gamma that makes the small-time law strictly stable for the power-tail family
// (drift-free for alpha < 1, centred for alpha > 1). Requires alpha != 1.
[[nodiscard]] double strictly_stable_gamma(double alpha, double c_plus, double c_minus);

// Entries exercised by the acceptance suite and the classifier oracle.
[[nodiscard]] std::vector<LevyModel> standard();
[[nodiscard]] LevyModel by_label(std::string_view label);

}  // namespace levypos::catalog
