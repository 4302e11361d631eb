#include "levypos/catalog.hpp"

#include "levypos/errors.hpp"

#include <cmath>

namespace levypos::catalog {

LevyModel power_tails(std::string label, double gamma, double sigma2, double alpha, double c_plus,
                      double c_minus) {
    if (!(alpha > 0.0) || !(c_plus >= 0.0) || !(c_minus >= 0.0)) {
        throw DomainError("power tails need alpha > 0 and c+- >= 0");
    }
    LevyModel m;
    m.label = std::move(label);
    m.gamma = gamma;
    m.sigma2 = sigma2;
    m.tail_plus = power_tail(alpha, c_plus);
    m.tail_minus = power_tail(alpha, c_minus);
    m.power = PowerTailParams{alpha, c_plus, c_minus};
    return m;
}

LevyModel brownian(double sigma2, double gamma) {
    LevyModel m;
    m.label = "brownian";
    m.gamma = gamma;
    m.sigma2 = sigma2;
    return m;
}

double strictly_stable_gamma(double alpha, double c_plus, double c_minus) {
    if (alpha == 1.0) {
        throw DomainError("no strictly stable centring for alpha = 1");
    }
    if (alpha < 1.0) {
        return (c_plus - c_minus) * alpha / (1.0 - alpha);
    }
    return (c_minus - c_plus) * alpha / (alpha - 1.0);
}

std::vector<LevyModel> standard() {
    return {
        power_tails("symmetric_a1", 0.0, 0.0, 1.0, 1.0, 1.0),
        power_tails("symmetric_a0.5", 0.0, 0.0, 0.5, 1.0, 1.0),
        power_tails("drift_pos_a0.5", 1.0, 0.0, 0.5, 1.0, 1.0),
        power_tails("drift_neg_a0.5", -1.0, 0.0, 0.5, 1.0, 1.0),
        power_tails("spec_neg_a1.5", 0.0, 0.0, 1.5, 0.0, 1.0),
        power_tails("spec_neg_a1.5_strict", strictly_stable_gamma(1.5, 0.0, 1.0), 0.0, 1.5, 0.0, 1.0),
        power_tails("subordinator_a0.5", 1.0, 0.0, 0.5, 1.0, 0.0),
        power_tails("spec_pos_a0.5", 0.0, 0.0, 0.5, 1.0, 0.0),
        power_tails("asym_a1.5", 0.0, 0.0, 1.5, 1.0, 2.0),
        power_tails("asym_a0.5", 0.0, 0.0, 0.5, 1.0, 2.0),
    };
}

LevyModel by_label(std::string_view label) {
    for (auto& m : standard()) {
        if (m.label == label) {
            return m;
        }
    }
    if (label == "brownian") {
        return brownian();
    }
    throw DomainError("unknown catalog label '" + std::string(label) + "'");
}

}  // namespace levypos::catalog
