#pragma once

#include <functional>
#include <vector>

namespace levypos::quad {

using Integrand = std::function<double(double)>;

struct Tolerance {
    double abs = 1e-10;
    double rel = 1e-9;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
};

// Integral over [a, b], 0 < a <= b, after the substitution y = e^u.
// Cell edges sit on integer u and on every supplied breakpoint.
[[nodiscard]] Result integrate_log(const Integrand& f, double a, double b, Tolerance tol = {},
                                   const std::vector<double>& breakpoints = {});

// Improper integral over (0, b]. Cells are added downwards until the contributions
// become negligible or settle into a geometric pattern that is summed in closed form.
// Throws NumericError when the contributions stop shrinking.
[[nodiscard]] Result integrate_to_zero(const Integrand& f, double b, Tolerance tol = {},
                                       const std::vector<double>& breakpoints = {});

// Improper integral over [a, inf).
[[nodiscard]] Result integrate_to_infinity(const Integrand& f, double a, Tolerance tol = {},
                                           const std::vector<double>& breakpoints = {});

// Plain adaptive Gauss-Kronrod on a finite interval in the original variable.
[[nodiscard]] Result integrate_linear(const Integrand& f, double a, double b, Tolerance tol = {});

}  // namespace levypos::quad
