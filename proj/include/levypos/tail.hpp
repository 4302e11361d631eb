#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace levypos {

// A non-increasing tail x -> Pi(x, inf) on (0, inf), with optional extras used by
// quadrature cross-checks, quantiles and samplers.
class TailFunction {
public:
    using Fn = std::function<double(double)>;

    TailFunction() = default;
    explicit TailFunction(Fn value);

    [[nodiscard]] static TailFunction zero() { return TailFunction{}; }

    TailFunction& with_density(Fn density);
    // Generalized inverse: smallest x with tail(x) <= y.
    TailFunction& with_inverse(Fn inverse);
    TailFunction& with_left_limit(Fn left_limit);
    TailFunction& with_breakpoints(std::vector<double> points);

    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] double left_limit(double x) const;
    [[nodiscard]] double density(double x) const;
    [[nodiscard]] double inverse(double y) const;

    [[nodiscard]] bool is_zero() const noexcept { return !value_; }
    [[nodiscard]] bool has_density() const noexcept { return static_cast<bool>(density_); }
    [[nodiscard]] bool has_inverse() const noexcept { return static_cast<bool>(inverse_); }
    [[nodiscard]] bool has_left_limit() const noexcept { return static_cast<bool>(left_limit_); }
    [[nodiscard]] const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }

private:
    Fn value_;
    Fn density_;
    Fn inverse_;
    Fn left_limit_;
    std::vector<double> breakpoints_;
};

// Tail c*x^-alpha on (0, 1], continued above 1 by c*exp(-alpha*(x-1)) so that value and
// first derivative match at 1.
[[nodiscard]] TailFunction power_tail(double alpha, double c);

// Tabulated tail: log-log interpolation between nodes (linear where a value is 0),
// power-law extrapolation beyond either end.
[[nodiscard]] TailFunction table_tail(std::vector<double> x, std::vector<double> values);

}  // namespace levypos
