#include "levypos/smoothing.hpp"

#include "levypos/errors.hpp"
#include "levypos/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace levypos {

namespace {
double weight(double z) {
    const double z2 = z * z;
    return z2 / (1.0 + z2);
}

double weight_derivative(double z) {
    const double d = 1.0 + z * z;
    return 2.0 * z / (d * d);
}

// The outer tail integral runs over values that are themselves quadrature results, so it
// asks for less than the inner integrals deliver.
constexpr quad::Tolerance kOuterTol{1e-12, 1e-7};

double gauss(double n, double u) {
    return std::sqrt(n / (2.0 * std::numbers::pi)) * std::exp(-0.5 * n * u * u);
}

// int phi_n(y - z) w(z) Pi(dz) over one side, written against the tail:
// z > 0 side: int_0^inf d/dz[phi_n(y - z) w(z)] tail(z) dz.
double side_convolution(const TailFunction& tail, double n, double y, double sign) {
    if (tail.is_zero()) {
        return 0.0;
    }
    // Jumps of the side sit at sign*z, z > 0.
    const double centre = sign * y;
    auto integrand = [&tail, n, centre](double z) {
        const double d = centre - z;
        return gauss(n, d) * (n * d * weight(z) + weight_derivative(z)) * tail(z);
    };
    // Beyond 10 standard deviations the Gaussian factor is below 2e-22 of its peak.
    const double reach = 10.0 / std::sqrt(n);
    const double top = centre + reach;
    if (top <= 0.0) {
        return 0.0;
    }
    std::vector<double> breaks = tail.breakpoints();
    if (centre > 0.0) {
        breaks.push_back(centre);
    }
    const double bottom = centre - reach;
    if (bottom > 0.0) {
        // Away from 0 the tail is shifted by its value at the centre. The shift leaves the
        // measure unchanged but removes the large antisymmetric part of the integrand.
        const double level = tail(centre);
        auto shifted = [&tail, n, centre, level](double z) {
            const double d = centre - z;
            return gauss(n, d) * (n * d * weight(z) + weight_derivative(z)) * (tail(z) - level);
        };
        auto edge = [&tail, n, centre, level](double z) {
            return gauss(n, centre - z) * weight(z) * (tail(z) - level);
        };
        return quad::integrate_log(shifted, bottom, top, {}, breaks).value - edge(top) + edge(bottom);
    }
    return quad::integrate_to_zero(integrand, top, {}, breaks).value;
}
}  // namespace

double smoothed_density(const LevyModel& m, int n, double y) {
    if (n <= 0) {
        throw DomainError("smoothing level n must be positive");
    }
    if (y == 0.0 || !std::isfinite(y)) {
        throw DomainError("smoothed density needs a finite y != 0");
    }
    const double nn = static_cast<double>(n);
    const double inner =
        side_convolution(m.tail_plus, nn, y, 1.0) + side_convolution(m.tail_minus, nn, y, -1.0);
    return (1.0 + y * y) / (y * y) * inner;
}

double smoothed_tail(const LevyModel& m, int n, double x, Side side) {
    if (!(x > 0.0)) {
        throw DomainError("smoothed tail needs x > 0");
    }
    const double sign = side == Side::Plus ? 1.0 : -1.0;
    auto density = [&m, n, sign](double y) { return smoothed_density(m, n, sign * y); };
    std::vector<double> breaks{1.0};
    return quad::integrate_to_infinity(density, x, kOuterTol, breaks).value;
}

LevyModel smooth_measure(const LevyModel& m, int n, std::span<const double> grid,
                         SmoothingOptions opt) {
    if (grid.size() < 2) {
        throw DomainError("smoothing grid needs at least 2 points");
    }
    std::vector<double> xs(grid.begin(), grid.end());
    std::vector<double> plus(xs.size());
    std::vector<double> minus(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        plus[i] = smoothed_tail(m, n, xs[i], Side::Plus);
        if (opt.both_sides) {
            minus[i] = smoothed_tail(m, n, xs[i], Side::Minus);
        }
        if (!(plus[i] > 0.0) || (opt.both_sides && !(minus[i] > 0.0))) {
            throw NumericError("smoothed tail is not strictly positive", xs[i], xs[i]);
        }
    }
    LevyModel out;
    out.label = m.label + "_smoothed_n" + std::to_string(n);
    out.gamma = m.gamma;
    out.sigma2 = m.sigma2;
    out.tail_plus = table_tail(xs, plus);
    out.tail_minus = opt.both_sides ? table_tail(xs, minus) : m.tail_minus;
    return out;
}

}  // namespace levypos
