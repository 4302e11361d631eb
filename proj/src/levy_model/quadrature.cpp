#include "levypos/quadrature.hpp"

#include "levypos/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace levypos::quad {

namespace {
using Rule = boost::math::quadrature::gauss_kronrod<double, 21>;

constexpr unsigned kMaxDepth = 15;
constexpr double kNegligible = 1e-17;
constexpr double kRatioAgreement = 1e-7;
constexpr double kMinLogArg = -740.0;
constexpr double kMaxLogArg = 705.0;
constexpr int kMaxCells = 3000;

struct Accumulator {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
};

// Adaptive bisection over the fixed 21-point rule. The rule's own adaptive driver is not
// used because its error estimate is not rescaled to the sub-interval width.
template <class G>
Result adaptive(const G& g, double a, double b, unsigned depth, double cell_rel) {
    double err = 0.0;
    double l1 = 0.0;
    const double v = Rule::integrate(g, a, b, 0, 0.0, &err, &l1);
    err *= 0.5 * (b - a);
    if (depth > 0 && err > cell_rel * l1 && err > 1e-300) {
        const double mid = 0.5 * (a + b);
        const Result left = adaptive(g, a, mid, depth - 1, cell_rel);
        const Result right = adaptive(g, mid, b, depth - 1, cell_rel);
        return {left.value + right.value, left.error + right.error, left.l1 + right.l1};
    }
    return {v, err, l1};
}

// Per-cell relative target, kept well inside the caller's overall tolerance.
double cell_tolerance(Tolerance tol) {
    return std::max(1e-14, 1e-2 * tol.rel);
}

Result cell(const Integrand& f, double u0, double u1, double cell_rel) {
    auto g = [&f](double u) {
        const double y = std::exp(u);
        return f(y) * y;
    };
    const Result r = adaptive(g, u0, u1, kMaxDepth, cell_rel);
    if (!std::isfinite(r.value) || !std::isfinite(r.error)) {
        throw NumericError("quadrature produced a non-finite value", std::exp(u0), std::exp(u1));
    }
    return r;
}

// Cell over [u0, u1] split at any breakpoint strictly inside.
Result split_cell(const Integrand& f, double u0, double u1, const std::vector<double>& log_breaks,
                  double cell_rel) {
    Result total;
    double lo = u0;
    for (double b : log_breaks) {
        if (b > lo && b < u1) {
            const Result r = cell(f, lo, b, cell_rel);
            total.value += r.value;
            total.error += r.error;
            total.l1 += r.l1;
            lo = b;
        }
    }
    const Result r = cell(f, lo, u1, cell_rel);
    total.value += r.value;
    total.error += r.error;
    total.l1 += r.l1;
    return total;
}

std::vector<double> log_breaks(const std::vector<double>& breakpoints) {
    std::vector<double> out;
    out.reserve(breakpoints.size());
    for (double b : breakpoints) {
        if (b > 0.0 && std::isfinite(b)) {
            out.push_back(std::log(b));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void check_tolerance(const Accumulator& acc, Tolerance tol, double a, double b) {
    if (acc.error > tol.abs + tol.rel * acc.l1) {
        throw NumericError("quadrature did not reach tolerance (error estimate " +
                               std::to_string(acc.error) + ")",
                           a, b);
    }
}

// Shared driver for the two improper directions. `step` is -1 (towards 0) or +1.
Result improper(const Integrand& f, double start, int step, Tolerance tol,
                const std::vector<double>& breakpoints) {
    const double cell_rel = cell_tolerance(tol);
    const auto breaks = log_breaks(breakpoints);
    const double u_start = std::log(start);
    Accumulator acc;
    std::vector<double> contributions;
    int negligible_run = 0;

    double edge = u_start;
    double next = step < 0 ? std::floor(u_start) : std::ceil(u_start);
    if (next == edge) {
        next += step;
    }
    for (int n = 0; n < kMaxCells; ++n) {
        const double u0 = std::min(edge, next);
        const double u1 = std::max(edge, next);
        const Result r = split_cell(f, u0, u1, breaks, cell_rel);
        acc.value += r.value;
        acc.error += r.error;
        acc.l1 += r.l1;
        contributions.push_back(r.value);

        if (std::abs(r.value) <= kNegligible * std::abs(acc.value) ||
            (r.value == 0.0 && acc.value == 0.0)) {
            if (++negligible_run >= 3) {
                return {acc.value, acc.error, acc.l1};
            }
        } else {
            negligible_run = 0;
        }

        const std::size_t k = contributions.size();
        if (k >= 5 && negligible_run == 0) {
            const double c0 = contributions[k - 1];
            const double c1 = contributions[k - 2];
            const double c2 = contributions[k - 3];
            const double c3 = contributions[k - 4];
            if (c1 != 0.0 && c2 != 0.0 && c3 != 0.0) {
                const double r0 = c0 / c1;
                const double r1 = c1 / c2;
                const double r2 = c2 / c3;
                const bool settled = r0 > 0.0 &&
                                     std::abs(r0 - r1) <= kRatioAgreement * std::abs(r0) &&
                                     std::abs(r1 - r2) <= kRatioAgreement * std::abs(r1);
                if (settled) {
                    if (r0 >= 1.0 - 1e-9) {
                        const double lo = step < 0 ? 0.0 : start;
                        const double hi = step < 0 ? start : std::numeric_limits<double>::infinity();
                        throw NumericError("improper integral diverges", lo, hi);
                    }
                    const double rest = c0 * r0 / (1.0 - r0);
                    const double drift = std::abs(r0 - r1) / (1.0 - r0);
                    acc.value += rest;
                    acc.l1 += std::abs(rest);
                    acc.error += std::abs(rest) * drift + 1e-15 * std::abs(rest);
                    return {acc.value, acc.error, acc.l1};
                }
            }
        }

        edge = next;
        next += step;
        if (next < kMinLogArg || next > kMaxLogArg) {
            if (std::abs(r.value) <= 1e-12 * std::abs(acc.value) || acc.value == 0.0) {
                return {acc.value, acc.error, acc.l1};
            }
            const double lo = step < 0 ? 0.0 : start;
            const double hi = step < 0 ? start : std::numeric_limits<double>::infinity();
            throw NumericError("improper integral did not settle", lo, hi);
        }
    }
    throw NumericError("improper integral exceeded the cell budget", start, start);
}
}  // namespace

Result integrate_log(const Integrand& f, double a, double b, Tolerance tol,
                     const std::vector<double>& breakpoints) {
    if (!(a > 0.0) || !(b >= a) || !std::isfinite(b)) {
        throw DomainError("integrate_log needs 0 < a <= b < inf");
    }
    if (a == b) {
        return {};
    }
    const auto breaks = log_breaks(breakpoints);
    const double ua = std::log(a);
    const double ub = std::log(b);
    Accumulator acc;
    double lo = ua;
    while (lo < ub) {
        double hi = std::floor(lo) + 1.0;
        if (hi <= lo) {
            hi = lo + 1.0;
        }
        hi = std::min(hi, ub);
        const Result r = split_cell(f, lo, hi, breaks, cell_tolerance(tol));
        acc.value += r.value;
        acc.error += r.error;
        acc.l1 += r.l1;
        lo = hi;
    }
    check_tolerance(acc, tol, a, b);
    return {acc.value, acc.error, acc.l1};
}

Result integrate_to_zero(const Integrand& f, double b, Tolerance tol,
                         const std::vector<double>& breakpoints) {
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw DomainError("integrate_to_zero needs 0 < b < inf");
    }
    const Result r = improper(f, b, -1, tol, breakpoints);
    check_tolerance({r.value, r.error, r.l1}, tol, 0.0, b);
    return r;
}

Result integrate_to_infinity(const Integrand& f, double a, Tolerance tol,
                             const std::vector<double>& breakpoints) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw DomainError("integrate_to_infinity needs 0 < a < inf");
    }
    const Result r = improper(f, a, +1, tol, breakpoints);
    check_tolerance({r.value, r.error, r.l1}, tol, a, std::numeric_limits<double>::infinity());
    return r;
}

Result integrate_linear(const Integrand& f, double a, double b, Tolerance tol) {
    if (a == b) {
        return {};
    }
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    Result r = adaptive(f, lo, hi, kMaxDepth, cell_tolerance(tol));
    if (!std::isfinite(r.value)) {
        throw NumericError("quadrature produced a non-finite value", a, b);
    }
    check_tolerance({r.value, r.error, r.l1}, tol, a, b);
    if (a > b) {
        r.value = -r.value;
    }
    return r;
}

}  // namespace levypos::quad
