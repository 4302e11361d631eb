#include "levypos/levy_model.hpp"

#include "levypos/errors.hpp"
#include "levypos/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace levypos {

namespace {

std::string fmt_num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

double second_moment_integral(const TailFunction& tail, double x) {
    // int_0^x y tail(y) dy
    if (tail.is_zero()) {
        return 0.0;
    }
    return quad::integrate_to_zero([&tail](double y) { return y * tail(y); }, x, {},
                                   tail.breakpoints())
        .value;
}

double side_second_moment_density(const TailFunction& tail, double x) {
    if (tail.is_zero()) {
        return 0.0;
    }
    return quad::integrate_to_zero([&tail](double y) { return y * y * tail.density(y); }, x, {},
                                   tail.breakpoints())
        .value;
}

double band_first_moment_density(const TailFunction& tail, double lo, double hi) {
    if (tail.is_zero() || lo == hi) {
        return 0.0;
    }
    const double a = std::min(lo, hi);
    const double b = std::max(lo, hi);
    const double v =
        quad::integrate_log([&tail](double y) { return y * tail.density(y); }, a, b, {},
                            tail.breakpoints())
            .value;
    return lo < hi ? v : -v;
}
}  // namespace

LevyModel mirror(const LevyModel& m) {
    LevyModel out = m;
    out.label = m.label + "_mirrored";
    out.gamma = -m.gamma;
    std::swap(out.tail_plus, out.tail_minus);
    if (out.power) {
        std::swap(out.power->c_plus, out.power->c_minus);
    }
    return out;
}

Activity activity(const LevyModel& m, Side s, double x_min, double threshold) {
    const TailFunction& tail = m.tail(s);
    if (tail.is_zero()) {
        return Activity::Zero;
    }
    const double v = tail(x_min);
    if (v == 0.0) {
        return Activity::Zero;
    }
    return v >= threshold ? Activity::Infinite : Activity::Finite;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& c : checks) {
        if (c.passed) {
            continue;
        }
        if (!first) {
            os << "; ";
        }
        os << c.name << ": " << c.detail;
        first = false;
    }
    if (first) {
        os << (status == ValidationStatus::AnalyticOnly ? "analytic-only (no jumps)" : "all checks passed");
    }
    return os.str();
}

ValidationReport validate_model(const LevyModel& m, const ValidationOptions& opt) {
    ValidationReport report;
    auto add = [&report](std::string name, bool passed, std::string detail) {
        report.checks.push_back({std::move(name), passed, std::move(detail)});
        return passed;
    };

    bool ok = add("parameters", std::isfinite(m.gamma) && std::isfinite(m.sigma2) && m.sigma2 >= 0.0,
                  "gamma finite and sigma2 >= 0 (gamma=" + fmt_num(m.gamma) +
                      ", sigma2=" + fmt_num(m.sigma2) + ")");

    std::vector<double> grid(static_cast<std::size_t>(opt.grid_points));
    for (int i = 0; i < opt.grid_points; ++i) {
        const double w = static_cast<double>(i) / (opt.grid_points - 1);
        grid[static_cast<std::size_t>(i)] = opt.x_min * std::pow(opt.x_max / opt.x_min, w);
    }

    for (Side s : {Side::Plus, Side::Minus}) {
        const TailFunction& tail = m.tail(s);
        const std::string name = std::string("monotone_") + std::string(to_string(s));
        if (tail.is_zero()) {
            add(name, true, "identically zero");
            continue;
        }
        std::string detail = "non-increasing on the validation grid";
        bool mono = true;
        double prev = tail(grid.front());
        if (!(prev >= 0.0) || std::isnan(prev)) {
            mono = false;
            detail = "tail value " + fmt_num(prev) + " at x=" + fmt_num(grid.front()) + " is not in [0, inf]";
        }
        for (std::size_t i = 1; mono && i < grid.size(); ++i) {
            const double v = tail(grid[i]);
            if (!(v >= 0.0) || !std::isfinite(v)) {
                mono = false;
                detail = "tail value " + fmt_num(v) + " at x=" + fmt_num(grid[i]) + " is not finite and >= 0";
            } else if (v > prev * (1.0 + 1e-12) + 1e-300) {
                mono = false;
                detail = "increases between x=" + fmt_num(grid[i - 1]) + " (" + fmt_num(prev) +
                         ") and x=" + fmt_num(grid[i]) + " (" + fmt_num(v) + ")";
            }
            prev = v;
        }
        ok = add(name, mono, detail) && ok;
    }
    if (!ok) {
        report.status = ValidationStatus::Reject;
        return report;
    }

    const double at_zero = m.tail_sum(opt.x_min);
    if (m.jump_free() || at_zero == 0.0) {
        if (m.sigma2 > 0.0) {
            add("infinite_activity", true, "no jumps; Gaussian model handled analytically");
            report.status = ValidationStatus::AnalyticOnly;
            return report;
        }
        add("infinite_activity", false, "compound Poisson excluded: the Levy measure is zero");
        report.status = ValidationStatus::Reject;
        return report;
    }
    if (!add("infinite_activity", at_zero >= opt.activity_threshold,
             at_zero >= opt.activity_threshold
                 ? "tail at x_min=" + fmt_num(opt.x_min) + " is " + fmt_num(at_zero)
                 : "compound Poisson excluded: tail at x_min=" + fmt_num(opt.x_min) + " is only " +
                       fmt_num(at_zero))) {
        report.status = ValidationStatus::Reject;
        return report;
    }

    try {
        const double u1 = winsorised_second_moment(m, 1.0);
        add("square_integrable", std::isfinite(u1), "U(1) = " + fmt_num(u1));
        report.status = std::isfinite(u1) ? ValidationStatus::Pass : ValidationStatus::Reject;
    } catch (const NumericError& e) {
        add("square_integrable", false, std::string("not a Levy measure: U(1) quadrature diverges (") +
                                            e.what() + ")");
        report.status = ValidationStatus::Reject;
    }
    return report;
}

void require_valid(const LevyModel& m, bool allow_analytic_only) {
    const ValidationReport r = validate_model(m);
    if (r.status == ValidationStatus::Pass) {
        return;
    }
    if (r.status == ValidationStatus::AnalyticOnly && allow_analytic_only) {
        return;
    }
    throw ValidationError("model '" + m.label + "' rejected: " + r.summary());
}

double tail_integral(const TailFunction& tail, double a, double b) {
    if (tail.is_zero() || a == b) {
        return 0.0;
    }
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    const double v = quad::integrate_log([&tail](double y) { return tail(y); }, lo, hi, {},
                                         tail.breakpoints())
                         .value;
    return a < b ? v : -v;
}

double tail_integral_from_zero(const TailFunction& tail, double x) {
    if (tail.is_zero()) {
        return 0.0;
    }
    return quad::integrate_to_zero([&tail](double y) { return tail(y); }, x, {}, tail.breakpoints())
        .value;
}

double band_first_moment(const TailFunction& tail, double lo, double hi) {
    if (tail.is_zero() || lo == hi) {
        return 0.0;
    }
    return lo * tail(lo) - hi * tail(hi) + tail_integral(tail, lo, hi);
}

double side_second_moment(const TailFunction& tail, double x) {
    if (tail.is_zero()) {
        return 0.0;
    }
    return 2.0 * second_moment_integral(tail, x) - x * x * tail(x);
}

NuPair nu_pm(const LevyModel& m, double h) {
    if (!(h > 0.0) || h > 1.0) {
        throw DomainError("nu_pm needs 0 < h <= 1, got h=" + fmt_num(h));
    }
    return {band_first_moment(m.tail_plus, h, 1.0), band_first_moment(m.tail_minus, h, 1.0)};
}

double winsorised_mean(const LevyModel& m, double x) {
    if (!(x > 0.0)) {
        throw DomainError("A(x) needs x > 0");
    }
    return m.gamma + m.tail_plus(1.0) - m.tail_minus(1.0) - tail_integral(m.tail_plus, x, 1.0) +
           tail_integral(m.tail_minus, x, 1.0);
}

double winsorised_second_moment(const LevyModel& m, double x) {
    if (!(x > 0.0)) {
        throw DomainError("U(x) needs x > 0");
    }
    return m.sigma2 + 2.0 * second_moment_integral(m.tail_plus, x) +
           2.0 * second_moment_integral(m.tail_minus, x);
}

Functionals functionals(const LevyModel& m, double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("functionals need a finite x > 0, got x=" + fmt_num(x));
    }
    Functionals f;
    f.x = x;
    f.tail_plus = m.tail_plus(x);
    f.tail_minus = m.tail_minus(x);
    const double int_plus = tail_integral(m.tail_plus, x, 1.0);
    const double int_minus = tail_integral(m.tail_minus, x, 1.0);
    const double one_plus = m.tail_plus(1.0);
    const double one_minus = m.tail_minus(1.0);
    const double nu_plus = m.tail_plus.is_zero() ? 0.0 : x * f.tail_plus - one_plus + int_plus;
    const double nu_minus = m.tail_minus.is_zero() ? 0.0 : x * f.tail_minus - one_minus + int_minus;
    f.nu = m.gamma - nu_plus + nu_minus;
    f.A = m.gamma + one_plus - one_minus - int_plus + int_minus;
    const double w_plus = 2.0 * second_moment_integral(m.tail_plus, x);
    const double w_minus = 2.0 * second_moment_integral(m.tail_minus, x);
    f.U = m.sigma2 + w_plus + w_minus;
    f.V_plus = w_plus - x * x * f.tail_plus;
    f.V_minus = w_minus - x * x * f.tail_minus;
    f.V = f.U - x * x * (f.tail_plus + f.tail_minus);
    return f;
}

FunctionalTable functional_table(const LevyModel& m, std::span<const double> grid) {
    FunctionalTable table;
    table.rows.reserve(grid.size());
    for (double x : grid) {
        table.rows.push_back(functionals(m, x));
    }
    return table;
}

std::vector<double> dyadic_grid(int j_min, int j_max) {
    if (j_max < j_min) {
        throw DomainError("dyadic grid needs j_min <= j_max");
    }
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(j_max - j_min + 1));
    for (int j = j_min; j <= j_max; ++j) {
        g.push_back(std::ldexp(1.0, -j));
    }
    return g;
}

std::vector<double> geometric_grid(double hi, double lo, int n) {
    if (n < 2 || !(hi > 0.0) || !(lo > 0.0)) {
        throw DomainError("geometric grid needs n >= 2 and positive end points");
    }
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        g[static_cast<std::size_t>(i)] = hi * std::pow(lo / hi, static_cast<double>(i) / (n - 1));
    }
    g.front() = hi;
    g.back() = lo;
    return g;
}

std::optional<DensityFunctionals> density_functionals(const LevyModel& m, double x) {
    const bool plus_ok = m.tail_plus.is_zero() || m.tail_plus.has_density();
    const bool minus_ok = m.tail_minus.is_zero() || m.tail_minus.has_density();
    if (!plus_ok || !minus_ok) {
        return std::nullopt;
    }
    DensityFunctionals d;
    d.nu = m.gamma - band_first_moment_density(m.tail_plus, x, 1.0) +
           band_first_moment_density(m.tail_minus, x, 1.0);
    d.V_plus = side_second_moment_density(m.tail_plus, x);
    d.V_minus = side_second_moment_density(m.tail_minus, x);
    d.V = m.sigma2 + d.V_plus + d.V_minus;
    return d;
}

double tail_quantile(const LevyModel& m, double t, Side side, double lambda) {
    if (!(t > 0.0) || !(lambda > 0.0)) {
        throw DomainError("tail_quantile needs t > 0 and lambda > 0");
    }
    if (activity(m, side) != Activity::Infinite) {
        throw PreconditionError("quantile undefined: the " + std::string(to_string(side)) +
                                " tail is finite at 0+");
    }
    const TailFunction& tail = m.tail(side);
    const double level = 1.0 / (lambda * t);
    if (tail.has_inverse()) {
        return tail.inverse(level);
    }
    double hi = 1.0;
    while (tail(hi) > level) {
        hi *= 2.0;
        if (hi > 1e300) {
            throw NumericError("quantile bisection could not bracket from above", 1.0, hi);
        }
    }
    double lo = hi;
    while (tail(lo) <= level) {
        lo *= 0.5;
        if (lo < 1e-300) {
            throw NumericError("quantile bisection could not bracket from below", lo, hi);
        }
    }
    for (int i = 0; i < 400 && hi > lo * (1.0 + 1e-15); ++i) {
        const double mid = std::sqrt(lo * hi);
        if (tail(mid) <= level) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace levypos
