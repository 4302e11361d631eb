#include "levypos/bounds.hpp"

#include "levypos/errors.hpp"
#include "levypos/quadrature.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace levypos {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// int_(0, h] y^3 Pi(dy) = 3 int_0^h y^2 tail - h^3 tail(h).
double third_moment(const TailFunction& tail, double h) {
    if (tail.is_zero() || h <= 0.0) {
        return 0.0;
    }
    const double i = quad::integrate_to_zero([&tail](double y) { return y * y * tail(y); }, h, {},
                                             tail.breakpoints())
                         .value;
    return 3.0 * i - h * h * h * tail(h);
}

double second_moment(const TailFunction& tail, double h) {
    if (tail.is_zero() || h <= 0.0) {
        return 0.0;
    }
    return side_second_moment(tail, h);
}

bool infinite(const LevyModel& m, Side s) {
    return activity(m, s) == Activity::Infinite;
}

}  // namespace

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double winsor_constant(double kappa, double C) {
    if (!(kappa > 0.0) || !(C > 0.0)) {
        throw DomainError("winsor_constant needs kappa > 0 and C > 0");
    }
    const double p = normal_cdf(-kappa);
    return 4.0 * C * std::max(kappa / p, 1.0 / (p * std::sqrt(1.0 - p / 2.0)));
}

double poisson_tail(double mu, long k) {
    if (mu < 0.0) {
        throw DomainError("poisson_tail needs mu >= 0");
    }
    if (k <= 0) {
        return 1.0;
    }
    if (mu == 0.0) {
        return 0.0;
    }
    // P(N >= k) is the regularised lower incomplete gamma P(k, mu).
    return boost::math::gamma_p(static_cast<double>(k), mu);
}

BandMoments band_moments(const LevyModel& m, double h_minus, double h_plus) {
    if (h_minus < 0.0 || h_plus < 0.0) {
        throw DomainError("band levels must be non-negative");
    }
    BandMoments b;
    b.m2 = second_moment(m.tail_plus, h_plus) + second_moment(m.tail_minus, h_minus);
    b.m3 = third_moment(m.tail_plus, h_plus) + third_moment(m.tail_minus, h_minus);
    return b;
}

double berry_esseen_bound(const LevyModel& m, double h_minus, double h_plus, double t, double x,
                          double C) {
    if (!(t > 0.0)) {
        throw DomainError("berry_esseen_bound needs t > 0");
    }
    const BandMoments b = band_moments(m, h_minus, h_plus);
    const double var = m.sigma2 + b.m2;
    if (!(var > 0.0)) {
        throw DomainError("degenerate band: sigma2 + m2 = 0 on (-" + fmt(h_minus) + ", " +
                          fmt(h_plus) + "]");
    }
    const double ax = 1.0 + std::abs(x);
    return C * b.m3 / (std::sqrt(t) * std::pow(var, 1.5) * ax * ax * ax);
}

SmallJumpCheck small_jump_bound_check(const LevyModel& m, Side side, double d, double kappa,
                                      double C, double t, const SimConfig& cfg) {
    if (!(d > 0.0)) {
        throw DomainError("small_jump_bound_check needs d > 0");
    }
    SmallJumpCheck r;
    r.K = winsor_constant(kappa, C);
    const double v = second_moment(m.tail(side), d);
    r.threshold = r.K * d - kappa * std::sqrt(t * v);
    r.target = normal_cdf(-kappa) / 2.0;
    const std::vector<double> s = simulate_small_jumps(m, side, d, t, cfg);
    const auto k = static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [&](double x) { return x <= r.threshold; }));
    r.estimate = wilson_estimate(k, s.size());
    r.passed = r.estimate.ci_high >= r.target;
    return r;
}

void BoundConfig::validate() const {
    if (!(kappa_plus > 0.0) || !(kappa_minus > 0.0)) {
        throw PreconditionError("kappa_plus and kappa_minus must be positive");
    }
    if (!(C > 0.0)) {
        throw PreconditionError("C must be positive");
    }
    if (!(c_plus > 0.0) || !(c_minus > 0.0)) {
        throw PreconditionError("c_plus and c_minus must be positive");
    }
    if (L < 0.0) {
        throw PreconditionError("L must be non-negative");
    }
}

std::string_view to_string(BoundVariant v) {
    switch (v) {
    case BoundVariant::TwoSided:
        return "two_sided";
    case BoundVariant::NoPositiveJumps:
        return "no_positive_jumps";
    case BoundVariant::FiniteNegativeSide:
        return "finite_negative_side";
    }
    return "two_sided";
}

std::string_view to_string(CheckOutcome o) {
    switch (o) {
    case CheckOutcome::Pass:
        return "pass";
    case CheckOutcome::Fail:
        return "fail";
    case CheckOutcome::Insufficient:
        return "insufficient";
    }
    return "insufficient";
}

BoundVariant select_variant(const LevyModel& m) {
    if (m.tail_plus.is_zero()) {
        return BoundVariant::NoPositiveJumps;
    }
    if (infinite(m, Side::Plus) && !infinite(m, Side::Minus)) {
        return BoundVariant::FiniteNegativeSide;
    }
    return BoundVariant::TwoSided;
}

CompositeBound composite_lower_bound(const LevyModel& m, double t, double d_plus, double d_minus,
                                     const BoundConfig& cfg) {
    return composite_lower_bound(m, t, d_plus, d_minus, cfg, select_variant(m));
}

CompositeBound composite_lower_bound(const LevyModel& m, double t, double d_plus, double d_minus,
                                     const BoundConfig& cfg, BoundVariant variant) {
    cfg.validate();
    if (!(t > 0.0)) {
        throw DomainError("composite_lower_bound needs t > 0");
    }
    CompositeBound b;
    b.variant = variant;
    b.K_plus = winsor_constant(cfg.kappa_plus, cfg.C);
    b.K_minus = winsor_constant(cfg.kappa_minus, cfg.C);
    const bool plus_terms = variant != BoundVariant::NoPositiveJumps;
    if (plus_terms) {
        if (m.tail_plus.is_zero()) {
            throw PreconditionError("positive-side terms requested but the positive tail is zero");
        }
        if (!(d_plus > 0.0)) {
            throw DomainError("d_plus must be positive");
        }
        b.t_tail_plus = t * m.tail_plus(d_plus);
        if (b.t_tail_plus > cfg.c_plus) {
            throw PreconditionError("plus side: t*tail_plus(d_plus) = " + fmt(b.t_tail_plus) +
                                    " exceeds c_plus = " + fmt(cfg.c_plus));
        }
    }

    const double phi_plus = normal_cdf(-cfg.kappa_plus);
    const double phi_minus = normal_cdf(-cfg.kappa_minus);

    if (variant == BoundVariant::FiniteNegativeSide) {
        if (infinite(m, Side::Minus)) {
            throw PreconditionError("minus side: the finite-activity variant needs a finite "
                                    "negative tail at 0+");
        }
        const double nu_plus = band_first_moment(m.tail_plus, d_plus, 1.0);
        const double nu_minus_0 =
            m.tail_minus.is_zero()
                ? 0.0
                : tail_integral_from_zero(m.tail_minus, 1.0) - m.tail_minus(1.0);
        b.threshold = t * m.gamma - t * nu_plus + t * nu_minus_0 + b.K_plus * d_plus -
                      cfg.kappa_plus * std::sqrt(t * second_moment(m.tail_plus, d_plus));
        b.rhs = std::exp(-cfg.c_plus) * phi_plus / 4.0;
        return b;
    }

    if (m.tail_minus.is_zero()) {
        throw PreconditionError("minus side: the negative tail is zero");
    }
    if (!(d_minus > 0.0)) {
        throw DomainError("d_minus must be positive");
    }
    b.t_tail_minus = t * m.tail_minus.left_limit(d_minus);
    if (b.t_tail_minus < cfg.c_minus) {
        throw PreconditionError("minus side: t*tail_minus(d_minus-) = " + fmt(b.t_tail_minus) +
                                " is below c_minus = " + fmt(cfg.c_minus));
    }
    const auto jumps_needed = static_cast<long>(std::ceil(b.K_minus + cfg.L));
    const double poisson = poisson_tail(cfg.c_minus, jumps_needed);
    double threshold = t * m.gamma + t * band_first_moment(m.tail_minus, d_minus, 1.0) -
                       cfg.L * d_minus -
                       cfg.kappa_minus * std::sqrt(t * second_moment(m.tail_minus, d_minus));
    double rhs = phi_plus * phi_minus * poisson / 8.0;
    if (plus_terms) {
        threshold += -t * band_first_moment(m.tail_plus, d_plus, 1.0) + b.K_plus * d_plus -
                     cfg.kappa_plus * std::sqrt(t * second_moment(m.tail_plus, d_plus));
        rhs *= std::exp(-cfg.c_plus);
    }
    b.threshold = threshold;
    b.rhs = rhs;
    return b;
}

CompositeCheck verify_composite_bound(const LevyModel& m, double t, double d_plus, double d_minus,
                                      const BoundConfig& cfg, const SimConfig& sim,
                                      const VerifyOptions& opt) {
    CompositeCheck c;
    c.bound = composite_lower_bound(m, t, d_plus, d_minus, cfg);
    const double target_width = opt.width_fraction * c.bound.rhs;
    SimConfig run = sim;
    for (int attempt = 0; attempt < 4; ++attempt) {
        const SampleBatch batch = simulate_batch(m, t, run);
        const auto k = static_cast<std::size_t>(
            std::count_if(batch.samples.begin(), batch.samples.end(),
                          [&](const IncrementSample& s) { return s.x_t <= c.bound.threshold; }));
        c.estimate = wilson_estimate(k, batch.samples.size());
        c.ci_width = c.estimate.ci_high - c.estimate.ci_low;
        if (c.ci_width < target_width) {
            break;
        }
        if (run.n_samples >= opt.max_samples) {
            break;
        }
        // Width scales like n^(-1/2); aim 20% past the prediction.
        const double ratio = c.ci_width / target_width;
        const auto next = static_cast<std::size_t>(
            std::ceil(1.2 * ratio * ratio * static_cast<double>(run.n_samples)));
        run.n_samples = std::min(opt.max_samples, std::max(next, run.n_samples + 1));
    }
    if (c.ci_width >= target_width) {
        c.outcome = CheckOutcome::Insufficient;
        c.note = "interval width " + fmt(c.ci_width) + " not below " + fmt(target_width) +
                 " with n = " + std::to_string(c.estimate.n);
        return c;
    }
    c.outcome = c.estimate.p_hat >= c.bound.rhs - opt.slack_widths * c.ci_width
                    ? CheckOutcome::Pass
                    : CheckOutcome::Fail;
    return c;
}

double kolmogorov_distance(std::vector<double> values) {
    if (values.empty()) {
        throw DomainError("kolmogorov_distance needs at least one value");
    }
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double f = normal_cdf(values[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

std::vector<ScalingPoint> berry_esseen_scaling(const LevyModel& m, Side side,
                                               std::span<const double> hs, double t,
                                               const SimConfig& cfg) {
    std::vector<ScalingPoint> out;
    const TailFunction& tail = m.tail(side);
    for (const double h : hs) {
        const double v = second_moment(tail, h);
        if (!(v > 0.0)) {
            throw DomainError("degenerate band: V(" + fmt(h) + ") = 0");
        }
        std::vector<double> s = simulate_small_jumps(m, side, h, t, cfg);
        const double sd = std::sqrt(t * v);
        for (double& x : s) {
            x /= sd;
        }
        ScalingPoint p;
        p.h = h;
        p.distance = kolmogorov_distance(std::move(s));
        p.scale = h / sd;
        p.c_hat = p.distance / p.scale;
        out.push_back(p);
    }
    return out;
}

}  // namespace levypos
